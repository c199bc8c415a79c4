#include "octa/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/LU>

#include "octa/errors.hpp"
#include "octa/kernels.hpp"

namespace octa {

NonPositiveG::NonPositiveG(double g_)
    : Error("base circumradius g must be positive, got " + std::to_string(g_)), g(g_) {}

DegenerateLeg::DegenerateLeg(int leg_, double length_)
    : Error("leg " + std::to_string(leg_) + " is degenerate (length " +
            std::to_string(length_) + ")"),
      leg(leg_),
      length(length_) {}

SingularJacobian::SingularJacobian(double margin_)
    : Error("singular Jacobian (normalized determinant " + std::to_string(margin_) + ")"),
      margin(margin_) {}

StructureViolation::StructureViolation(double r)
    : Error("det J / g^3 is not quadratic in g (relative hold-out residual " +
            std::to_string(r) + ")"),
      relative_residual(r) {}

DegenerateOrientation::DegenerateOrientation(std::string guard_)
    : Error("degenerate orientation: " + guard_), guard(std::move(guard_)) {}

bool EulerOrientation::valid() const {
  return std::isfinite(e0) && std::isfinite(e1) && std::isfinite(e2) && std::isfinite(e3) &&
         norm_sq() > 0.0;
}

EulerOrientation EulerOrientation::normalized() const {
  if (!valid()) throw InvalidArgument("Euler parameters must be finite and not all zero");
  std::array<double, 4> e = as_array();
  const double inv = 1.0 / std::sqrt(norm_sq());
  double sign = 1.0;
  for (double v : e) {
    if (v != 0.0) {
      sign = v > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  for (double& v : e) v *= sign * inv;
  return {e[0], e[1], e[2], e[3]};
}

namespace layout {

namespace {
constexpr double kHalfSqrt3 = std::numbers::sqrt3 / 2.0;
}

Vec3 platform_anchor(int j) {
  switch (j) {
    case 0: return {1.0, 0.0, 0.0};
    case 1: return {-0.5, kHalfSqrt3, 0.0};
    case 2: return {-0.5, -kHalfSqrt3, 0.0};
  }
  throw InvalidArgument("platform anchor index out of range");
}

Vec3 base_direction(int j) {
  switch (j) {
    case 0: return {0.5, kHalfSqrt3, 0.0};
    case 1: return {-1.0, 0.0, 0.0};
    case 2: return {0.5, -kHalfSqrt3, 0.0};
  }
  throw InvalidArgument("base anchor index out of range");
}

}  // namespace layout

Mat3 rotation_matrix(const EulerOrientation& o) {
  const double e0 = o.e0, e1 = o.e1, e2 = o.e2, e3 = o.e3;
  Mat3 r;
  r << e0 * e0 + e1 * e1 - e2 * e2 - e3 * e3, 2 * (e1 * e2 - e0 * e3), 2 * (e1 * e3 + e0 * e2),
      2 * (e1 * e2 + e0 * e3), e0 * e0 - e1 * e1 + e2 * e2 - e3 * e3, 2 * (e2 * e3 - e0 * e1),
      2 * (e1 * e3 - e0 * e2), 2 * (e2 * e3 + e0 * e1), e0 * e0 - e1 * e1 - e2 * e2 + e3 * e3;
  return r;
}

std::array<Vec3, 3> platform_points_world(const Pose& pose) {
  const Mat3 r = rotation_matrix(pose.orientation.normalized());
  std::array<Vec3, 3> out;
  for (int j = 0; j < 3; ++j) out[j] = r * layout::platform_anchor(j) + pose.s;
  return out;
}

std::array<Vec3, 3> base_points(double g) {
  if (!(g > 0.0)) throw NonPositiveG(g);
  std::array<Vec3, 3> out;
  for (int j = 0; j < 3; ++j) out[j] = g * layout::base_direction(j);
  return out;
}

std::array<Vec3, kLegs> leg_vectors(const Configuration& config) {
  const auto n = platform_points_world(config.pose);
  const auto m = base_points(config.g);
  std::array<Vec3, kLegs> d;
  for (int k = 0; k < kLegs; ++k) d[k] = n[layout::kLegPlatform[k]] - m[layout::kLegBase[k]];
  return d;
}

namespace {

// Unit directions; throws DegenerateLeg.
std::array<Vec3, kLegs> unit_legs(const Configuration& config) {
  auto d = leg_vectors(config);
  for (int k = 0; k < kLegs; ++k) {
    const double r = d[k].norm();
    if (!(r >= kDegenerateLegLength)) throw DegenerateLeg(k + 1, r);
    d[k] /= r;
  }
  return d;
}

Vec3 base_point(const Configuration& config, int leg) {
  return config.g * layout::base_direction(layout::kLegBase[leg]);
}

}  // namespace

std::array<double, kLegs> leg_lengths(const Configuration& config) {
  const auto d = leg_vectors(config);
  std::array<double, kLegs> r;
  for (int k = 0; k < kLegs; ++k) {
    r[k] = d[k].norm();
    if (!(r[k] >= kDegenerateLegLength)) throw DegenerateLeg(k + 1, r[k]);
  }
  return r;
}

SpearLine leg_spear(const Configuration& config, int leg) {
  if (leg < 0 || leg >= kLegs) throw InvalidArgument("leg index out of range");
  const Vec3 d = leg_vectors(config)[leg];
  const double r = d.norm();
  if (!(r >= kDegenerateLegLength)) throw DegenerateLeg(leg + 1, r);
  const Vec3 l = d / r;
  return {l, base_point(config, leg).cross(l)};
}

JacobianMatrix jacobian(const Configuration& config) {
  const auto l = unit_legs(config);
  JacobianMatrix j;
  for (int k = 0; k < kLegs; ++k) {
    j.row(k).head<3>() = base_point(config, k).cross(l[k]).transpose();
    j.row(k).tail<3>() = l[k].transpose();
  }
  return j;
}

Mat6 homogeneous_jacobian(const Configuration& config) {
  const auto d = leg_vectors(config);
  Mat6 j;
  for (int k = 0; k < kLegs; ++k) {
    j.row(k).head<3>() = base_point(config, k).cross(d[k]).transpose();
    j.row(k).tail<3>() = d[k].transpose();
  }
  return j;
}

double det_jacobian(const Configuration& config) {
  return kernels::determinant(jacobian(config));
}

double margin(const Configuration& config) {
  unit_legs(config);  // degeneracy check only
  return kernels::hadamard_ratio(homogeneous_jacobian(config));
}

std::array<double, kLegs> inverse_rates(const Configuration& config,
                                        const PlatformScrew& screw, double gdot) {
  const auto l = unit_legs(config);
  std::array<double, kLegs> rdot;
  for (int k = 0; k < kLegs; ++k) {
    const Vec3 lbar = base_point(config, k).cross(l[k]);
    rdot[k] = lbar.dot(screw.q) + l[k].dot(screw.qbar) -
              gdot * layout::guide_direction(k).dot(l[k]);
  }
  return rdot;
}

namespace {

PlatformScrew solve_screw(const Configuration& config, const Vec6& rhs, double tol) {
  const JacobianMatrix j = jacobian(config);
  const double m = kernels::hadamard_ratio(j);
  if (!(std::fabs(m) >= tol)) throw SingularJacobian(m);
  const Vec6 x = j.partialPivLu().solve(rhs);
  return {x.head<3>(), x.tail<3>()};
}

}  // namespace

PlatformScrew forward_screw(const Configuration& config, const JointRates& rates, double tol) {
  const auto l = unit_legs(config);
  Vec6 rhs;
  for (int k = 0; k < kLegs; ++k)
    rhs[k] = rates.rdot[k] + rates.gdot * layout::guide_direction(k).dot(l[k]);
  return solve_screw(config, rhs, tol);
}

PlatformScrew self_motion_screw(const Configuration& config, double tol) {
  const auto l = unit_legs(config);
  Vec6 rhs;
  for (int k = 0; k < kLegs; ++k) rhs[k] = layout::guide_direction(k).dot(l[k]);
  return solve_screw(config, rhs, tol);
}

Pose mirror_pose(const Pose& pose) {
  const EulerOrientation& o = pose.orientation;
  return {{o.e0, -o.e1, o.e2, -o.e3}, Vec3(pose.s.x(), -pose.s.y(), pose.s.z())};
}

}  // namespace octa
