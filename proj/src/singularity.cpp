#include "octa/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "octa/errors.hpp"
#include "octa/kernels.hpp"
#include "octa/kinematics.hpp"

namespace octa {

double SigmaCoefficients::relative_magnitude() const {
  const double m = std::max({std::fabs(c2), std::fabs(c1), std::fabs(c0)});
  return scale > 0.0 ? m / scale : m;
}

SigmaCoefficients recover_sigma(const Pose& pose) {
  constexpr std::size_t kFit = kSigmaFitG.size();
  constexpr std::size_t kAll = kFit + kSigmaCheckG.size();
  std::array<double, kAll> gs;
  std::copy(kSigmaFitG.begin(), kSigmaFitG.end(), gs.begin());
  std::copy(kSigmaCheckG.begin(), kSigmaCheckG.end(), gs.begin() + kFit);

  std::array<Mat6, kAll> mats;
  double scale = 0.0;
  for (std::size_t i = 0; i < kAll; ++i) {
    const Configuration config{pose, gs[i]};
    leg_lengths(config);  // DegenerateLeg
    mats[i] = homogeneous_jacobian(config);
    double bound = 1.0;
    for (int r = 0; r < 6; ++r) bound *= mats[i].row(r).norm();
    scale = std::max(scale, bound / (gs[i] * gs[i] * gs[i]));
  }
  std::array<double, kAll> dets;
  kernels::determinant_batch(mats, dets);

  std::array<double, kAll> d;
  for (std::size_t i = 0; i < kAll; ++i) d[i] = dets[i] / (gs[i] * gs[i] * gs[i]);

  Eigen::Matrix3d v;
  Eigen::Vector3d rhs;
  for (std::size_t i = 0; i < kFit; ++i) {
    v.row(i) << gs[i] * gs[i], gs[i], 1.0;
    rhs[i] = d[i];
  }
  const Eigen::Vector3d c = v.partialPivLu().solve(rhs);

  SigmaCoefficients out{c[0], c[1], c[2], scale, 0.0};
  if (scale > 0.0) {
    for (std::size_t i = kFit; i < kAll; ++i)
      out.holdout_residual =
          std::max(out.holdout_residual, std::fabs(out.evaluate(gs[i]) - d[i]) / scale);
  }
  if (!(out.holdout_residual <= kStructureTol)) throw StructureViolation(out.holdout_residual);
  return out;
}

bool is_unavoidable(const Pose& pose, double tol) {
  return recover_sigma(pose).relative_magnitude() < tol;
}

namespace closed_form {

double z_general(const EulerOrientation& e) {
  const double e0 = e.e0, e1 = e.e1, e2 = e.e2, e3 = e.e3;
  const double num = (e0 * e0 + e3 * e3) * (e1 * e1 * e1 * e3 - 3 * e1 * e2 * e2 * e3 -
                                            3 * e1 * e1 * e2 * e0 + e2 * e2 * e2 * e0);
  return num / general_denominator(e);
}

Vec3 position_row21(const EulerOrientation& e) {
  const double e0 = e.e0, e1 = e.e1, e2 = e.e2, e3 = e.e3;
  const double e00 = e0 * e0, e11 = e1 * e1, e22 = e2 * e2, e33 = e3 * e3;
  const double x = (e00 + e33) *
                   (e33 * e11 - e33 * e22 - 4 * e1 * e2 * e0 * e3 - e11 * e11 + 6 * e22 * e11 -
                    e22 * e22 - e00 * e11 + e00 * e22) /
                   (2 * (e22 + e11) * (e00 - e33));
  const double y = (e33 + e00) *
                   (e1 * e2 * e33 + e11 * e3 * e0 - e22 * e3 * e0 + 2 * e11 * e1 * e2 -
                    2 * e1 * e22 * e2 - e1 * e2 * e00) /
                   ((e22 + e11) * (e33 - e00));
  return {x, y, z_general(e)};
}

Vec3 position_row22(const EulerOrientation& e) {
  const double e0 = e.e0, e1 = e.e1, e2 = e.e2, e3 = e.e3;
  const double e00 = e0 * e0, e11 = e1 * e1, e22 = e2 * e2, e33 = e3 * e3;
  const double x = (e33 * e33 * e11 - e33 * e33 * e22 + 3 * e33 * e11 * e22 - e33 * e22 * e22 +
                    2 * e3 * e0 * e11 * e1 * e2 + 2 * e3 * e0 * e1 * e22 * e2 -
                    e11 * e11 * e00 + 3 * e11 * e22 * e00 - e00 * e00 * e11 +
                    e00 * e00 * e22) /
                   ((e22 + e11) * (e00 - e33));
  const double y = (2 * e33 * e33 * e1 * e2 + 3 * e33 * e11 * e1 * e2 + e3 * e22 * e22 * e0 -
                    e33 * e1 * e22 * e2 - e3 * e0 * e11 * e11 - 2 * e00 * e00 * e1 * e2 +
                    e00 * e11 * e1 * e2 - 3 * e00 * e1 * e22 * e2) /
                   ((e22 + e11) * (e33 - e00));
  return {x, y, z_general(e)};
}

double general_denominator(const EulerOrientation& e) {
  return (e.e3 * e.e3 - e.e0 * e.e0) * (e.e2 * e.e2 + e.e1 * e.e1);
}

double row18_quartic(const EulerOrientation& e) {
  const double e0 = e.e0, e1 = e.e1, e2 = e.e2, e3 = e.e3;
  return e2 * e2 * e3 * e3 - 3 * e2 * e2 * e0 * e0 + 8 * e2 * e1 * e0 * e3 -
         3 * e1 * e1 * e3 * e3 + e1 * e1 * e0 * e0;
}

double general_gcd(const EulerOrientation& e) {
  return (e.e0 * e.e1 + e.e2 * e.e3) * row18_quartic(e);
}

double x_coefficient(const EulerOrientation& e) {
  const double e0 = e.e0, e1 = e.e1, e2 = e.e2, e3 = e.e3;
  return 2 * (e2 * e2 + e1 * e1) * (e0 - e3) * (e0 + e3) * (e0 * e1 - e2 * e3) *
         (e0 * e2 + e1 * e3);
}

}  // namespace closed_form

GeneralCasePositions general_case_positions(const EulerOrientation& o, double guard_tol) {
  const EulerOrientation e = o.normalized();
  struct Guard {
    double value;
    const char* name;
  };
  const Guard guards[] = {
      {closed_form::general_denominator(e), "(e3^2 - e0^2)(e1^2 + e2^2) = 0"},
      {e.e0 * e.e1 - e.e2 * e.e3, "e0 e1 - e2 e3 = 0 (row 19)"},
      {e.e0 * e.e2 + e.e1 * e.e3, "e0 e2 + e1 e3 = 0 (row 20)"},
      {e.e0 * e.e1 + e.e2 * e.e3, "e0 e1 + e2 e3 = 0 (row 17)"},
      {closed_form::row18_quartic(e), "row-18 quartic = 0"},
  };
  for (const auto& g : guards)
    if (!(std::fabs(g.value) > guard_tol)) throw DegenerateOrientation(g.name);
  return {{e, closed_form::position_row21(e)}, {e, closed_form::position_row22(e)}};
}

// ---------------------------------------------------------------------------

std::string to_string(FactorCase c) {
  switch (c) {
    case FactorCase::Case1a: return "1a";
    case FactorCase::Case2Q: return "2-Q";
    case FactorCase::Case2a: return "2a";
    case FactorCase::GeneralQ: return "general-Q";
    case FactorCase::GeneralGcd: return "general-gcd";
    case FactorCase::GeneralXCoefficient: return "general-x-coefficient";
  }
  return "?";
}

namespace {

void require(bool ok, FactorCase c, const char* what) {
  if (!ok) throw CaseMismatch("case " + to_string(c) + " requires " + what);
}

bool near_zero(double v, double tol) { return std::fabs(v) < tol; }

}  // namespace

FactorPrediction factor_oracle(FactorCase c, const EulerOrientation& o,
                                          const Vec3& position, double tol) {
  const EulerOrientation e = o.normalized();
  const double e0 = e.e0, e1 = e.e1, e2 = e.e2, e3 = e.e3;
  const double x = position.x(), y = position.y(), z = position.z();
  constexpr double s3 = std::numbers::sqrt3;
  FactorPrediction p;
  switch (c) {
    case FactorCase::Case1a:
      require(near_zero(e1, tol) && near_zero(e2, tol), c, "e1 = e2 = 0");
      p.c2 = 0.0;
      p.c1 = 0.0;
      p.c0 = -(z * z * z * (e0 * e0 + e3 * e3) * (e0 - e3) * (e0 + e3));
      break;
    case FactorCase::Case2Q:
      require(near_zero(e0 - e3, tol) && !near_zero(e3, tol), c, "e0 = e3 != 0");
      p.c2 = 2 * e3 * e3 * e3 * (e1 + e2) * (e1 - 2 * e2 - s3 * e2) * (e1 - 2 * e2 + s3 * e2);
      break;
    case FactorCase::Case2a:
      require(near_zero(e0 - e3, tol) && near_zero(e2 + e1, tol) && !near_zero(e3, tol), c,
              "e0 = e3 != 0 and e2 = -e1");
      p.c2 = 0.0;
      p.c1 = 4 * e1 * e1 * e3 * (z - 2 * e1 * e3) *
             (e1 * z + 2 * e1 * e1 * e3 + 2 * e3 * e3 * e3 + y * e3);
      p.c0 = -(4 * x * e1 * e3 * (z - 2 * e1 * e3) *
               (2 * e1 * e3 * y - e3 * e3 * z + e1 * e1 * z));
      break;
    case FactorCase::GeneralQ:
      p.c2 = (e0 * e0 + e3 * e3) * (e1 * e1 * e1 * e3 - 3 * e1 * e2 * e2 * e3 -
                                    3 * e1 * e1 * e2 * e0 + e2 * e2 * e2 * e0) -
             closed_form::general_denominator(e) * z;
      break;
    case FactorCase::GeneralGcd:
    case FactorCase::GeneralXCoefficient: {
      const double den = closed_form::general_denominator(e);
      require(!near_zero(den, tol), c, "(e3^2 - e0^2)(e1^2 + e2^2) != 0");
      const double zg = closed_form::z_general(e);
      require(std::fabs(z - zg) <= 1e-9 * (1.0 + std::fabs(zg)), c, "z on the root of Q");
      p.c2 = 0.0;
      p.c1_x_slope = closed_form::general_gcd(e) * closed_form::x_coefficient(e) / (den * den);
      break;
    }
  }
  return p;
}

FactorMeasurement measure_factor_components(FactorCase c, const Pose& pose) {
  const Pose normalized{pose.orientation.normalized(), pose.s};
  const SigmaCoefficients s = recover_sigma(normalized);
  FactorMeasurement m;
  m.scale = s.scale;
  m.values.c2 = s.c2;
  m.values.c1 = s.c1;
  m.values.c0 = s.c0;
  if (c == FactorCase::GeneralGcd || c == FactorCase::GeneralXCoefficient) {
    // c1 is affine in x, so one unit step gives the slope exactly.
    Pose shifted = normalized;
    shifted.s.x() += 1.0;
    const SigmaCoefficients t = recover_sigma(shifted);
    m.values.c1_x_slope = t.c1 - s.c1;
    m.scale = std::max(s.scale, t.scale);
  }
  return m;
}

}  // namespace octa
