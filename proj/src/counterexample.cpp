#include "octa/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <Eigen/QR>

#include "octa/errors.hpp"
#include "octa/kernels.hpp"
#include "octa/kinematics.hpp"

namespace octa {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Redundant leg k shares its line with the fixed leg partner(k).
constexpr int partner(int k) { return (k + 5) % 6; }

Vec3 on_circle(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

// Intersection of the tangents at angles t1, t2 (unit circle, z = 0).
Vec3 tangent_intersection(double t1, double t2) {
  const double mid = 0.5 * (t1 + t2);
  return on_circle(mid) / std::cos(0.5 * (t2 - t1));
}

std::array<Vec3, kLegs> world_points(const RedundantOctahedron& mech, const Pose& pose) {
  const Mat3 r = rotation_matrix(pose.orientation.normalized());
  std::array<Vec3, kLegs> out;
  for (int k = 0; k < kLegs; ++k) out[k] = r * mech.m[k] + pose.s;
  return out;
}

}  // namespace

void RedundantParams::validate() const {
  for (double l : lambda)
    if (!(l >= 0.0 && l <= 1.0)) throw InvalidArgument("redundant parameters must lie in [0, 1]");
}

std::array<Vec3, kLegs> RedundantOctahedron::base_points(const RedundantParams& p) const {
  std::array<Vec3, kLegs> out;
  for (int k = 0; k < kLegs; ++k)
    out[k] = kRedundant[k] ? seg_a[k] + p.lambda[k / 2] * (seg_b[k] - seg_a[k]) : fixed[k];
  return out;
}

RedundantOctahedron build_counterexample(double height, double half_length, double alpha_deg) {
  if (!(height > 0.0)) throw InvalidArgument("platform height must be positive");
  if (!(half_length > 0.0)) throw InvalidArgument("segment half-length must be positive");
  if (!(alpha_deg > 0.0 && alpha_deg < 60.0))
    throw InvalidArgument("hexagon half-angle must lie in (0, 60) degrees");

  RedundantOctahedron mech;
  mech.height = height;
  mech.half_length = half_length;
  mech.alpha = alpha_deg * kDeg;
  const double a = mech.alpha;
  // Short edges are centered at 0, 120 and 240 degrees.
  const std::array<double, kLegs> theta = {a,           120 * kDeg - a, 120 * kDeg + a,
                                           240 * kDeg - a, 240 * kDeg + a, -a};
  for (int k = 0; k < kLegs; ++k) {
    mech.m[k] = on_circle(theta[k]);
    mech.tangent[k] = Vec3(-std::sin(theta[k]), std::cos(theta[k]), 0.0);
    mech.fixed[k] = Vec3::Zero();
    mech.seg_a[k] = Vec3::Zero();
    mech.seg_b[k] = Vec3::Zero();
  }
  for (int k = 0; k < kLegs; k += 2) {
    mech.seg_a[k] = mech.m[k] - half_length * mech.tangent[k];
    mech.seg_b[k] = mech.m[k] + half_length * mech.tangent[k];
    const int j = partner(k);
    mech.fixed[j] = tangent_intersection(theta[j], theta[k]);
  }
  return mech;
}

double collinearity_defect(const RedundantOctahedron& mech, int redundant_leg) {
  if (redundant_leg < 0 || redundant_leg >= kLegs || !RedundantOctahedron::kRedundant[redundant_leg])
    throw InvalidArgument("not a redundant leg");
  const Vec3 a = mech.seg_a[redundant_leg];
  const Vec3 u = (mech.seg_b[redundant_leg] - a).normalized();
  const Vec3 r = mech.fixed[partner(redundant_leg)] - a;
  return (r - r.dot(u) * u).norm();
}

Pose start_pose(const RedundantOctahedron& mech) { return {{1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, mech.height}}; }

Pose fichter_pose(const RedundantOctahedron& mech) {
  return {{1.0, 0.0, 0.0, -1.0}, {0.0, 0.0, mech.height}};
}

Pose coplanar_pose() {
  return {{std::cos(22.5 * kDeg), 0.0, 0.0, std::sin(22.5 * kDeg)}, Vec3::Zero()};
}

Mat6 homogeneous_jacobian_red(const RedundantOctahedron& mech, const Pose& pose,
                              const RedundantParams& p) {
  const auto n = world_points(mech, pose);
  const auto b = mech.base_points(p);
  Mat6 j;
  for (int k = 0; k < kLegs; ++k) {
    const Vec3 d = n[k] - b[k];
    j.block<1, 3>(k, 0) = b[k].cross(d).transpose();
    j.block<1, 3>(k, 3) = d.transpose();
  }
  return j;
}

namespace {

void check_legs(const Mat6& h) {
  for (int k = 0; k < kLegs; ++k) {
    const double len = h.block<1, 3>(k, 3).norm();
    if (!(len > kDegenerateLegLength)) throw DegenerateLeg(k + 1, len);
  }
}

}  // namespace

Mat6 jacobian_red(const RedundantOctahedron& mech, const Pose& pose, const RedundantParams& p) {
  p.validate();
  Mat6 j = homogeneous_jacobian_red(mech, pose, p);
  check_legs(j);
  for (int k = 0; k < kLegs; ++k) j.row(k) /= j.block<1, 3>(k, 3).norm();
  return j;
}

double margin_red(const RedundantOctahedron& mech, const Pose& pose, const RedundantParams& p) {
  p.validate();
  const Mat6 h = homogeneous_jacobian_red(mech, pose, p);
  check_legs(h);
  return kernels::hadamard_ratio(h);
}

namespace {

double grid_value(int i, int n) { return static_cast<double>(i) / (n - 1); }

}  // namespace

UnavoidableReport verify_unavoidable(const RedundantOctahedron& mech, const Pose& pose,
                                     int grid_n, int threads) {
  if (grid_n < 2) throw InvalidArgument("grid_n must be at least 2");
  const std::size_t cells = static_cast<std::size_t>(grid_n) * grid_n * grid_n;
  std::vector<Mat6> mats(cells);
  auto fill = [&](int a) {
    for (int b = 0; b < grid_n; ++b)
      for (int c = 0; c < grid_n; ++c) {
        const RedundantParams p{{grid_value(a, grid_n), grid_value(b, grid_n), grid_value(c, grid_n)}};
        Mat6& h = mats[(static_cast<std::size_t>(a) * grid_n + b) * grid_n + c];
        h = homogeneous_jacobian_red(mech, pose, p);
        check_legs(h);
      }
  };
  const int workers = std::clamp(threads, 1, grid_n);
  if (workers == 1) {
    for (int a = 0; a < grid_n; ++a) fill(a);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int a = w; a < grid_n; a += workers) fill(a);
      });
  }
  std::vector<double> ratios(cells);
  kernels::hadamard_ratio_batch(mats, ratios);

  UnavoidableReport rep;
  rep.pose = pose;
  rep.grid_n = grid_n;
  rep.max_margin = -1.0;
  for (std::size_t idx = 0; idx < cells; ++idx) {
    const double v = std::fabs(ratios[idx]);
    if (v > rep.max_margin) {
      rep.max_margin = v;
      const int c = static_cast<int>(idx % grid_n);
      const int b = static_cast<int>((idx / grid_n) % grid_n);
      const int a = static_cast<int>(idx / (static_cast<std::size_t>(grid_n) * grid_n));
      rep.argmax = {{grid_value(a, grid_n), grid_value(b, grid_n), grid_value(c, grid_n)}};
    }
  }
  return rep;
}

double LambdaPolynomial::max_abs() const {
  double m = 0.0;
  for (double c : coeff) m = std::max(m, std::fabs(c));
  return m;
}

double LambdaPolynomial::max_abs_above_multilinear() const {
  double m = 0.0;
  for (int i = 0; i < 27; ++i)
    if (i % 3 == 2 || (i / 3) % 3 == 2 || i / 9 == 2) m = std::max(m, std::fabs(coeff[i]));
  return m;
}

LambdaPolynomial fit_lambda_polynomial(const RedundantOctahedron& mech, const Pose& pose,
                                       int grid_n) {
  if (grid_n < 3) throw InvalidArgument("a degree-2 fit needs grid_n >= 3");
  const int cells = grid_n * grid_n * grid_n;
  Eigen::MatrixXd v(cells, 27);
  Eigen::VectorXd rhs(cells);
  LambdaPolynomial poly;
  int row = 0;
  for (int a = 0; a < grid_n; ++a)
    for (int b = 0; b < grid_n; ++b)
      for (int c = 0; c < grid_n; ++c, ++row) {
        const double x = grid_value(a, grid_n), y = grid_value(b, grid_n), z = grid_value(c, grid_n);
        const Mat6 h = homogeneous_jacobian_red(mech, pose, {{x, y, z}});
        double bound = 1.0;
        for (int r = 0; r < 6; ++r) bound *= h.row(r).norm();
        poly.scale = std::max(poly.scale, bound);
        rhs[row] = kernels::determinant(h);
        const double px[3] = {1.0, x, x * x}, py[3] = {1.0, y, y * y}, pz[3] = {1.0, z, z * z};
        for (int i = 0; i < 27; ++i) v(row, i) = px[i % 3] * py[(i / 3) % 3] * pz[i / 9];
      }
  if (poly.scale > 0.0) rhs /= poly.scale;
  const Eigen::VectorXd sol = v.colPivHouseholderQr().solve(rhs);
  for (int i = 0; i < 27; ++i) poly.coeff[i] = sol[i];
  poly.fit_residual = (v * sol - rhs).cwiseAbs().maxCoeff();
  return poly;
}

Pose rotate_third(const Pose& pose) {
  const double c = -0.5, s = std::numbers::sqrt3 / 2.0;
  const EulerOrientation o = pose.orientation;
  return {{o.e0, c * o.e1 - s * o.e2, s * o.e1 + c * o.e2, o.e3},
          {c * pose.s.x() - s * pose.s.y(), s * pose.s.x() + c * pose.s.y(), pose.s.z()}};
}

}  // namespace octa
