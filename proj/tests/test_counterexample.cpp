#include <doctest.h>

#include <cmath>
#include <random>

#include "octa/counterexample.hpp"
#include "octa/errors.hpp"
#include "octa/kernels.hpp"
#include "oracles.hpp"

using namespace octa;

namespace {

const std::pair<double, double> kParams[] = {{1.0, 0.5}, {0.7, 0.3}};

RedundantParams random_lambda(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = u(rng), b = u(rng), c = u(rng);
  return {{a, b, c}};
}

}  // namespace

TEST_CASE("construction invariants") {
  for (const auto& [h, len] : kParams) {
    const RedundantOctahedron mech = build_counterexample(h, len);
    CHECK(mech.height == h);
    CHECK(mech.half_length == len);
    for (int k = 0; k < kLegs; ++k) {
      CHECK(mech.m[k].norm() == doctest::Approx(1.0));
      CHECK(mech.m[k].z() == 0.0);
      CHECK(std::fabs(mech.tangent[k].dot(mech.m[k])) < 1e-15);
    }
    for (int k = 0; k < kLegs; k += 2) {
      CHECK(collinearity_defect(mech, k) < 1e-14);
      CHECK((mech.seg_b[k] - mech.seg_a[k]).norm() == doctest::Approx(2 * len));
      CHECK((0.5 * (mech.seg_a[k] + mech.seg_b[k]) - mech.m[k]).norm() < 1e-15);
    }
    // Every base point lies on the tangent at its platform anchor, in the base plane.
    for (double l : {0.0, 0.37, 1.0}) {
      const auto b = mech.base_points({{l, l, l}});
      for (int k = 0; k < kLegs; ++k) {
        CHECK(b[k].z() == 0.0);
        CHECK(std::fabs((b[k] - mech.m[k]).dot(mech.m[k])) < 1e-14);
      }
    }
    CHECK_THROWS_AS(collinearity_defect(mech, 1), InvalidArgument);
  }
  CHECK_THROWS_AS(build_counterexample(0.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(build_counterexample(1.0, -0.5), InvalidArgument);
  CHECK_THROWS_AS(build_counterexample(1.0, 0.5, 75.0), InvalidArgument);
}

TEST_CASE("jacobian rows are unit Pluecker lines") {
  const RedundantOctahedron mech = build_counterexample();
  std::mt19937_64 rng(51);
  for (int i = 0; i < 20; ++i) {
    const RedundantParams p = random_lambda(rng);
    const Pose pose = start_pose(mech);
    const Mat6 j = jacobian_red(mech, pose, p);
    const auto b = mech.base_points(p);
    for (int k = 0; k < kLegs; ++k) {
      const Vec3 l = j.block<1, 3>(k, 3).transpose();
      CHECK(l.norm() == doctest::Approx(1.0));
      CHECK(l.z() > 0.0);
      CHECK((j.block<1, 3>(k, 0).transpose() - b[k].cross(l)).norm() < 1e-14);
    }
    double prod = 1.0;
    for (int k = 0; k < kLegs; ++k) prod *= std::sqrt(1.0 + j.block<1, 3>(k, 0).squaredNorm());
    CHECK(margin_red(mech, pose, p) ==
          doctest::Approx(oracle::cofactor_det(j) / prod).epsilon(1e-10));
  }
}

TEST_CASE("start pose is nonsingular at mid-segment") {
  for (const auto& [h, len] : kParams) {
    const RedundantOctahedron mech = build_counterexample(h, len);
    CHECK(std::fabs(margin_red(mech, start_pose(mech), {})) > 1e-3);
    CHECK(verify_unavoidable(mech, start_pose(mech), 11).max_margin > 0.01);
  }
}

TEST_CASE("the rotated pose is singular for every redundant parameter") {
  std::mt19937_64 rng(52);
  for (const auto& [h, len] : kParams) {
    const RedundantOctahedron mech = build_counterexample(h, len);
    const Pose f = fichter_pose(mech);
    for (int i = 0; i < 200; ++i) CHECK(std::fabs(margin_red(mech, f, random_lambda(rng))) < 1e-12);
    const UnavoidableReport rep = verify_unavoidable(mech, f, 11);
    CHECK(rep.grid_n == 11);
    CHECK(rep.max_margin < 1e-9);
    // Other hexagon shapes share the property.
    for (double alpha : {5.0, 35.0}) {
      const RedundantOctahedron other = build_counterexample(h, len, alpha);
      CHECK(verify_unavoidable(other, fichter_pose(other), 5).max_margin < 1e-9);
    }
  }
}

TEST_CASE("the determinant is multilinear in the redundant parameters") {
  for (const auto& [h, len] : kParams) {
    const RedundantOctahedron mech = build_counterexample(h, len);
    const LambdaPolynomial start = fit_lambda_polynomial(mech, start_pose(mech), 5);
    CHECK(start.fit_residual < 1e-12);
    CHECK(start.max_abs_above_multilinear() < 1e-10);
    CHECK(start.max_abs() > 1e-3);
    const LambdaPolynomial f = fit_lambda_polynomial(mech, fichter_pose(mech), 11);
    CHECK(f.max_abs() < 1e-9);
  }
}

TEST_CASE("coplanar poses are singular") {
  const RedundantOctahedron mech = build_counterexample();
  CHECK(verify_unavoidable(mech, coplanar_pose(), 7).max_margin < 1e-12);
  // With the platform in the base plane and not turned, the mid-segment base
  // point of a redundant leg coincides with its platform point.
  const Pose flat{{1.0, 0.0, 0.0, 0.0}, Vec3::Zero()};
  CHECK_THROWS_AS(margin_red(mech, flat, {}), DegenerateLeg);
}

TEST_CASE("threefold symmetry") {
  const RedundantOctahedron mech = build_counterexample();
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const auto e = oracle::random_quaternion(rng);
    const Pose p{{e[0], e[1], e[2], e[3]}, {0.3 * u(rng), 0.3 * u(rng), 1.0 + 0.3 * u(rng)}};
    const RedundantParams l = random_lambda(rng);
    const RedundantParams shifted{{l.lambda[2], l.lambda[0], l.lambda[1]}};
    const Pose r = rotate_third(p);
    CHECK(margin_red(mech, r, shifted) == doctest::Approx(margin_red(mech, p, l)).epsilon(1e-10));
    // Three turns return the pose.
    const Pose back = rotate_third(rotate_third(r));
    CHECK((back.s - p.s).norm() < 1e-14);
  }
}

TEST_CASE("report and parameter validation") {
  const RedundantOctahedron mech = build_counterexample();
  CHECK_THROWS_AS(verify_unavoidable(mech, start_pose(mech), 1), InvalidArgument);
  CHECK_THROWS_AS(fit_lambda_polynomial(mech, start_pose(mech), 2), InvalidArgument);
  CHECK_THROWS_AS(margin_red(mech, start_pose(mech), {{0.5, 1.5, 0.5}}), InvalidArgument);
  const UnavoidableReport a = verify_unavoidable(mech, start_pose(mech), 6, 1);
  const UnavoidableReport b = verify_unavoidable(mech, start_pose(mech), 6, 3);
  CHECK(a.max_margin == b.max_margin);
  CHECK(a.argmax.lambda == b.argmax.lambda);
  CHECK(std::fabs(margin_red(mech, start_pose(mech), a.argmax)) == doctest::Approx(a.max_margin).epsilon(1e-14));
}
