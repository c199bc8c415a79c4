#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "octa/errors.hpp"
#include "octa/kinematics.hpp"
#include "octa/singularity.hpp"
#include "oracles.hpp"

using namespace octa;

namespace {

Pose random_pose(std::mt19937_64& rng, double half = 2.0) {
  std::uniform_real_distribution<double> u(-half, half);
  const auto e = oracle::random_quaternion(rng);
  const double x = u(rng), y = u(rng), z = u(rng);
  return {{e[0], e[1], e[2], e[3]}, {x, y, z}};
}

// det of the homogeneous Jacobian by cofactor expansion.
double oracle_det_h(const Pose& p, double g) {
  const auto& o = p.orientation.normalized();
  const auto geo = oracle::geometry({o.e0, o.e1, o.e2, o.e3}, p.s, g);
  Mat6 j;
  for (int k = 0; k < 6; ++k) {
    const Vec3 d = geo.top[k] - geo.base[k];
    j.block<1, 3>(k, 0) = geo.base[k].cross(d).transpose();
    j.block<1, 3>(k, 3) = d.transpose();
  }
  return oracle::cofactor_det(j);
}

EulerOrientation golden() {
  const double r = std::sqrt(105.0);
  return {4 * r / 175, r / 21, 8 * r / 105, -16 * r / 525};
}

std::set<int> rows_of(const EulerOrientation& e) {
  std::set<int> rows;
  for (const auto& s : classify_orientation(e)) rows.insert(s.row);
  return rows;
}

}  // namespace

TEST_CASE("sigma coefficients reproduce the determinant at arbitrary g") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const Pose p = random_pose(rng);
    const SigmaCoefficients s = recover_sigma(p);
    CHECK(s.holdout_residual < 1e-10);
    for (double g : {0.2, 0.77, 4.0}) {
      const double ref = oracle_det_h(p, g) / (g * g * g);
      CHECK(std::fabs(s.evaluate(g) - ref) <= 1e-10 * s.scale * std::max(1.0, g * g));
    }
  }
}

TEST_CASE("the Vandermonde system is a fixed, well-conditioned matrix") {
  Eigen::Matrix3d v;
  for (int i = 0; i < 3; ++i) v.row(i) << kSigmaFitG[i] * kSigmaFitG[i], kSigmaFitG[i], 1.0;
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(v);
  const double cond = svd.singularValues()(0) / svd.singularValues()(2);
  CHECK(cond < 100.0);
}

TEST_CASE("known unavoidable poses") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 p(u(rng), u(rng), u(rng));
    CHECK(is_unavoidable({{1.0, 0.0, 0.0, 1.0}, p}));
    CHECK(is_unavoidable({{1.0, 0.0, 0.0, -1.0}, p}));
    CHECK(is_unavoidable({{1.0, 0.0, 0.0, 0.0}, {p.x(), p.y(), 0.0}}));
    CHECK_FALSE(is_unavoidable({{1.0, 0.0, 0.0, 0.0}, {p.x(), p.y(), 0.5 + std::fabs(p.z())}}));
  }
  for (double sx : {-1.0, 1.0}) {
    const Vec3 a(-148327.0 / 130830, -66032.0 / 65415, 12304.0 / 13083);
    const Vec3 b(40969.0 / 65415, -85772.0 / 65415, 12304.0 / 13083);
    CHECK(is_unavoidable({golden(), a}));
    CHECK(is_unavoidable({golden(), b}));
    CHECK_FALSE(is_unavoidable({golden(), a + Vec3(0.01 * sx, 0.0, 0.0)}));
  }
}

TEST_CASE("classification of named orientations") {
  CHECK(rows_of({1.0, 0.0, 0.0, 0.0}) == std::set<int>{1});
  CHECK(rows_of({1.0, 0.0, 0.0, 1.0}).count(2) == 1);
  CHECK(rows_of(golden()) == std::set<int>{21, 22});
  // (0, 0, 1, 1) lies on rows 15 and 20, both the x-axis line.
  const auto strata = classify_orientation({0.0, 0.0, 1.0, 1.0});
  CHECK(rows_of({0.0, 0.0, 1.0, 1.0}) == std::set<int>{15, 20});
  for (const auto& s : strata) {
    CHECK(s.position.kind == PositionSet::Kind::Line);
    CHECK(s.position.contains({0.7, 0.0, 0.0}, 1e-12));
    CHECK(is_unavoidable({s.orientation, {0.7, 0.0, 0.0}}));
  }
  // Generic positions at this orientation are not unavoidable.
  CHECK_FALSE(is_unavoidable({{0.0, 0.0, 1.0, 1.0}, {0.3, 0.4, 0.5}}));
}

TEST_CASE("golden positions from the general-case formulas") {
  const GeneralCasePositions p = general_case_positions(golden());
  const Vec3 a(-148327.0 / 130830, -66032.0 / 65415, 12304.0 / 13083);
  const Vec3 b(40969.0 / 65415, -85772.0 / 65415, 12304.0 / 13083);
  const double da = std::min((p.row21.s - a).norm(), (p.row22.s - a).norm());
  const double db = std::min((p.row21.s - b).norm(), (p.row22.s - b).norm());
  CHECK(da < 1e-12);
  CHECK(db < 1e-12);
  CHECK(closed_form::z_general(golden()) == doctest::Approx(12304.0 / 13083).epsilon(1e-14));
}

TEST_CASE("general-case guards") {
  CHECK_THROWS_AS(general_case_positions({1.0, 0.0, 0.0, 1.0}), DegenerateOrientation);
  CHECK_THROWS_AS(general_case_positions({1.0, 0.3, 0.0, 0.0}), DegenerateOrientation);
  // e0 e1 - e2 e3 = 0 with a nonzero denominator.
  try {
    general_case_positions({0.6, 0.5, 0.3, 1.0});
    FAIL("expected DegenerateOrientation");
  } catch (const DegenerateOrientation& e) {
    CHECK(e.guard.find("row 19") != std::string::npos);
  }
}

TEST_CASE("every table row samples to unavoidable poses") {
  for (int row = 1; row <= kTableRows; ++row) {
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      if (b == Branch::Minus && !row_is_signed(row)) {
        CHECK_THROWS_AS(sample_row(row, b, 1), InvalidArgument);
        continue;
      }
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const StratumSample s = sample_row(row, b, seed);
        CAPTURE(row);
        CAPTURE(seed);
        CHECK(is_unavoidable(s.pose));
        for (double r : row_conditions(row, b, s.pose.orientation)) CHECK(std::fabs(r) < 1e-10);
        // Classification finds the row it was sampled from.
        bool found = false;
        for (const auto& st : classify_orientation(s.pose.orientation, 1e-9))
          found = found || (st.row == row && st.branch == b);
        CHECK(found);
        CHECK(row_position_set(row, b, s.pose.orientation).contains(s.pose.s, 1e-9));
      }
    }
  }
}

TEST_CASE("stratum samples cover the position set") {
  const auto strata = classify_orientation({1.0, 0.0, 0.0, 0.3});
  REQUIRE(strata.size() == 1);
  CHECK(strata[0].row == 1);
  CHECK(strata[0].dim == 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StratumSample s = sample_stratum(strata[0], seed);
    CHECK(s.pose.s.z() == 0.0);
    CHECK(is_unavoidable(s.pose));
  }
}

TEST_CASE("unsigned rows carry no sign branch") {
  std::set<int> signed_rows;
  for (int row = 1; row <= kTableRows; ++row)
    if (row_is_signed(row)) signed_rows.insert(row);
  CHECK(signed_rows == std::set<int>{2, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  CHECK_THROWS_AS(row_dimension(0), InvalidArgument);
  CHECK_THROWS_AS(row_dimension(23), InvalidArgument);
}

TEST_CASE("factor oracles agree with the recovered coefficients") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto check = [](std::optional<double> pred, std::optional<double> meas, double scale) {
    if (!pred) return;
    REQUIRE(meas.has_value());
    CHECK(std::fabs(*meas - kFactorScale * *pred) / scale < 1e-9);
  };
  for (int i = 0; i < 30; ++i) {
    const double a = u(rng), b = u(rng), d = u(rng);
    const Vec3 p(2 * u(rng), 2 * u(rng), 2 * u(rng));
    struct Item {
      FactorCase c;
      EulerOrientation e;
    };
    const Item items[] = {{FactorCase::Case1a, {a, 0.0, 0.0, b}},
                          {FactorCase::Case2Q, {d, a, b, d}},
                          {FactorCase::Case2a, {d, a, -a, d}},
                          {FactorCase::GeneralQ, {a, b, d, 0.4}}};
    for (const auto& it : items) {
      const EulerOrientation e = it.e.normalized();
      const auto pred = factor_oracle(it.c, e, p);
      const auto m = measure_factor_components(it.c, {e, p});
      check(pred.c2, m.values.c2, m.scale);
      check(pred.c1, m.values.c1, m.scale);
      check(pred.c0, m.values.c0, m.scale);
    }
    const EulerOrientation e = EulerOrientation{a, b, d, 0.7}.normalized();
    if (std::fabs(closed_form::general_denominator(e)) < 1e-2) continue;
    const Vec3 q(p.x(), p.y(), closed_form::z_general(e));
    for (FactorCase c : {FactorCase::GeneralGcd, FactorCase::GeneralXCoefficient}) {
      const auto pred = factor_oracle(c, e, q);
      const auto m = measure_factor_components(c, {e, q});
      CHECK(std::fabs(*m.values.c2) / m.scale < 1e-9);
      check(pred.c1_x_slope, m.values.c1_x_slope, m.scale);
    }
  }
}

TEST_CASE("factor oracles reject the wrong case") {
  CHECK_THROWS_AS(factor_oracle(FactorCase::Case1a, {1.0, 0.5, 0.0, 0.0}, Vec3::Zero()),
                  CaseMismatch);
  CHECK_THROWS_AS(factor_oracle(FactorCase::Case2a, {1.0, 0.5, 0.5, 1.0}, Vec3::Zero()),
                  CaseMismatch);
  CHECK_THROWS_AS(
      factor_oracle(FactorCase::GeneralGcd, {0.3, 0.5, 0.2, 0.9}, {0.0, 0.0, 5.0}),
      CaseMismatch);
}

TEST_CASE("the unavoidable locus at a general orientation is exactly two points") {
  // With all coefficients zero only at the two points, nearby points on the
  // plane z = z_general must fail.
  const EulerOrientation e = EulerOrientation{0.3, 0.5, 0.2, 0.9}.normalized();
  const GeneralCasePositions p = general_case_positions(e);
  CHECK(is_unavoidable(p.row21));
  CHECK(is_unavoidable(p.row22));
  const Vec3 mid = 0.5 * (p.row21.s + p.row22.s);
  CHECK_FALSE(is_unavoidable({e, mid}));
  CHECK(closed_form::row18_quartic(e) != 0.0);
}
