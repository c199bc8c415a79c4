#include <doctest.h>

#include <cmath>
#include <random>

#include "octa/errors.hpp"
#include "octa/kinematics.hpp"
#include "oracles.hpp"

using namespace octa;

namespace {

const Configuration kHome{{{1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 1.0}}, 1.0};

Configuration random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto e = oracle::random_quaternion(rng);
  const double x = 0.5 * u(rng), y = 0.5 * u(rng), z = 1.0 + 0.5 * u(rng);
  const double g = 1.25 + 0.75 * u(rng);
  return {{{e[0], e[1], e[2], e[3]}, {x, y, z}}, g};
}

}  // namespace

TEST_CASE("normalized orientation representative") {
  const EulerOrientation e = EulerOrientation{-2.0, 0.0, 2.0, 0.0}.normalized();
  CHECK(e.norm_sq() == doctest::Approx(1.0));
  CHECK(e.e0 > 0.0);
  const EulerOrientation f = EulerOrientation{0.0, -1.0, 1.0, 0.0}.normalized();
  CHECK(f.e1 > 0.0);
  CHECK_THROWS_AS(EulerOrientation({0.0, 0.0, 0.0, 0.0}).normalized(), InvalidArgument);
}

TEST_CASE("unnormalized rotation matrix") {
  const EulerOrientation e{1.0, 2.0, -0.5, 0.3};
  const Mat3 r = rotation_matrix(e);
  const double n = e.norm_sq();
  CHECK((r * r.transpose() - n * n * Mat3::Identity()).norm() < 1e-12);
  CHECK(r.determinant() == doctest::Approx(n * n * n));
  const Eigen::Quaterniond q(e.e0, e.e1, e.e2, e.e3);
  CHECK((r / n - q.normalized().toRotationMatrix()).norm() < 1e-14);
}

TEST_CASE("home pose leg lengths") {
  for (double r : leg_lengths(kHome)) CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("leg lengths match the independent geometry") {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 200; ++i) {
    const Configuration c = random_config(rng);
    const auto& o = c.pose.orientation;
    const auto geo = oracle::geometry({o.e0, o.e1, o.e2, o.e3}, c.pose.s, c.g);
    const auto r = leg_lengths(c);
    for (int k = 0; k < kLegs; ++k) CHECK(r[k] == doctest::Approx((geo.top[k] - geo.base[k]).norm()));
  }
}

TEST_CASE("input errors") {
  Configuration c = kHome;
  c.g = 0.0;
  CHECK_THROWS_AS(leg_lengths(c), NonPositiveG);
  c.g = -1.0;
  CHECK_THROWS_AS(margin(c), NonPositiveG);
  // Platform anchor 0 placed on base anchor 0 of leg 1 (0-based).
  const Vec3 m0 = layout::platform_anchor(0);
  const Vec3 b = layout::base_direction(0);
  Configuration d{{{1.0, 0.0, 0.0, 0.0}, b - m0}, 1.0};
  CHECK_THROWS_AS(leg_lengths(d), DegenerateLeg);
  try {
    leg_lengths(d);
  } catch (const DegenerateLeg& e) {
    CHECK(e.leg == 2);
  }
}

TEST_CASE("spear coordinates") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 50; ++i) {
    const Configuration c = random_config(rng);
    const auto m = base_points(c.g);
    for (int k = 0; k < kLegs; ++k) {
      const SpearLine s = leg_spear(c, k);
      CHECK(s.l.norm() == doctest::Approx(1.0));
      CHECK((s.lbar - m[layout::kLegBase[k]].cross(s.l)).norm() < 1e-14);
      CHECK(std::fabs(s.l.dot(s.lbar)) < 1e-14);
    }
  }
}

TEST_CASE("jacobian and margin match the oracle") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    const Configuration c = random_config(rng);
    const auto& o = c.pose.orientation;
    const std::array<double, 4> e{o.e0, o.e1, o.e2, o.e3};
    const Mat6 ref = oracle::unit_jacobian(oracle::geometry(e, c.pose.s, c.g));
    CHECK((jacobian(c) - ref).norm() < 1e-13);
    CHECK(det_jacobian(c) == doctest::Approx(oracle::cofactor_det(ref)).epsilon(1e-10));
    CHECK(margin(c) == doctest::Approx(oracle::normalized_det(e, c.pose.s, c.g)).epsilon(1e-10));
  }
}

TEST_CASE("margin ignores the scale of the Euler parameters") {
  std::mt19937_64 rng(24);
  for (int i = 0; i < 20; ++i) {
    Configuration c = random_config(rng);
    const double m = margin(c);
    c.pose.orientation = c.pose.orientation.scaled(-3.7);
    CHECK(margin(c) == doctest::Approx(m).epsilon(1e-12));
  }
}

TEST_CASE("mirror symmetry") {
  std::mt19937_64 rng(25);
  for (int i = 0; i < 100; ++i) {
    const Configuration c = random_config(rng);
    const Configuration m{mirror_pose(c.pose), c.g};
    const auto r = leg_lengths(c);
    const auto rm = leg_lengths(m);
    for (int k = 0; k < kLegs; ++k) CHECK(rm[k] == doctest::Approx(r[kMirrorLeg[k]]));
    // A reflection flips the sign of the Pluecker determinant; the
    // odd leg permutation flips it back.
    CHECK(std::fabs(margin(m)) == doctest::Approx(std::fabs(margin(c))).epsilon(1e-10));
  }
}

TEST_CASE("inverse rates against finite differences") {
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Configuration c = random_config(rng);
    const Vec3 w(u(rng), u(rng), u(rng));
    const Vec3 v(u(rng), u(rng), u(rng));
    const double gdot = u(rng);
    // Rigid motion with angular velocity w and origin-point velocity v.
    auto at = [&](double t) {
      Configuration ct = c;
      const Eigen::Quaterniond dq(Eigen::AngleAxisd(t * w.norm(), w.normalized()));
      const auto& o = c.pose.orientation;
      const Eigen::Quaterniond q = dq * Eigen::Quaterniond(o.e0, o.e1, o.e2, o.e3).normalized();
      ct.pose.orientation = {q.w(), q.x(), q.y(), q.z()};
      ct.pose.s = dq * c.pose.s + t * v;
      ct.g = c.g + t * gdot;
      return ct;
    };
    const auto rates = inverse_rates(c, {w, v}, gdot);
    for (int k = 0; k < kLegs; ++k) {
      const double fd =
          oracle::central_difference([&](double t) { return leg_lengths(at(t))[k]; }, 0.0, 1e-6);
      CHECK(rates[k] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("forward screw inverts inverse rates") {
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int tested = 0;
  while (tested < 50) {
    const Configuration c = random_config(rng);
    if (std::fabs(margin(c)) < 1e-3) continue;
    ++tested;
    const PlatformScrew s{{u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)}};
    const double gdot = u(rng);
    const PlatformScrew back = forward_screw(c, {inverse_rates(c, s, gdot), gdot});
    CHECK((back.q - s.q).norm() < 1e-10);
    CHECK((back.qbar - s.qbar).norm() < 1e-10);
    const PlatformScrew self = self_motion_screw(c);
    for (double r : inverse_rates(c, self, 1.0)) CHECK(std::fabs(r) < 1e-10);
  }
}

TEST_CASE("forward screw refuses singular configurations") {
  const Configuration fichter{{{1.0, 0.0, 0.0, 1.0}, {0.1, 0.2, 0.9}}, 1.3};
  CHECK(std::fabs(margin(fichter)) < 1e-12);
  CHECK_THROWS_AS(forward_screw(fichter, {}), SingularJacobian);
  CHECK_THROWS_AS(self_motion_screw(fichter), SingularJacobian);
}
