// Rows 1..22 of the unavoidable-singularity table: orientation conditions,
// guards, closed-form position sets, and parametric samplers.

#include <cmath>
#include <numbers>
#include <random>

#include "octa/errors.hpp"
#include "octa/singularity.hpp"

namespace octa {
namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

double sgn(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }

void check_row(int row) {
  if (row < 1 || row > kTableRows) throw InvalidArgument("table row out of range");
}

PositionSet plane(double z) {
  return {PositionSet::Kind::Plane, Vec3(0.0, 0.0, z), Vec3::Zero()};
}

PositionSet line(const Vec3& p, const Vec3& d) { return {PositionSet::Kind::Line, p, d}; }

PositionSet all_space() { return {}; }

PositionSet point(const Vec3& p) { return {PositionSet::Kind::Point, p, Vec3::Zero()}; }

}  // namespace

bool row_is_signed(int row) {
  check_row(row);
  return row == 2 || (row >= 4 && row <= 12);
}

int row_dimension(int row) {
  check_row(row);
  static constexpr int kDim[kTableRows] = {3, 3, 4, 3, 2, 2, 3, 2, 2, 3, 2,
                                           2, 3, 3, 2, 2, 4, 4, 3, 3, 3, 3};
  return kDim[row - 1];
}

std::string to_string(PositionSet::Kind k) {
  switch (k) {
    case PositionSet::Kind::AllSpace: return "all";
    case PositionSet::Kind::Plane: return "plane";
    case PositionSet::Kind::Line: return "line";
    case PositionSet::Kind::Point: return "point";
  }
  return "?";
}

bool PositionSet::contains(const Vec3& p, double tol) const {
  switch (kind) {
    case Kind::AllSpace: return true;
    case Kind::Plane: return std::fabs(p.z() - point.z()) <= tol * (1.0 + std::fabs(point.z()));
    case Kind::Line: {
      const Vec3 u = direction.normalized();
      const Vec3 r = p - point;
      return (r - r.dot(u) * u).norm() <= tol * (1.0 + point.norm() + std::fabs(r.dot(u)));
    }
    case Kind::Point: return (p - point).norm() <= tol * (1.0 + point.norm());
  }
  return false;
}

Vec3 PositionSet::at(double u, double v, double w) const {
  switch (kind) {
    case Kind::AllSpace: return {u, v, w};
    case Kind::Plane: return {u, v, point.z()};
    case Kind::Line: return point + u * direction;
    case Kind::Point: return point;
  }
  return point;
}

std::vector<double> row_conditions(int row, Branch branch, const EulerOrientation& o) {
  check_row(row);
  const double e0 = o.e0, e1 = o.e1, e2 = o.e2, e3 = o.e3;
  const double s = sgn(branch);
  switch (row) {
    case 1: return {e1, e2};
    case 2: return {e1, e2, e0 - s * e3};
    case 3: return {e0, e3};
    case 4:
    case 5:
    case 6: return {e0 - s * e3, e2 + s * e1};
    case 7:
    case 8:
    case 9: return {e0 - e3, e1 - (2 + s * kSqrt3) * e2};
    case 10:
    case 11:
    case 12: return {e0 + e3, e1 - (-2 + s * kSqrt3) * e2};
    case 13: return {e0, e2};
    case 14: return {e1, e3};
    case 15: return {e0, e1};
    case 16: return {e2, e3};
    case 17: return {e0 * e1 + e2 * e3};
    case 18: return {closed_form::row18_quartic(o)};
    case 19: return {e0 * e1 - e2 * e3};
    case 20: return {e0 * e2 + e1 * e3};
    default: return {};
  }
}

std::vector<double> row_guards(int row, Branch, const EulerOrientation& o) {
  check_row(row);
  const double e0 = o.e0, e1 = o.e1, e2 = o.e2, e3 = o.e3;
  const double den = closed_form::general_denominator(o);
  switch (row) {
    case 1:
    case 2:
    case 3: return {};
    case 4:
    case 5:
    case 6: return {e1, e3};
    case 7:
    case 8:
    case 9:
    case 10:
    case 11:
    case 12: return {e2, e3};
    case 13: return {e1, e3};
    case 14: return {e0, e2};
    case 15: return {e2, e3};
    case 16: return {e0, e1};
    case 17:
    case 18: return {den};
    case 19: return {e1, e1 * e1 - e2 * e2, den};
    case 20: return {e2, den};
    default:
      return {den, e0 * e1 - e2 * e3, e0 * e2 + e1 * e3, e0 * e1 + e2 * e3,
              closed_form::row18_quartic(o)};
  }
}

PositionSet row_position_set(int row, Branch branch, const EulerOrientation& o) {
  check_row(row);
  const double e1 = o.e1, e2 = o.e2, e3 = o.e3, e0 = o.e0;
  const double s = sgn(branch);
  const double s3 = s * kSqrt3;
  const Vec3 ex(1.0, 0.0, 0.0);
  switch (row) {
    case 1: return plane(0.0);
    case 2:
    case 3: return all_space();
    case 4: return plane(2 * e1 * e3);
    case 5:
      // x = 0, z = -e3 (2 e3^2 + 2 e1^2 +- y) / e1
      return line({0.0, 0.0, -e3 * (2 * e3 * e3 + 2 * e1 * e1) / e1}, {0.0, 1.0, -s * e3 / e1});
    case 6: return line({0.0, s * 2 * (e1 * e1 - e3 * e3), -4 * e1 * e3}, ex);
    case 7: return plane(4 * e2 * e3 / (1 - s3));
    case 8: {
      const double z = 8 * e2 * e3 / (s3 - 1);
      const double x0 = (16 * e2 * e2 + s * 8 * e2 * e2 * kSqrt3 - 4 * e3 * e3) / s3;
      return line({x0, 0.0, z}, {1.0 / s3, 1.0, 0.0});
    }
    case 9: {
      const double den = e2 * (1 + s3);
      const double z0 = 2 * e3 * (e3 * e3 + 4 * e2 * e2 + s * 2 * e2 * e2 * kSqrt3) / den;
      return line({0.0, 0.0, z0}, {-s3, 1.0, -2 * e3 / den});
    }
    case 10: return plane(4 * e2 * e3 / (-s3 - 1));
    case 11: {
      const double z = 8 * e2 * e3 / (1 + s3);
      const double x0 = (16 * e2 * e2 - s * 8 * e2 * e2 * kSqrt3 - 4 * e3 * e3) / (-s3);
      return line({x0, 0.0, z}, {1.0 / s3, 1.0, 0.0});
    }
    case 12: {
      const double den = e2 * (s3 - 1);
      const double z0 = 2 * e3 * (e3 * e3 + 4 * e2 * e2 - s * 2 * e2 * e2 * kSqrt3) / den;
      return line({0.0, 0.0, z0}, {-s3, 1.0, 2 * e3 / den});
    }
    case 13: return plane(e1 * e3);
    case 14: return plane(-e0 * e2);
    case 15:
    case 16: return line(Vec3::Zero(), ex);
    case 17:
    case 18: return plane(closed_form::z_general(o));
    case 19: {
      const double y = 2 * e2 * (e1 * e1 + e3 * e3) / e1;
      const double e11 = e1 * e1, e22 = e2 * e2;
      const double z = e3 * (e11 * e11 - 6 * e11 * e22 + e22 * e22) / (e1 * (e11 - e22));
      return line({0.0, y, z}, ex);
    }
    case 20: return line({0.0, 2 * e1 * (e3 * e3 - e2 * e2) / e2, -4 * e1 * e3}, ex);
    case 21: return point(closed_form::position_row21(o));
    default: return point(closed_form::position_row22(o));
  }
}

std::vector<UnavoidableStratum> classify_orientation(const EulerOrientation& o, double tol) {
  const EulerOrientation e = o.normalized();
  std::vector<UnavoidableStratum> out;
  for (int row = 1; row <= kTableRows; ++row) {
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      if (b == Branch::Minus && !row_is_signed(row)) break;
      const auto res = row_conditions(row, b, e);
      bool match = true;
      for (double r : res) match = match && std::fabs(r) < tol;
      for (double g : row_guards(row, b, e)) match = match && std::fabs(g) > tol;
      if (!match) continue;
      out.push_back({row, b, row_dimension(row), e, res, row_position_set(row, b, e)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

EulerOrientation row_orientation(int row, Branch branch, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
  const double s = sgn(branch);
  switch (row) {
    case 1: return {a, 0, 0, b};
    case 2: return {a, 0, 0, s * a};
    case 3: return {0, a, b, 0};
    case 4:
    case 5:
    case 6: return {s * c, a, -s * a, c};
    case 7:
    case 8:
    case 9: return {c, (2 + s * kSqrt3) * a, a, c};
    case 10:
    case 11:
    case 12: return {-c, (-2 + s * kSqrt3) * a, a, c};
    case 13: return {0, a, 0, b};
    case 14: return {a, 0, b, 0};
    case 15: return {0, 0, a, b};
    case 16: return {a, b, 0, 0};
    case 17: return {-b * c / a, a, b, c};
    case 18: {
      // Quadratic in e0; its discriminant 12 e3^2 (e1^2 + e2^2)^2 is never negative.
      const double qa = a * a - 3 * b * b;
      const double qb = 8 * a * b * c;
      const double qc = b * b * c * c - 3 * a * a * c * c;
      const double root = std::sqrt(std::max(0.0, qb * qb - 4 * qa * qc));
      const double pick = d < 0.0 ? -1.0 : 1.0;
      return {(-qb + pick * root) / (2 * qa), a, b, c};
    }
    case 19: return {b * c / a, a, b, c};
    case 20: return {-a * c / b, a, b, c};
    default: return {a, b, c, d};
  }
}

bool guards_clear(int row, Branch b, const EulerOrientation& e, double margin) {
  if (!e.valid()) return false;
  for (double g : row_guards(row, b, e))
    if (!(std::fabs(g) > margin)) return false;
  return true;
}

}  // namespace

StratumSample sample_row(int row, Branch branch, std::uint64_t seed, double guard_margin) {
  check_row(row);
  if (branch == Branch::Minus && !row_is_signed(row))
    throw InvalidArgument("row " + std::to_string(row) + " has no sign branch");
  std::mt19937_64 rng(seed);
  EulerOrientation e;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 10000) throw InvalidArgument("could not sample row away from its guards");
    const EulerOrientation raw = row_orientation(row, branch, rng);
    if (!raw.valid()) continue;
    e = raw.normalized();
    if (guards_clear(row, branch, e, guard_margin)) break;
  }
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const PositionSet set = row_position_set(row, branch, e);
  const double p = u(rng), q = u(rng), r = u(rng);
  return {{e, set.at(p, q, r)}, row, branch};
}

StratumSample sample_stratum(const UnavoidableStratum& stratum, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double p = u(rng), q = u(rng), r = u(rng);
  return {{stratum.orientation, stratum.position.at(p, q, r)}, stratum.row, stratum.branch};
}

}  // namespace octa
