#pragma once

// Singularity structure of the reconfigurable octahedral manipulator.
//
// For a fixed platform pose, det of the homogeneous Jacobian is g^3 times a
// quadratic in g:
//
//   det J_h(g) = g^3 (c2 g^2 + c1 g + c0),   (c2, c1, c0) = K (Q, L, -A1 A2)
//
// with K = 81 sqrt(3) / 4 at unit Euler norm. A pose is an unavoidable
// singularity (singular for every g > 0) iff c2 = c1 = c0 = 0. The closed-form
// strata of such poses are enumerated by rows 1..22 of the classification
// table; see classify_orientation().

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "octa/types.hpp"

namespace octa {

/// Coefficients of det J_h(g) / g^3 = c2 g^2 + c1 g + c0 at a fixed pose.
struct SigmaCoefficients {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
  /// max over the sample g of prod_k ||row_k|| / g^3 (Hadamard bound); the
  /// yardstick for relative tests.
  double scale = 0.0;
  /// Worst relative misfit at the validation samples g = 2 and g = 3.
  double holdout_residual = 0.0;

  double evaluate(double g) const { return (c2 * g + c1) * g + c0; }
  /// max(|c2|, |c1|, |c0|) / scale.
  double relative_magnitude() const;
};

/// Fit samples and validation samples for recover_sigma.
/// K in (c2, c1, c0) = K (Q, L, -A1 A2).
inline constexpr double kFactorScale = 81.0 * std::numbers::sqrt3 / 4.0;

inline constexpr std::array<double, 3> kSigmaFitG = {0.5, 1.0, 1.5};
inline constexpr std::array<double, 2> kSigmaCheckG = {2.0, 3.0};
inline constexpr double kStructureTol = 1e-8;
inline constexpr double kUnavoidableTol = 1e-8;
inline constexpr double kRowMatchTol = 1e-10;

/// Throws DegenerateLeg, StructureViolation.
SigmaCoefficients recover_sigma(const Pose& pose);

bool is_unavoidable(const Pose& pose, double tol = kUnavoidableTol);

// ---------------------------------------------------------------------------
// Closed forms. All take the orientation as given; callers normalize first
// (positions are homogeneous of degree 2 in the Euler parameters).

namespace closed_form {

/// z shared by rows 17, 18, 21, 22 (root of Q).
double z_general(const EulerOrientation& e);
Vec3 position_row21(const EulerOrientation& e);
Vec3 position_row22(const EulerOrientation& e);

/// (e3^2 - e0^2)(e1^2 + e2^2): denominator of the general-case formulas.
double general_denominator(const EulerOrientation& e);
/// (e0 e1 + e2 e3)(e2^2 e3^2 - 3 e2^2 e0^2 + 8 e0 e1 e2 e3 - 3 e1^2 e3^2 + e1^2 e0^2)
double general_gcd(const EulerOrientation& e);
/// e2^2 e3^2 - 3 e2^2 e0^2 + 8 e0 e1 e2 e3 - 3 e1^2 e3^2 + e1^2 e0^2
double row18_quartic(const EulerOrientation& e);
/// 2 (e1^2 + e2^2)(e0 - e3)(e0 + e3)(e0 e1 - e2 e3)(e0 e2 + e1 e3)
double x_coefficient(const EulerOrientation& e);

}  // namespace closed_form

struct GeneralCasePositions {
  Pose row21;
  Pose row22;
};

/// Rows 21 and 22 for an orientation in general position. Throws
/// DegenerateOrientation naming the first violated guard.
GeneralCasePositions general_case_positions(const EulerOrientation& o,
                                            double guard_tol = kRowMatchTol);

// ---------------------------------------------------------------------------
// Classification table

enum class Branch { Plus, Minus };

inline constexpr int kTableRows = 22;

/// Whether a table row carries a +/- sign choice.
bool row_is_signed(int row);
/// The table's dimension column.
int row_dimension(int row);

struct PositionSet {
  enum class Kind { AllSpace, Plane, Line, Point };
  Kind kind = Kind::AllSpace;
  /// Plane: {z = point.z}. Line: point + t direction. Point: point.
  Vec3 point = Vec3::Zero();
  Vec3 direction = Vec3::Zero();

  bool contains(const Vec3& p, double tol) const;
  /// Parametric point: AllSpace/Plane use (u, v, w) as free coordinates,
  /// Line uses u as the line parameter.
  Vec3 at(double u, double v, double w) const;
};

std::string to_string(PositionSet::Kind k);

struct UnavoidableStratum {
  int row = 0;
  Branch branch = Branch::Plus;
  int dim = 0;
  EulerOrientation orientation;  // normalized
  std::vector<double> orientation_residuals;
  PositionSet position;
};

/// Orientation conditions of a row; all vanish on the row's orientation set.
/// Evaluated on the normalized quadruple.
std::vector<double> row_conditions(int row, Branch branch, const EulerOrientation& o);
/// Quantities that must be nonzero for the row's position formula to apply.
std::vector<double> row_guards(int row, Branch branch, const EulerOrientation& o);
/// Position set of a row; o must satisfy the row's conditions and guards.
PositionSet row_position_set(int row, Branch branch, const EulerOrientation& o);

/// Every table row (and sign branch) whose orientation condition holds within
/// tol and whose guards exceed tol.
std::vector<UnavoidableStratum> classify_orientation(const EulerOrientation& o,
                                                     double tol = kRowMatchTol);

struct StratumSample {
  Pose pose;
  int row = 0;
  Branch branch = Branch::Plus;
};

/// Random member of a table row: orientation built parametrically on the row's
/// orientation set (guards kept at least guard_margin away from zero),
/// free position coordinates uniform in [-2, 2].
StratumSample sample_row(int row, Branch branch, std::uint64_t seed,
                         double guard_margin = 0.05);
/// Random position inside a classified stratum, orientation kept.
StratumSample sample_stratum(const UnavoidableStratum& stratum, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Factorizations of the case analysis, as independent predictions of the
// recovered coefficients.

enum class FactorCase {
  Case1a,              // e1 = e2 = 0: c0 ~ z^3 (e0^2+e3^2)(e0-e3)(e0+e3)
  Case2Q,              // e0 = e3: c2 ~ 2 e3^3 (e1+e2)(e1-(2+sqrt3)e2)(e1-(2-sqrt3)e2)
  Case2a,              // e0 = e3, e2 = -e1: c1 ~ L, c0 ~ -A1A2 as factored
  GeneralQ,            // c2 ~ (e0^2+e3^2)(...) - (e3^2-e0^2)(e1^2+e2^2) z
  GeneralGcd,          // at z = z_general: dc1/dx ~ GCD * coefX / denominator^2
  GeneralXCoefficient  // same identity, read as a statement on coefX
};

std::string to_string(FactorCase c);

/// Predicted components (up to one common factor); unset entries make no
/// prediction.
struct FactorPrediction {
  std::optional<double> c2;
  std::optional<double> c1;
  std::optional<double> c0;
  std::optional<double> c1_x_slope;
};

/// Throws CaseMismatch when o (normalized) or the position violates the
/// case's hypothesis. The general slope cases need position.z == z_general.
FactorPrediction factor_oracle(FactorCase c, const EulerOrientation& o,
                                          const Vec3& position, double tol = kRowMatchTol);

/// Numerically recovered counterparts of the oracle's components, plus the
/// recovery scale for relative comparisons.
struct FactorMeasurement {
  FactorPrediction values;
  double scale = 0.0;
};
FactorMeasurement measure_factor_components(FactorCase c, const Pose& pose);

}  // namespace octa
