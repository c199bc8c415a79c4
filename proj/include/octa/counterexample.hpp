#pragma once

// Octahedral-like manipulator with three kinematically redundant legs whose
// platform joints do not coincide by pairs. The platform is a semi-regular
// hexagon; every base point lies on the tangent (in the base plane) of the
// platform circumcircle at its platform anchor. Rotating the platform by -90
// degrees about the center axis gives a pose that is singular for every
// position of the redundant base points.
//
// Leg k (0-based) joins platform point m[k] with its base point. Legs 0, 2, 4
// are redundant: the base point slides on the segment [seg_a[k], seg_b[k]]. Legs
// 1, 3, 5 are fixed. Redundant leg k shares its line with the fixed base
// point of leg k - 1 (mod 6).

#include <array>
#include <vector>

#include "octa/types.hpp"

namespace octa {

struct RedundantParams {
  std::array<double, 3> lambda{0.5, 0.5, 0.5};  // legs 0, 2, 4

  void validate() const;
};

struct RedundantOctahedron {
  // Construction constants.
  double height = 1.0;       // start-pose platform height above the base plane
  double half_length = 0.5;  // half-length of each redundant segment
  double alpha = 0.0;        // angular half-width of a short hexagon edge (rad)

  std::array<Vec3, kLegs> m;        // platform points, body frame, z = 0
  std::array<Vec3, kLegs> tangent;  // unit tangent of the circumcircle at m[k]
  std::array<Vec3, kLegs> fixed;    // base points of legs 1, 3, 5 (others unused)
  std::array<Vec3, kLegs> seg_a;    // segment ends of legs 0, 2, 4 (others unused)
  std::array<Vec3, kLegs> seg_b;

  static constexpr std::array<bool, kLegs> kRedundant = {true, false, true, false, true, false};

  /// Base point of every leg for the given redundant parameters.
  std::array<Vec3, kLegs> base_points(const RedundantParams& p) const;
};

inline constexpr double kCounterexampleAlphaDeg = 20.0;

RedundantOctahedron build_counterexample(double height = 1.0, double half_length = 0.5,
                                         double alpha_deg = kCounterexampleAlphaDeg);

/// Distance of M_{k-1} from the line through the segment of redundant leg k.
double collinearity_defect(const RedundantOctahedron& mech, int redundant_leg);

/// Platform parallel to the base at the construction height.
Pose start_pose(const RedundantOctahedron& mech);
/// Start pose rotated by -90 degrees about the center axis.
Pose fichter_pose(const RedundantOctahedron& mech);
/// Platform lying in the base plane, turned by 45 degrees so no leg degenerates.
Pose coplanar_pose();

/// Rows (lbar^T, l^T) with unit l pointing base -> platform. Throws
/// DegenerateLeg.
Mat6 jacobian_red(const RedundantOctahedron& mech, const Pose& pose, const RedundantParams& p);

/// Rows ((M x d)^T, d^T) with unnormalized d; affine in each lambda.
Mat6 homogeneous_jacobian_red(const RedundantOctahedron& mech, const Pose& pose,
                              const RedundantParams& p);

/// Normalized determinant, in [-1, 1].
double margin_red(const RedundantOctahedron& mech, const Pose& pose, const RedundantParams& p);

struct UnavoidableReport {
  Pose pose;
  int grid_n = 0;
  double max_margin = 0.0;  // max |margin| over the grid
  RedundantParams argmax;
};

/// Sweeps a grid_n^3 grid over [0, 1]^3.
UnavoidableReport verify_unavoidable(const RedundantOctahedron& mech, const Pose& pose,
                                     int grid_n, int threads = 1);

struct LambdaPolynomial {
  /// coeff[a + 3 b + 9 c] multiplies l0^a l2^b l4^c, a, b, c in {0, 1, 2};
  /// normalized by the largest Hadamard bound on the grid.
  std::array<double, 27> coeff{};
  double scale = 0.0;
  double fit_residual = 0.0;  // max relative residual on the grid

  double max_abs() const;
  double max_abs_above_multilinear() const;
};

/// Least-squares fit of the homogeneous determinant in (l0, l2, l4) with
/// degree <= 2 per variable over the grid_n^3 grid.
LambdaPolynomial fit_lambda_polynomial(const RedundantOctahedron& mech, const Pose& pose,
                                       int grid_n);

/// The pose seen after turning the whole mechanism by 120 degrees about the
/// center axis: leg k takes the place of leg k + 2, so redundant parameters
/// shift cyclically (lambda[i] moves to slot i + 1).
Pose rotate_third(const Pose& pose);

}  // namespace octa
