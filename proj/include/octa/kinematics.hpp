#pragma once

// Instantaneous kinematics of the octahedral manipulator whose base triangle
// can be scaled (1-dof equiform reconfiguration of the base).
//
// Coordinates: platform anchors on the unit circle, base anchors on the circle
// of radius g, both in their z = 0 planes. Legs are indexed 0..5; leg k joins
// platform anchor layout::kLegPlatform[k] with base anchor
// layout::kLegBase[k]. Orientation quadruples are homogeneous; everything in
// this header works on the normalized representative.

#include <array>

#include "octa/types.hpp"

namespace octa {

namespace layout {

// Platform anchors: m12, m34, m56.
inline constexpr int kPlatformAnchors = 3;
// Base anchors: M23, M45, M61.
inline constexpr int kBaseAnchors = 3;

inline constexpr std::array<int, kLegs> kLegPlatform = {0, 0, 1, 1, 2, 2};
inline constexpr std::array<int, kLegs> kLegBase = {2, 0, 0, 1, 1, 2};

/// Body-frame platform anchor j (circumradius 1).
Vec3 platform_anchor(int j);
/// Outward unit direction of base anchor j; its guide line is spanned by it.
Vec3 base_direction(int j);

/// Guide unit vector of leg k's base point.
inline Vec3 guide_direction(int leg) { return base_direction(kLegBase[leg]); }

}  // namespace layout

/// Singular if |margin| falls below this.
inline constexpr double kDefaultSingularTol = 1e-9;
/// Legs shorter than this are degenerate.
inline constexpr double kDegenerateLegLength = 1e-12;

/// Unnormalized rotation matrix of the Euler parameters: R R^T = N^2 I.
Mat3 rotation_matrix(const EulerOrientation& o);

/// World coordinates n = R m / N + s of the three platform anchors.
std::array<Vec3, 3> platform_points_world(const Pose& pose);

/// Throws NonPositiveG.
std::array<Vec3, 3> base_points(double g);

/// d_k = n_k - M_k (base -> platform), no checks.
std::array<Vec3, kLegs> leg_vectors(const Configuration& config);

std::array<double, kLegs> leg_lengths(const Configuration& config);

SpearLine leg_spear(const Configuration& config, int leg);

/// Rows (lbar_k^T, l_k^T) with unit l_k.
JacobianMatrix jacobian(const Configuration& config);

/// Rows ((M_k x d_k)^T, d_k^T) without normalizing d_k. Polynomial in the pose
/// and in g; the building block of the g-structure recovery. Does not check
/// for degenerate legs.
Mat6 homogeneous_jacobian(const Configuration& config);

double det_jacobian(const Configuration& config);

/// Scale-free determinant det J / prod_k sqrt(1 + |lbar_k|^2), in [-1, 1].
double margin(const Configuration& config);

/// rdot_k = lbar_k . q + l_k . qbar - gdot (ghat_k . l_k).
std::array<double, kLegs> inverse_rates(const Configuration& config,
                                        const PlatformScrew& screw, double gdot);

/// Solves J (q, qbar) = rdot + gdot (ghat_k . l_k). Throws SingularJacobian
/// when |margin| < tol.
PlatformScrew forward_screw(const Configuration& config, const JointRates& rates,
                            double tol = kDefaultSingularTol);

/// Platform screw with all legs locked and gdot = 1.
PlatformScrew self_motion_screw(const Configuration& config,
                                double tol = kDefaultSingularTol);

/// Reflection y -> -y of the whole mechanism. Maps the orientation to
/// (e0, -e1, e2, -e3) and s to (x, -y, z); leg k of the image corresponds to
/// leg kMirrorLeg[k] of the original.
Pose mirror_pose(const Pose& pose);
inline constexpr std::array<int, kLegs> kMirrorLeg = {1, 0, 5, 4, 3, 2};

}  // namespace octa
