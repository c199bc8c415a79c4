#pragma once

#include <array>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace octa {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

inline constexpr int kLegs = 6;

/// Homogeneous Euler parameters (e0:e1:e2:e3). Any nonzero multiple
/// describes the same rotation.
struct EulerOrientation {
  double e0 = 1.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;

  /// N = e0^2 + e1^2 + e2^2 + e3^2.
  double norm_sq() const { return e0 * e0 + e1 * e1 + e2 * e2 + e3 * e3; }
  bool valid() const;

  /// Representative with N = 1, e0 >= 0, and the first nonzero component
  /// positive. Throws InvalidArgument for the zero quadruple.
  EulerOrientation normalized() const;

  EulerOrientation scaled(double lambda) const {
    return {lambda * e0, lambda * e1, lambda * e2, lambda * e3};
  }
  std::array<double, 4> as_array() const { return {e0, e1, e2, e3}; }
};

/// Platform pose: orientation plus translation s, in units of the platform
/// circumradius.
struct Pose {
  EulerOrientation orientation;
  Vec3 s = Vec3::Zero();
};

/// A pose together with the base circumradius g.
struct Configuration {
  Pose pose;
  double g = 1.0;
};

/// Spear (oriented Pluecker) coordinates of a leg: unit direction l pointing
/// base -> platform and moment lbar = M x l.
struct SpearLine {
  Vec3 l;
  Vec3 lbar;
};

/// Instantaneous screw of the platform: angular velocity q and the
/// translational part qbar (velocity of the point at the origin).
struct PlatformScrew {
  Vec3 q = Vec3::Zero();
  Vec3 qbar = Vec3::Zero();
};

struct JointRates {
  std::array<double, kLegs> rdot{};
  double gdot = 0.0;
};

/// Rows (lbar_i^T, l_i^T).
using JacobianMatrix = Mat6;

}  // namespace octa
