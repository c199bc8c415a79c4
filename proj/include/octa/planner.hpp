#pragma once

// Reconfiguration planning along a prescribed platform motion: sample the
// normalized determinant over (motion parameter, g), locate singularity
// crossings at fixed g, and choose a base-size profile g(tau) that stays on
// one side of the singularity surface with a margin, away from leg
// interference.

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "octa/types.hpp"

namespace octa {

/// Spherical-linear interpolation of normalized orientations (shorter arc)
/// and linear interpolation of translations.
Pose interpolate_pose(const Pose& a, const Pose& b, double t);

struct MotionPath {
  std::vector<double> tau;   // strictly increasing, tau.front() = 0, tau.back() = 1
  std::vector<Pose> samples;

  std::size_t size() const { return samples.size(); }
  /// Piecewise slerp/lerp between neighbouring samples.
  Pose pose_at(double t) const;
};

/// n >= 2 samples on the slerp/lerp path from start to end.
MotionPath make_path(const Pose& start, const Pose& end, int n);
/// Uniformly parametrized path through explicit poses (orientations
/// sign-aligned to their predecessor).
MotionPath path_from_poses(std::vector<Pose> poses);

struct GGrid {
  double gmin = 0.5;
  double gmax = 2.0;
  int ng = 31;

  double at(int j) const;
  void validate() const;
};

struct SingularityField {
  std::vector<double> tau;
  std::vector<double> g;
  /// Row-major (tau major). NaN marks cells with a degenerate leg.
  std::vector<double> margin;
  std::vector<double> clearance;

  std::size_t ntau() const { return tau.size(); }
  std::size_t ng() const { return g.size(); }
  double margin_at(std::size_t i, std::size_t j) const { return margin[i * g.size() + j]; }
  double clearance_at(std::size_t i, std::size_t j) const {
    return clearance[i * g.size() + j];
  }
};

/// Cells are evaluated in parallel over tau rows; the result does not depend
/// on the thread count.
SingularityField singularity_field(const MotionPath& path, const GGrid& grid, int threads = 1);

/// Parameters where the margin changes sign along the path at fixed g,
/// bisected to |dtau| < tol.
std::vector<double> detect_crossings(const MotionPath& path, double g, double tol = 1e-8);

/// Closest distance between segments [p0, p1] and [q0, q1].
double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1);

/// Leg pairs that do not share an anchor (9 of the 15).
const std::vector<std::pair<int, int>>& clearance_pairs();

/// Minimum distance between legs that do not share an anchor.
double leg_clearance(const Configuration& config);

struct PlanOptions {
  GGrid grid;
  double eps_det = 1e-4;
  double eps_clear = 0.01;
  /// Added twice to eps_clear (legs modeled as cylinders of this radius).
  double leg_radius = 0.0;
  /// Largest |g_{i+1} - g_i| between consecutive samples.
  double rate_bound = 0.1;
  int threads = 1;

  double clearance_threshold() const { return eps_clear + 2.0 * leg_radius; }
  void validate() const;
};

struct GProfile {
  std::vector<double> tau;
  std::vector<double> g;
  /// Sign of the determinant on the chosen side of the singularity surface.
  int branch = 1;
  double min_margin = 0.0;  // min over the profile of branch * margin
  double min_clearance = 0.0;
  double total_variation = 0.0;
};

struct PlanFailure {
  enum class Kind { InfeasibleStart, InfeasibleEnd, Blocked };
  Kind kind = Kind::Blocked;
  double blocking_tau = 0.0;
  std::size_t blocking_index = 0;
  /// True when no cell of the blocking column is feasible on either side;
  /// false when feasible cells exist but the rate bound cannot reach them.
  bool all_infeasible = true;
  std::vector<double> g;
  std::vector<double> margins;
  std::vector<double> clearances;
};

std::string to_string(PlanFailure::Kind k);

using PlanResult = std::variant<GProfile, PlanFailure>;

/// Grid dynamic programme: maximize the smallest margin along the profile,
/// then minimize total variation of g.
PlanResult plan_on_field(const SingularityField& field, const PlanOptions& options);
PlanResult plan_g_profile(const MotionPath& path, const PlanOptions& options);

struct ProfileCheck {
  bool ok = true;
  double min_margin = 0.0;
  double min_clearance = 0.0;
  std::string reason;
};

/// Recomputes margin and clearance at every profile point from the
/// kinematics and checks bounds, rate, and thresholds.
ProfileCheck verify_profile(const MotionPath& path, const GProfile& profile,
                            const PlanOptions& options);

}  // namespace octa
