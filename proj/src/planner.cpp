#include "octa/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "octa/errors.hpp"
#include "octa/kernels.hpp"
#include "octa/kinematics.hpp"

namespace octa {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Vector4d quat(const EulerOrientation& o) {
  const EulerOrientation n = o.normalized();
  return {n.e0, n.e1, n.e2, n.e3};
}

EulerOrientation from_quat(const Eigen::Vector4d& q) { return {q[0], q[1], q[2], q[3]}; }

Eigen::Vector4d slerp(const Eigen::Vector4d& a, Eigen::Vector4d b, double t) {
  double d = a.dot(b);
  if (d < 0.0) {
    b = -b;
    d = -d;
  }
  d = std::min(d, 1.0);
  const double theta = std::acos(d);
  if (theta < 1e-12) return ((1.0 - t) * a + t * b).normalized();
  const double st = std::sin(theta);
  return (std::sin((1.0 - t) * theta) / st) * a + (std::sin(t * theta) / st) * b;
}

}  // namespace

Pose interpolate_pose(const Pose& a, const Pose& b, double t) {
  if (t <= 0.0) return a;
  if (t >= 1.0) return b;
  return {from_quat(slerp(quat(a.orientation), quat(b.orientation), t)),
          (1.0 - t) * a.s + t * b.s};
}

Pose MotionPath::pose_at(double t) const {
  if (samples.empty()) throw InvalidArgument("empty motion path");
  if (t <= tau.front()) return samples.front();
  if (t >= tau.back()) return samples.back();
  const auto it = std::upper_bound(tau.begin(), tau.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - tau.begin()) - 1;
  const double local = (t - tau[k]) / (tau[k + 1] - tau[k]);
  return interpolate_pose(samples[k], samples[k + 1], local);
}

MotionPath make_path(const Pose& start, const Pose& end, int n) {
  if (n < 2) throw InvalidArgument("a motion path needs at least two samples");
  Pose a{start.orientation.normalized(), start.s};
  Pose b{end.orientation.normalized(), end.s};
  if (quat(a.orientation).dot(quat(b.orientation)) < 0.0) b.orientation = b.orientation.scaled(-1.0);
  MotionPath path;
  path.tau.resize(n);
  path.samples.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    path.tau[i] = t;
    path.samples[i] = interpolate_pose(a, b, t);
  }
  path.samples.front() = a;
  path.samples.back() = b;
  return path;
}

MotionPath path_from_poses(std::vector<Pose> poses) {
  if (poses.size() < 2) throw InvalidArgument("a motion path needs at least two samples");
  MotionPath path;
  const std::size_t n = poses.size();
  path.tau.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    path.tau[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    poses[i].orientation = poses[i].orientation.normalized();
    if (i > 0 && quat(poses[i - 1].orientation).dot(quat(poses[i].orientation)) < 0.0)
      poses[i].orientation = poses[i].orientation.scaled(-1.0);
  }
  path.samples = std::move(poses);
  return path;
}

double GGrid::at(int j) const {
  if (ng == 1) return gmin;
  return gmin + (gmax - gmin) * static_cast<double>(j) / (ng - 1);
}

void GGrid::validate() const {
  if (!(gmin > 0.0)) throw NonPositiveG(gmin);
  if (!(gmax > gmin)) throw InvalidArgument("g grid needs gmin < gmax");
  if (ng < 2) throw InvalidArgument("g grid needs at least two samples");
}

// ---------------------------------------------------------------------------

double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
  const Vec3 d1 = p1 - p0;
  const Vec3 d2 = q1 - q0;
  const Vec3 r = p0 - q0;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0, t = 0.0;
  if (a <= 0.0 && e <= 0.0) return r.norm();
  if (a <= 0.0) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 0.0) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

const std::vector<std::pair<int, int>>& clearance_pairs() {
  static const std::vector<std::pair<int, int>> pairs = [] {
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < kLegs; ++a)
      for (int b = a + 1; b < kLegs; ++b)
        if (layout::kLegPlatform[a] != layout::kLegPlatform[b] &&
            layout::kLegBase[a] != layout::kLegBase[b])
          out.emplace_back(a, b);
    return out;
  }();
  return pairs;
}

double leg_clearance(const Configuration& config) {
  leg_lengths(config);  // DegenerateLeg
  const auto n = platform_points_world(config.pose);
  const auto m = base_points(config.g);
  double best = kInf;
  for (const auto& [a, b] : clearance_pairs()) {
    best = std::min(best, segment_distance(m[layout::kLegBase[a]], n[layout::kLegPlatform[a]],
                                           m[layout::kLegBase[b]], n[layout::kLegPlatform[b]]));
  }
  return best;
}

// ---------------------------------------------------------------------------

namespace {

void fill_row(const Pose& pose, const GGrid& grid, double* margins, double* clearances) {
  std::vector<Mat6> mats(grid.ng);
  std::vector<char> ok(grid.ng, 0);
  for (int j = 0; j < grid.ng; ++j) {
    const Configuration config{pose, grid.at(j)};
    try {
      clearances[j] = leg_clearance(config);
      mats[j] = homogeneous_jacobian(config);
      ok[j] = 1;
    } catch (const DegenerateLeg&) {
      mats[j].setZero();
      clearances[j] = kNaN;
    }
  }
  kernels::hadamard_ratio_batch(mats, std::span<double>(margins, grid.ng));
  for (int j = 0; j < grid.ng; ++j)
    if (!ok[j]) margins[j] = kNaN;
}

template <class Fn>
void parallel_rows(std::size_t rows, int threads, Fn&& fn) {
  const std::size_t workers =
      std::clamp<std::size_t>(threads > 0 ? static_cast<std::size_t>(threads) : 1, 1, rows);
  if (workers <= 1) {
    for (std::size_t i = 0; i < rows; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < rows; i += workers) fn(i);
    });
}

}  // namespace

SingularityField singularity_field(const MotionPath& path, const GGrid& grid, int threads) {
  grid.validate();
  SingularityField f;
  f.tau = path.tau;
  f.g.resize(grid.ng);
  for (int j = 0; j < grid.ng; ++j) f.g[j] = grid.at(j);
  f.margin.assign(path.size() * grid.ng, kNaN);
  f.clearance.assign(path.size() * grid.ng, kNaN);
  parallel_rows(path.size(), threads, [&](std::size_t i) {
    fill_row(path.samples[i], grid, f.margin.data() + i * grid.ng,
             f.clearance.data() + i * grid.ng);
  });
  return f;
}

std::vector<double> detect_crossings(const MotionPath& path, double g, double tol) {
  if (!(g > 0.0)) throw NonPositiveG(g);
  auto value = [&](double t) { return margin({path.pose_at(t), g}); };
  std::vector<double> out;
  double t0 = path.tau.front();
  double v0 = value(t0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    const double t1 = path.tau[i];
    const double v1 = value(t1);
    if (v0 == 0.0) {
      out.push_back(t0);
    } else if ((v0 < 0.0) != (v1 < 0.0) && v1 != 0.0) {
      double lo = t0, hi = t1, vlo = v0;
      while (hi - lo >= tol) {
        const double mid = 0.5 * (lo + hi);
        const double vm = value(mid);
        if (vm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((vm < 0.0) == (vlo < 0.0)) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    t0 = t1;
    v0 = v1;
  }
  if (v0 == 0.0) out.push_back(t0);
  return out;
}

// ---------------------------------------------------------------------------

std::string to_string(PlanFailure::Kind k) {
  switch (k) {
    case PlanFailure::Kind::InfeasibleStart: return "infeasible_start";
    case PlanFailure::Kind::InfeasibleEnd: return "infeasible_end";
    case PlanFailure::Kind::Blocked: return "blocked";
  }
  return "?";
}

void PlanOptions::validate() const {
  grid.validate();
  if (!(eps_det > 0.0)) throw InvalidArgument("eps_det must be positive");
  if (!(eps_clear > 0.0)) throw InvalidArgument("eps_clear must be positive");
  if (!(leg_radius >= 0.0)) throw InvalidArgument("leg radius must be non-negative");
  if (!(rate_bound > 0.0)) throw InvalidArgument("rate bound must be positive");
}

namespace {

struct BranchPlan {
  int branch = 1;
  double bottleneck = -kInf;
  std::size_t blocked_at = 0;  // first column with no reachable cell (if bottleneck = -inf)
  std::vector<int> cells;      // chosen g index per column
  double total_variation = kInf;
};

bool cell_feasible(const SingularityField& f, std::size_t i, std::size_t j, int branch,
                   const PlanOptions& o) {
  const double m = f.margin_at(i, j);
  const double c = f.clearance_at(i, j);
  return std::isfinite(m) && std::isfinite(c) && branch * m >= o.eps_det &&
         c >= o.clearance_threshold();
}

// Index window of reachable predecessors for every j.
std::vector<std::pair<int, int>> rate_windows(const std::vector<double>& g, double rate) {
  const int ng = static_cast<int>(g.size());
  const double slack = 1e-12 * (1.0 + rate);
  std::vector<std::pair<int, int>> w(ng);
  for (int j = 0; j < ng; ++j) {
    int lo = j, hi = j;
    while (lo > 0 && g[j] - g[lo - 1] <= rate + slack) --lo;
    while (hi + 1 < ng && g[hi + 1] - g[j] <= rate + slack) ++hi;
    w[j] = {lo, hi};
  }
  return w;
}

BranchPlan plan_branch(const SingularityField& f, const PlanOptions& o, int branch) {
  const std::size_t nt = f.ntau();
  const int ng = static_cast<int>(f.ng());
  const auto windows = rate_windows(f.g, o.rate_bound);
  BranchPlan plan;
  plan.branch = branch;

  // Bottleneck pass.
  std::vector<double> prev(ng, -kInf), cur(ng, -kInf);
  for (int j = 0; j < ng; ++j)
    if (cell_feasible(f, 0, j, branch, o)) prev[j] = branch * f.margin_at(0, j);
  if (std::all_of(prev.begin(), prev.end(), [](double v) { return v == -kInf; })) {
    plan.blocked_at = 0;
    return plan;
  }
  for (std::size_t i = 1; i < nt; ++i) {
    bool any = false;
    for (int j = 0; j < ng; ++j) {
      cur[j] = -kInf;
      if (!cell_feasible(f, i, j, branch, o)) continue;
      double best = -kInf;
      for (int k = windows[j].first; k <= windows[j].second; ++k) best = std::max(best, prev[k]);
      if (best == -kInf) continue;
      cur[j] = std::min(best, branch * f.margin_at(i, j));
      any = true;
    }
    if (!any) {
      plan.blocked_at = i;
      return plan;
    }
    std::swap(prev, cur);
  }
  plan.bottleneck = *std::max_element(prev.begin(), prev.end());

  // Minimum total variation among profiles achieving the bottleneck.
  auto allowed = [&](std::size_t i, int j) {
    return cell_feasible(f, i, j, branch, o) && branch * f.margin_at(i, j) >= plan.bottleneck;
  };
  std::vector<std::vector<double>> cost(nt, std::vector<double>(ng, kInf));
  std::vector<std::vector<int>> parent(nt, std::vector<int>(ng, -1));
  for (int j = 0; j < ng; ++j)
    if (allowed(0, j)) cost[0][j] = 0.0;
  for (std::size_t i = 1; i < nt; ++i) {
    for (int j = 0; j < ng; ++j) {
      if (!allowed(i, j)) continue;
      for (int k = windows[j].first; k <= windows[j].second; ++k) {
        if (cost[i - 1][k] == kInf) continue;
        const double c = cost[i - 1][k] + std::fabs(f.g[j] - f.g[k]);
        // Ties prefer the smaller step, then the lower index.
        const bool better =
            c < cost[i][j] ||
            (c == cost[i][j] && parent[i][j] >= 0 &&
             std::abs(k - j) < std::abs(parent[i][j] - j));
        if (better) {
          cost[i][j] = c;
          parent[i][j] = k;
        }
      }
    }
  }
  int end = -1;
  for (int j = 0; j < ng; ++j)
    if (cost[nt - 1][j] < kInf && (end < 0 || cost[nt - 1][j] < cost[nt - 1][end])) end = j;
  plan.total_variation = cost[nt - 1][end];
  plan.cells.assign(nt, 0);
  plan.cells[nt - 1] = end;
  for (std::size_t i = nt - 1; i > 0; --i) plan.cells[i - 1] = parent[i][plan.cells[i]];
  return plan;
}

PlanFailure column_failure(const SingularityField& f, const PlanOptions& o,
                           PlanFailure::Kind kind, std::size_t i) {
  PlanFailure fail;
  fail.kind = kind;
  fail.blocking_index = i;
  fail.blocking_tau = f.tau[i];
  fail.g = f.g;
  fail.all_infeasible = true;
  for (std::size_t j = 0; j < f.ng(); ++j) {
    fail.margins.push_back(f.margin_at(i, j));
    fail.clearances.push_back(f.clearance_at(i, j));
    if (cell_feasible(f, i, j, 1, o) || cell_feasible(f, i, j, -1, o)) fail.all_infeasible = false;
  }
  return fail;
}

bool column_empty(const SingularityField& f, const PlanOptions& o, std::size_t i) {
  for (std::size_t j = 0; j < f.ng(); ++j)
    if (cell_feasible(f, i, j, 1, o) || cell_feasible(f, i, j, -1, o)) return false;
  return true;
}

}  // namespace

PlanResult plan_on_field(const SingularityField& f, const PlanOptions& o) {
  o.validate();
  if (f.ntau() < 1 || f.ng() < 1) throw InvalidArgument("empty singularity field");
  if (column_empty(f, o, 0)) return column_failure(f, o, PlanFailure::Kind::InfeasibleStart, 0);
  if (column_empty(f, o, f.ntau() - 1))
    return column_failure(f, o, PlanFailure::Kind::InfeasibleEnd, f.ntau() - 1);

  const BranchPlan pos = plan_branch(f, o, 1);
  const BranchPlan neg = plan_branch(f, o, -1);
  const bool pos_ok = pos.bottleneck > -kInf;
  const bool neg_ok = neg.bottleneck > -kInf;
  if (!pos_ok && !neg_ok) {
    // Report the branch that got furthest.
    const std::size_t at = std::max(pos.blocked_at, neg.blocked_at);
    return column_failure(f, o, PlanFailure::Kind::Blocked, at);
  }
  const BranchPlan* best = &pos;
  if (!pos_ok ||
      (neg_ok && (neg.bottleneck > pos.bottleneck ||
                  (neg.bottleneck == pos.bottleneck && neg.total_variation < pos.total_variation))))
    best = &neg;

  GProfile prof;
  prof.branch = best->branch;
  prof.tau = f.tau;
  prof.min_margin = kInf;
  prof.min_clearance = kInf;
  prof.total_variation = 0.0;
  for (std::size_t i = 0; i < f.ntau(); ++i) {
    const int j = best->cells[i];
    prof.g.push_back(f.g[j]);
    prof.min_margin = std::min(prof.min_margin, best->branch * f.margin_at(i, j));
    prof.min_clearance = std::min(prof.min_clearance, f.clearance_at(i, j));
    if (i > 0) prof.total_variation += std::fabs(prof.g[i] - prof.g[i - 1]);
  }
  return prof;
}

PlanResult plan_g_profile(const MotionPath& path, const PlanOptions& options) {
  options.validate();
  return plan_on_field(singularity_field(path, options.grid, options.threads), options);
}

ProfileCheck verify_profile(const MotionPath& path, const GProfile& profile,
                            const PlanOptions& o) {
  ProfileCheck chk;
  chk.min_margin = kInf;
  chk.min_clearance = kInf;
  auto fail = [&](std::string why) {
    chk.ok = false;
    if (chk.reason.empty()) chk.reason = std::move(why);
  };
  if (profile.g.size() != path.size() || profile.tau.size() != path.size())
    fail("profile length does not match the path");
  const double slack = 1e-12 * (1.0 + o.rate_bound);
  for (std::size_t i = 0; i < std::min(profile.g.size(), path.size()); ++i) {
    const double g = profile.g[i];
    if (g < o.grid.gmin - slack || g > o.grid.gmax + slack) fail("g outside [gmin, gmax]");
    if (i > 0 && std::fabs(g - profile.g[i - 1]) > o.rate_bound + slack) fail("rate bound exceeded");
    try {
      const Configuration config{path.samples[i], g};
      const double m = profile.branch * margin(config);
      const double c = leg_clearance(config);
      chk.min_margin = std::min(chk.min_margin, m);
      chk.min_clearance = std::min(chk.min_clearance, c);
      if (!(m >= o.eps_det)) fail("margin below eps_det");
      if (!(c >= o.clearance_threshold())) fail("clearance below eps_clear");
    } catch (const DegenerateLeg&) {
      fail("degenerate leg on the profile");
    }
  }
  return chk;
}

}  // namespace octa
