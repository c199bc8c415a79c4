#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <variant>

#include "octa/counterexample.hpp"
#include "octa/errors.hpp"
#include "octa/kinematics.hpp"
#include "octa/planner.hpp"
#include "octa/singularity.hpp"

namespace octa::acceptance {

namespace {

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string sci(double v) { return fmt("%.2e", v); }

EulerOrientation golden_orientation() {
  const double r = std::sqrt(105.0);
  return {4 * r / 175, r / 21, 8 * r / 105, -16 * r / 525};
}

const Vec3 kGoldenA(-148327.0 / 130830, -66032.0 / 65415, 12304.0 / 13083);
const Vec3 kGoldenB(40969.0 / 65415, -85772.0 / 65415, 12304.0 / 13083);

EulerOrientation random_orientation(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  for (;;) {
    const EulerOrientation e{n(rng), n(rng), n(rng), n(rng)};
    if (e.norm_sq() > 1e-6) return e.normalized();
  }
}

Vec3 random_box(std::mt19937_64& rng, double half) {
  std::uniform_real_distribution<double> u(-half, half);
  const double x = u(rng), y = u(rng), z = u(rng);
  return {x, y, z};
}

// ---------------------------------------------------------------------------

Result golden_vectors(std::uint64_t) {
  Result r;
  double worst = 0.0;
  for (const Vec3& p : {kGoldenA, kGoldenB})
    for (double g : {0.3, 0.5, 1.0, 2.0})
      worst = std::max(worst, std::fabs(margin({{golden_orientation(), p}, g})));
  r.pass = worst < kGoldenTol;
  r.detail = "max |margin| = " + sci(worst) + " (tol " + sci(kGoldenTol) + ")";
  return r;
}

Result sigma_structure(std::uint64_t seed) {
  Result r;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const Pose pose{random_orientation(rng), random_box(rng, 2.0)};
    try {
      worst = std::max(worst, recover_sigma(pose).holdout_residual);
    } catch (const Error&) {
      ++failures;
    }
  }
  r.pass = failures == 0 && worst < kStructureTol;
  r.detail = "1000 poses, max hold-out residual = " + sci(worst) + ", failures = " +
             std::to_string(failures);
  return r;
}

Result table_soundness(std::uint64_t seed) {
  Result r;
  double worst = 0.0;
  int samples = 0, failed = 0;
  for (int row = 1; row <= kTableRows; ++row) {
    for (Branch b : {Branch::Plus, Branch::Minus}) {
      if (b == Branch::Minus && !row_is_signed(row)) continue;
      for (int k = 0; k < 100; ++k) {
        const std::uint64_t s = seed + 100000ULL * row + 1000ULL * (b == Branch::Minus) + k;
        const StratumSample smp = sample_row(row, b, s);
        ++samples;
        try {
          const double rel = recover_sigma(smp.pose).relative_magnitude();
          worst = std::max(worst, rel);
          if (!(rel < kUnavoidableTol)) ++failed;
        } catch (const Error&) {
          ++failed;
        }
      }
    }
  }
  r.pass = failed == 0;
  r.detail = std::to_string(samples) + " samples, max relative |c| = " + sci(worst) +
             ", failed = " + std::to_string(failed);
  return r;
}

Result general_case(std::uint64_t seed) {
  Result r;
  std::mt19937_64 rng(seed);
  int accepted = 0, failed = 0;
  double worst = 0.0;
  while (accepted < 500) {
    const EulerOrientation e = random_orientation(rng);
    GeneralCasePositions pos;
    try {
      pos = general_case_positions(e, 1e-3);
    } catch (const DegenerateOrientation&) {
      continue;
    }
    ++accepted;
    for (const Pose& p : {pos.row21, pos.row22}) {
      try {
        const double rel = recover_sigma(p).relative_magnitude();
        worst = std::max(worst, rel);
        if (!(rel < kUnavoidableTol)) ++failed;
      } catch (const Error&) {
        ++failed;
      }
    }
  }
  const GeneralCasePositions fig = general_case_positions(golden_orientation());
  const double da = std::min((fig.row21.s - kGoldenA).cwiseAbs().maxCoeff(),
                             (fig.row22.s - kGoldenA).cwiseAbs().maxCoeff());
  const double db = std::min((fig.row21.s - kGoldenB).cwiseAbs().maxCoeff(),
                             (fig.row22.s - kGoldenB).cwiseAbs().maxCoeff());
  const double rational = std::max(da, db);
  r.pass = failed == 0 && rational < kRationalTol;
  r.detail = "500 orientations, max relative |c| = " + sci(worst) + ", failed = " +
             std::to_string(failed) + "; golden rationals off by " + sci(rational);
  return r;
}

Result factor_oracles(std::uint64_t seed) {
  Result r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int failed = 0;
  auto compare = [&](std::optional<double> pred, std::optional<double> meas, double scale) {
    if (!pred) return;
    const double rel = std::fabs(*meas - kFactorScale * *pred) / scale;
    worst = std::max(worst, rel);
    if (!(rel < kFactorTol)) ++failed;
  };
  const FactorCase cases[] = {FactorCase::Case1a, FactorCase::Case2Q, FactorCase::Case2a,
                              FactorCase::GeneralGcd, FactorCase::GeneralXCoefficient};
  for (FactorCase c : cases) {
    for (int k = 0; k < 100; ++k) {
      const double a = u(rng), b = u(rng), d = u(rng);
      EulerOrientation e;
      switch (c) {
        case FactorCase::Case1a: e = {a, 0.0, 0.0, b}; break;
        case FactorCase::Case2Q: e = {d, a, b, d}; break;
        case FactorCase::Case2a: e = {d, a, -a, d}; break;
        default: e = random_orientation(rng); break;
      }
      e = e.normalized();
      Vec3 p = random_box(rng, 2.0);
      if (c == FactorCase::GeneralGcd || c == FactorCase::GeneralXCoefficient) {
        if (std::fabs(closed_form::general_denominator(e)) < 1e-2) {
          --k;
          continue;
        }
        p.z() = closed_form::z_general(e);
      }
      try {
        const FactorPrediction pred = factor_oracle(c, e, p);
        const FactorMeasurement m = measure_factor_components(c, {e, p});
        compare(pred.c2, m.values.c2, m.scale);
        compare(pred.c1, m.values.c1, m.scale);
        compare(pred.c0, m.values.c0, m.scale);
        compare(pred.c1_x_slope, m.values.c1_x_slope, m.scale);
      } catch (const Error&) {
        ++failed;
      }
    }
  }
  // The general Q factor is checked on unrestricted poses.
  for (int k = 0; k < 100; ++k) {
    const EulerOrientation e = random_orientation(rng);
    const Vec3 p = random_box(rng, 2.0);
    const FactorPrediction pred = factor_oracle(FactorCase::GeneralQ, e, p);
    const FactorMeasurement m = measure_factor_components(FactorCase::GeneralQ, {e, p});
    compare(pred.c2, m.values.c2, m.scale);
  }
  r.pass = failed == 0;
  r.detail = "6 cases x 100, common scale K = " + fmt("%.11f", kFactorScale) +
             ", max relative residual = " + sci(worst) + ", failed = " + std::to_string(failed);
  return r;
}

// Unit-speed-ish smooth trajectory through a random configuration.
struct Trajectory {
  EulerOrientation e;  // unit
  EulerOrientation edot;  // tangent to the unit sphere at e
  Vec3 s, sdot;
  double g, gdot;

  Configuration at(double t) const {
    const EulerOrientation q{e.e0 + t * edot.e0, e.e1 + t * edot.e1, e.e2 + t * edot.e2,
                             e.e3 + t * edot.e3};
    return {{q.normalized(), s + t * sdot}, g + t * gdot};
  }

  PlatformScrew screw() const {
    // omega = 2 vec(edot * conj(e)) for x -> e x conj(e).
    const Eigen::Quaterniond qe(e.e0, e.e1, e.e2, e.e3);
    const Eigen::Quaterniond qd(edot.e0, edot.e1, edot.e2, edot.e3);
    const Vec3 w = 2.0 * (qd * qe.conjugate()).vec();
    return {w, sdot - w.cross(s)};
  }
};

Trajectory random_trajectory(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Trajectory tr;
  tr.e = random_orientation(rng);
  Eigen::Vector4d ev(tr.e.e0, tr.e.e1, tr.e.e2, tr.e.e3);
  Eigen::Vector4d dv(u(rng), u(rng), u(rng), u(rng));
  dv -= dv.dot(ev) * ev;
  tr.edot = {dv[0], dv[1], dv[2], dv[3]};
  tr.s = Vec3(0.5 * u(rng), 0.5 * u(rng), 1.0 + 0.5 * u(rng));
  tr.sdot = Vec3(u(rng), u(rng), u(rng));
  tr.g = 1.25 + 0.75 * u(rng);
  tr.gdot = u(rng);
  return tr;
}

Result velocity_kinematics(std::uint64_t seed) {
  Result r;
  std::mt19937_64 rng(seed);
  double fd = 0.0, trip = 0.0, self = 0.0;
  int done = 0;
  while (done < 100) {
    const Trajectory tr = random_trajectory(rng);
    const Configuration c = tr.at(0.0);
    if (std::fabs(margin(c)) < 1e-3) continue;
    ++done;
    const auto lp = leg_lengths(tr.at(kFiniteStep));
    const auto lm = leg_lengths(tr.at(-kFiniteStep));
    const PlatformScrew screw = tr.screw();
    const auto rates = inverse_rates(c, screw, tr.gdot);
    for (int k = 0; k < kLegs; ++k)
      fd = std::max(fd, std::fabs((lp[k] - lm[k]) / (2 * kFiniteStep) - rates[k]));

    const PlatformScrew back = forward_screw(c, {rates, tr.gdot});
    trip = std::max(trip, std::max((back.q - screw.q).norm(), (back.qbar - screw.qbar).norm()));

    const auto sm = inverse_rates(c, self_motion_screw(c), 1.0);
    double n2 = 0.0;
    for (double v : sm) n2 += v * v;
    self = std::max(self, std::sqrt(n2));
  }
  r.pass = fd <= kRateTol && trip <= kRoundTripTol && self <= kSelfMotionTol;
  r.detail = "100 trajectories, finite-difference error = " + sci(fd) + ", round trip = " +
             sci(trip) + ", self-motion |rdot| = " + sci(self);
  return r;
}

Result redundant_counterexample(std::uint64_t) {
  Result r;
  bool ok = true;
  std::string detail;
  for (const auto& [h, len] : {std::pair{1.0, 0.5}, std::pair{0.7, 0.3}}) {
    const RedundantOctahedron mech = build_counterexample(h, len);
    const double fichter = verify_unavoidable(mech, fichter_pose(mech), 11).max_margin;
    const double coeff = fit_lambda_polynomial(mech, fichter_pose(mech), 11).max_abs();
    const double start = verify_unavoidable(mech, start_pose(mech), 11).max_margin;
    ok = ok && fichter < kRedundantTol && coeff < kRedundantTol && start > kRedundantStartMin;
    if (!detail.empty()) detail += "; ";
    detail += fmt("h=%.1f", h) + fmt("/%.1f: ", len) + "fichter max " + sci(fichter) +
              ", poly coeff " + sci(coeff) + ", start max " + fmt("%.3f", start);
  }
  r.pass = ok;
  r.detail = detail;
  return r;
}

Result planner_workflow(std::uint64_t) {
  Result r;
  PlanOptions opt;
  opt.grid = {0.5, 2.0, 31};
  const MotionPath path = make_path(scenario_start(), scenario_end(), kScenarioSamples);
  const auto crossings = detect_crossings(path, kScenarioG);
  const PlanResult plan = plan_g_profile(path, opt);
  bool ok = crossings.size() == 2;
  std::string detail = std::to_string(crossings.size()) + " crossings at g = 1";
  if (const auto* prof = std::get_if<GProfile>(&plan)) {
    const ProfileCheck chk = verify_profile(path, *prof, opt);
    ok = ok && chk.ok && chk.min_margin >= opt.eps_det && chk.min_clearance >= opt.eps_clear;
    detail += ", profile min margin " + sci(chk.min_margin) + ", min clearance " +
              fmt("%.3f", chk.min_clearance) + (chk.ok ? ", re-verified" : ", " + chk.reason);
  } else {
    ok = false;
    detail += ", planner failed";
  }

  const Pose a{{1.0, 0.0, 0.0, 1.0}, {0.2, -0.1, 0.8}};
  const Pose b{{1.0, 0.0, 0.0, 1.0}, {-0.3, 0.2, 1.2}};
  const PlanResult pinned = plan_g_profile(make_path(a, b, kScenarioSamples), opt);
  if (const auto* f = std::get_if<PlanFailure>(&pinned)) {
    double worst = 0.0;
    for (double m : f->margins) worst = std::max(worst, std::fabs(m));
    ok = ok && f->all_infeasible && worst < opt.eps_det;
    detail += "; pinned path: " + to_string(f->kind) + ", column max |margin| " + sci(worst);
  } else {
    ok = false;
    detail += "; pinned path returned a profile";
  }
  r.pass = ok;
  r.detail = detail;
  return r;
}

Result fichter_invariance(std::uint64_t seed) {
  Result r;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ug(0.1, 3.0);
  double fichter = 0.0, planar = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    const Vec3 p = random_box(rng, 2.0);
    const double g = ug(rng);
    fichter = std::max(fichter, std::fabs(margin({{{1.0, 0.0, 0.0, sign}, p}, g})));
    const Vec3 q(p.x(), p.y(), 0.0);
    planar = std::max(planar, std::fabs(margin({{{1.0, 0.0, 0.0, 0.0}, q}, g})));
  }
  r.pass = fichter < kFichterTol && planar < kFichterTol;
  r.detail = "1000 samples, Fichter max |margin| = " + sci(fichter) + ", z = 0 max = " +
             sci(planar);
  return r;
}

}  // namespace

Pose scenario_start() { return {{1.0, 0.383, -0.221, -0.421}, {-0.158, 0.542, 0.896}}; }
Pose scenario_end() { return {{1.0, 0.243, -0.297, 0.698}, {0.227, -0.214, 0.421}}; }

Result run(int id, std::uint64_t seed) {
  struct Check {
    const char* name;
    std::function<Result(std::uint64_t)> fn;
  };
  static const Check checks[kCriteria] = {
      {"golden-vectors", golden_vectors},
      {"sigma-quadratic-structure", sigma_structure},
      {"table-soundness", table_soundness},
      {"general-case-positions", general_case},
      {"factor-oracles", factor_oracles},
      {"velocity-kinematics", velocity_kinematics},
      {"redundant-counterexample", redundant_counterexample},
      {"planner-workflow", planner_workflow},
      {"fichter-invariance", fichter_invariance}};
  if (id < 1 || id > kCriteria)
    throw InvalidArgument("criterion must be 1.." + std::to_string(kCriteria));
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  try {
    r = checks[id - 1].fn(seed + static_cast<std::uint64_t>(id));
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.id = id;
  r.name = checks[id - 1].name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double limit = id == 1 ? kGoldenSeconds
                       : id == 2 ? kStructureSeconds
                       : id == 3 ? kSoundnessSeconds
                                 : 0.0;
  if (limit > 0.0 && r.seconds >= limit) {
    r.pass = false;
    r.detail += ", over the " + fmt("%.0f s", limit) + " budget";
  }
  return r;
}

std::vector<Result> run_all(std::uint64_t seed) {
  std::vector<Result> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run(id, seed));
  return out;
}

std::string format(const Result& r) {
  return std::string(r.pass ? "PASS " : "FAIL ") + std::to_string(r.id) + " " + r.name + ": " +
         r.detail + fmt(" (%.3f s)", r.seconds);
}

}  // namespace octa::acceptance
