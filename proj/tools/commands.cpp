#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "acceptance.hpp"
#include "io.hpp"
#include "octa/counterexample.hpp"
#include "octa/errors.hpp"
#include "octa/kernels.hpp"
#include "octa/kinematics.hpp"
#include "octa/planner.hpp"
#include "octa/singularity.hpp"

namespace octa::cli {

namespace {

struct Options {
  std::string pose, config, start, end, poses, out, format = "json", which = "fichter";
  double gmin = 0.5, gmax = 2.0, g = 1.0;
  int ng = 31, ntau = 41, threads = 1, grid_n = 11, criterion = 0;
  double tol_det = 1e-4, tol_clear = 0.01, rate_bound = 0.1, leg_radius = 0.0;
  double tol = kRowMatchTol;
  double height = 1.0, half_length = 0.5, alpha = kCounterexampleAlphaDeg;
  std::uint64_t seed = acceptance::kDefaultSeed;
};

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_json(const Options& o, const char* cmd) {
  if (o.format != "json")
    throw InvalidArgument(std::string(cmd) + " only writes JSON");
}

MotionPath load_path(const Options& o) {
  if (!o.poses.empty()) {
    const json j = load_json(o.poses);
    const json& list = j.is_object() && j.contains("poses") ? j.at("poses") : j;
    if (!list.is_array()) throw InvalidArgument("--poses needs a JSON array of poses");
    std::vector<Pose> poses;
    for (const json& p : list) poses.push_back(pose_from_json(p));
    return path_from_poses(std::move(poses));
  }
  if (o.start.empty() || o.end.empty())
    throw InvalidArgument("give --start and --end, or --poses");
  return make_path(pose_from_json(load_json(o.start)), pose_from_json(load_json(o.end)), o.ntau);
}

GGrid grid(const Options& o) {
  const GGrid gr{o.gmin, o.gmax, o.ng};
  gr.validate();
  return gr;
}

PlanOptions plan_options(const Options& o) {
  PlanOptions p;
  p.grid = grid(o);
  p.eps_det = o.tol_det;
  p.eps_clear = o.tol_clear;
  p.rate_bound = o.rate_bound;
  p.leg_radius = o.leg_radius;
  p.threads = o.threads;
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------

int cmd_ik(const Options& o, std::ostream& out) {
  const Configuration c = config_from_json(load_json(o.config));
  const auto lengths = leg_lengths(c);
  if (o.format == "csv") {
    out << "leg,length\n";
    for (int k = 0; k < kLegs; ++k) out << k + 1 << ',' << num(lengths[k]) << '\n';
  } else {
    out << json{{"config", to_json(c)}, {"lengths", lengths}}.dump(2) << '\n';
  }
  return kOk;
}

int cmd_classify(const Options& o, std::ostream& out) {
  require_json(o, "classify");
  const EulerOrientation e = orientation_from_json(load_json(o.pose));
  json strata = json::array();
  for (const auto& s : classify_orientation(e, o.tol)) strata.push_back(to_json(s));
  out << json{{"orientation", to_json(e.normalized())}, {"strata", strata}}.dump(2) << '\n';
  return kOk;
}

int cmd_sigma(const Options& o, std::ostream& out) {
  require_json(o, "sigma");
  const Pose p = pose_from_json(load_json(o.pose));
  const SigmaCoefficients s = recover_sigma({p.orientation.normalized(), p.s});
  out << json{{"pose", to_json(p)},
              {"c2", s.c2},
              {"c1", s.c1},
              {"c0", s.c0},
              {"scale", s.scale},
              {"holdout_residual", s.holdout_residual},
              {"relative_magnitude", s.relative_magnitude()},
              {"unavoidable", s.relative_magnitude() < kUnavoidableTol}}
             .dump(2)
      << '\n';
  return kOk;
}

int cmd_field(const Options& o, std::ostream& out) {
  const SingularityField f = singularity_field(load_path(o), grid(o), o.threads);
  if (o.format == "csv") {
    out << "tau,g,margin,clearance\n";
    for (std::size_t i = 0; i < f.ntau(); ++i)
      for (std::size_t j = 0; j < f.ng(); ++j)
        out << num(f.tau[i]) << ',' << num(f.g[j]) << ',' << num(f.margin_at(i, j)) << ','
            << num(f.clearance_at(i, j)) << '\n';
  } else {
    out << to_json(f).dump(2) << '\n';
  }
  return kOk;
}

int cmd_plan(const Options& o, std::ostream& out) {
  const PlanResult r = plan_g_profile(load_path(o), plan_options(o));
  if (const auto* prof = std::get_if<GProfile>(&r)) {
    if (o.format == "csv") {
      out << "tau,g\n";
      for (std::size_t i = 0; i < prof->g.size(); ++i)
        out << num(prof->tau[i]) << ',' << num(prof->g[i]) << '\n';
    } else {
      out << to_json(*prof).dump(2) << '\n';
    }
    return kOk;
  }
  const auto& fail = std::get<PlanFailure>(r);
  if (o.format == "csv") {
    out << "g,margin,clearance\n";
    for (std::size_t j = 0; j < fail.g.size(); ++j)
      out << num(fail.g[j]) << ',' << num(fail.margins[j]) << ',' << num(fail.clearances[j])
          << '\n';
  } else {
    out << to_json(fail).dump(2) << '\n';
  }
  return kInfeasible;
}

int cmd_crossings(const Options& o, std::ostream& out) {
  const MotionPath path = load_path(o);
  const auto taus = detect_crossings(path, o.g);
  if (o.format == "csv") {
    out << "tau,margin\n";
    for (double t : taus) out << num(t) << ',' << num(margin({path.pose_at(t), o.g})) << '\n';
  } else {
    json margins = json::array();
    for (double t : taus) margins.push_back(margin({path.pose_at(t), o.g}));
    out << json{{"g", o.g}, {"crossings", taus}, {"margins", margins}}.dump(2) << '\n';
  }
  return kOk;
}

int cmd_redundant(const Options& o, std::ostream& out) {
  require_json(o, "redundant");
  const RedundantOctahedron mech = build_counterexample(o.height, o.half_length, o.alpha);
  Pose pose;
  if (!o.pose.empty()) {
    pose = pose_from_json(load_json(o.pose));
  } else if (o.which == "fichter") {
    pose = fichter_pose(mech);
  } else if (o.which == "start") {
    pose = start_pose(mech);
  } else if (o.which == "coplanar") {
    pose = coplanar_pose();
  } else {
    throw InvalidArgument("--which must be fichter, start or coplanar");
  }
  const UnavoidableReport rep = verify_unavoidable(mech, pose, o.grid_n, o.threads);
  json j = to_json(rep);
  j["height"] = mech.height;
  j["half_length"] = mech.half_length;
  j["alpha_deg"] = o.alpha;
  if (o.grid_n >= 3) {
    const LambdaPolynomial poly = fit_lambda_polynomial(mech, pose, o.grid_n);
    j["polynomial_max_coeff"] = poly.max_abs();
    j["polynomial_fit_residual"] = poly.fit_residual;
  }
  out << j.dump(2) << '\n';
  return kOk;
}

int cmd_selfmotion(const Options& o, std::ostream& out) {
  require_json(o, "selfmotion");
  const Configuration c = config_from_json(load_json(o.config));
  const PlatformScrew s = self_motion_screw(c);
  out << json{{"config", to_json(c)},
              {"q", to_json(s.q)},
              {"qbar", to_json(s.qbar)},
              {"margin", margin(c)}}
             .dump(2)
      << '\n';
  return kOk;
}

int cmd_check(const Options& o, std::ostream& out) {
  std::vector<acceptance::Result> results;
  if (o.criterion == 0)
    results = acceptance::run_all(o.seed);
  else
    results.push_back(acceptance::run(o.criterion, o.seed));
  bool ok = true;
  for (const auto& r : results) {
    out << acceptance::format(r) << '\n';
    ok = ok && r.pass;
  }
  return ok ? kOk : kInfeasible;
}

int cmd_kernels(const Options& o, std::ostream& out) {
  require_json(o, "kernels");
  out << json{{"avx2_available", kernels::avx2_available()},
              {"selected", std::string(kernels::path_name(kernels::resolve(kernels::Path::Auto)))}}
             .dump(2)
      << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Kinematics and singularity analysis of the reconfigurable octahedral manipulator",
               args.empty() ? "octa" : args[0]};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", o.out, "Write the result to this file");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Seed for randomized checks");

  auto path_opts = [&](CLI::App* c) {
    c->add_option("--start", o.start, "Start pose (inline JSON or file)");
    c->add_option("--end", o.end, "End pose (inline JSON or file)");
    c->add_option("--poses", o.poses, "Explicit pose list (inline JSON or file)");
    c->add_option("--ntau", o.ntau, "Samples along the path")->check(CLI::Range(2, 1000000));
  };
  auto grid_opts = [&](CLI::App* c) {
    c->add_option("--gmin", o.gmin, "Smallest base circumradius");
    c->add_option("--gmax", o.gmax, "Largest base circumradius");
    c->add_option("--ng", o.ng, "Grid points in g");
  };

  std::function<int()> action;
  auto sub = [&](const char* name, const char* help, int (*fn)(const Options&, std::ostream&),
                 std::ostringstream& buf) {
    CLI::App* c = app.add_subcommand(name, help);
    c->callback([&, fn] { action = [&, fn] { return fn(o, buf); }; });
    return c;
  };

  std::ostringstream buf;
  sub("ik", "Leg lengths of a configuration", cmd_ik, buf)
      ->add_option("--config", o.config, "Configuration (inline JSON or file)")
      ->required();
  {
    CLI::App* c = sub("classify", "Unavoidable-singularity strata of an orientation", cmd_classify, buf);
    c->add_option("--pose", o.pose, "Pose or orientation (inline JSON or file)")->required();
    c->add_option("--tol", o.tol, "Residual tolerance for the row conditions");
  }
  sub("sigma", "Coefficients of det J / g^3 at a pose", cmd_sigma, buf)
      ->add_option("--pose", o.pose, "Pose (inline JSON or file)")
      ->required();
  {
    CLI::App* c = sub("field", "Normalized determinant and clearance over (tau, g)", cmd_field, buf);
    path_opts(c);
    grid_opts(c);
  }
  {
    CLI::App* c = sub("plan", "Plan a base-size profile along a motion", cmd_plan, buf);
    path_opts(c);
    grid_opts(c);
    c->add_option("--tol-det", o.tol_det, "Required normalized determinant margin");
    c->add_option("--tol-clear", o.tol_clear, "Required leg clearance");
    c->add_option("--rate-bound", o.rate_bound, "Largest change of g per step");
    c->add_option("--leg-radius", o.leg_radius, "Leg radius added to the clearance");
  }
  {
    CLI::App* c = sub("crossings", "Singularity crossings along a motion at fixed g", cmd_crossings, buf);
    path_opts(c);
    c->add_option("--g", o.g, "Base circumradius");
  }
  {
    CLI::App* c = sub("redundant", "Redundant counterexample: sweep the redundant parameters",
                      cmd_redundant, buf);
    c->add_option("--which", o.which, "fichter, start or coplanar");
    c->add_option("--pose", o.pose, "Explicit pose instead of --which");
    c->add_option("--height", o.height, "Platform height");
    c->add_option("--half-length", o.half_length, "Half-length of the redundant segments");
    c->add_option("--alpha", o.alpha, "Half-angle of the short hexagon edges (degrees)");
    c->add_option("--grid-n", o.grid_n, "Grid points per redundant parameter");
  }
  sub("selfmotion", "Platform screw of the self-motion", cmd_selfmotion, buf)
      ->add_option("--config", o.config, "Configuration (inline JSON or file)")
      ->required();
  sub("check", "Run acceptance checks", cmd_check, buf)
      ->add_option("--criterion", o.criterion, "Criterion number, 0 for all")
      ->check(CLI::Range(0, acceptance::kCriteria));
  sub("kernels", "Report the determinant kernel selected at runtime", cmd_kernels, buf);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("octa");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  int code = kOk;
  try {
    code = action();
  } catch (const StructureViolation& e) {
    err << "error: " << e.what() << '\n';
    return kStructureViolation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  if (o.out.empty()) {
    out << buf.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << o.out << '\n';
      return kInputError;
    }
    f << buf.str();
  }
  return code;
}

}  // namespace octa::cli
