#include "io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "octa/errors.hpp"

namespace octa::cli {

namespace {

std::vector<double> numbers(const json& j, const char* key, std::size_t n) {
  if (!j.contains(key)) throw InvalidArgument(std::string("missing \"") + key + "\"");
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != n)
    throw InvalidArgument(std::string("\"") + key + "\" must be an array of " +
                          std::to_string(n) + " numbers");
  std::vector<double> out;
  for (const json& v : a) {
    if (!v.is_number()) throw InvalidArgument(std::string("\"") + key + "\" must hold numbers");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw InvalidArgument(std::string("\"") + key + "\" must be finite");
    out.push_back(d);
  }
  return out;
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json nullable(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(nullable(x));
  return a;
}

}  // namespace

json load_json(const std::string& text_or_path) {
  std::string text = text_or_path;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw InvalidArgument("empty JSON input");
  if (text[first] != '{' && text[first] != '[') {
    std::ifstream in(text_or_path);
    if (!in) throw InvalidArgument("cannot read " + text_or_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

EulerOrientation orientation_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("pose must be a JSON object");
  const auto e = numbers(j, "e", 4);
  const EulerOrientation o{e[0], e[1], e[2], e[3]};
  if (!o.valid()) throw InvalidArgument("Euler parameters must not all vanish");
  return o;
}

Pose pose_from_json(const json& j) {
  Pose p;
  p.orientation = orientation_from_json(j);
  if (j.contains("s")) {
    const auto s = numbers(j, "s", 3);
    p.s = Vec3(s[0], s[1], s[2]);
  }
  return p;
}

Configuration config_from_json(const json& j) {
  Configuration c;
  c.pose = pose_from_json(j);
  if (!j.contains("g") || !j.at("g").is_number()) throw InvalidArgument("missing numeric \"g\"");
  c.g = j.at("g").get<double>();
  if (!std::isfinite(c.g)) throw InvalidArgument("\"g\" must be finite");
  return c;
}

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const EulerOrientation& e) { return json::array({e.e0, e.e1, e.e2, e.e3}); }

json to_json(const Pose& p) { return {{"e", to_json(p.orientation)}, {"s", to_json(p.s)}}; }

json to_json(const Configuration& c) {
  json j = to_json(c.pose);
  j["g"] = c.g;
  return j;
}

json to_json(const PositionSet& s) {
  json j{{"kind", to_string(s.kind)}};
  switch (s.kind) {
    case PositionSet::Kind::AllSpace: break;
    case PositionSet::Kind::Plane: j["z"] = s.point.z(); break;
    case PositionSet::Kind::Line:
      j["point"] = to_json(s.point);
      j["direction"] = to_json(s.direction);
      break;
    case PositionSet::Kind::Point: j["point"] = to_json(s.point); break;
  }
  return j;
}

json to_json(const UnavoidableStratum& s) {
  return {{"row", s.row},
          {"branch", s.branch == Branch::Plus ? "+" : "-"},
          {"dim", s.dim},
          {"position", to_json(s.position)}};
}

json to_json(const GProfile& p) {
  return {{"tau", p.tau},
          {"g", p.g},
          {"branch", p.branch},
          {"min_margin", p.min_margin},
          {"min_clearance", p.min_clearance},
          {"total_variation", p.total_variation}};
}

json to_json(const PlanFailure& f) {
  return {{"failure", to_string(f.kind)},
          {"blocking_tau", f.blocking_tau},
          {"blocking_index", f.blocking_index},
          {"all_infeasible", f.all_infeasible},
          {"g", f.g},
          {"margins", nullable(f.margins)},
          {"clearances", nullable(f.clearances)}};
}

json to_json(const UnavoidableReport& r) {
  return {{"pose", to_json(r.pose)},
          {"grid_n", r.grid_n},
          {"max_margin", r.max_margin},
          {"argmax_lambda", r.argmax.lambda}};
}

json to_json(const SingularityField& f) {
  json margin = json::array(), clearance = json::array();
  for (std::size_t i = 0; i < f.ntau(); ++i) {
    std::vector<double> m(f.ng()), c(f.ng());
    for (std::size_t j = 0; j < f.ng(); ++j) {
      m[j] = f.margin_at(i, j);
      c[j] = f.clearance_at(i, j);
    }
    margin.push_back(nullable(m));
    clearance.push_back(nullable(c));
  }
  return {{"tau", f.tau}, {"g", f.g}, {"margin", margin}, {"clearance", clearance}};
}

}  // namespace octa::cli
