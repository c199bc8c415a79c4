#pragma once

// JSON conversions for the command-line tool.

#include <string>

#include <json.hpp>

#include "octa/counterexample.hpp"
#include "octa/planner.hpp"
#include "octa/singularity.hpp"
#include "octa/types.hpp"

namespace octa::cli {

using nlohmann::json;

/// Inline JSON when the text starts with '{', otherwise a file path.
/// Throws InvalidArgument on unreadable or malformed input.
json load_json(const std::string& text_or_path);

EulerOrientation orientation_from_json(const json& j);
/// {"e":[e0,e1,e2,e3],"s":[x,y,z]}; "s" defaults to the origin.
Pose pose_from_json(const json& j);
/// Pose plus "g".
Configuration config_from_json(const json& j);

json to_json(const Vec3& v);
json to_json(const EulerOrientation& e);
json to_json(const Pose& p);
json to_json(const Configuration& c);
json to_json(const PositionSet& s);
json to_json(const UnavoidableStratum& s);
json to_json(const GProfile& p);
json to_json(const PlanFailure& f);
json to_json(const UnavoidableReport& r);
json to_json(const SingularityField& f);

}  // namespace octa::cli
