#pragma once

// Acceptance checks, one function per criterion. Shared by the `check`
// command and the acceptance test binary.

#include <cstdint>
#include <string>
#include <vector>

#include "octa/types.hpp"

namespace octa::acceptance {

struct Result {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriteria = 9;
inline constexpr std::uint64_t kDefaultSeed = 20240917;

// Pinned tolerances.
inline constexpr double kGoldenTol = 1e-8;
inline constexpr double kGoldenSeconds = 1.0;
inline constexpr double kStructureSeconds = 10.0;
inline constexpr double kSoundnessSeconds = 60.0;
inline constexpr double kRationalTol = 1e-12;
inline constexpr double kFactorTol = 1e-8;
inline constexpr double kRateTol = 1e-5;
inline constexpr double kFiniteStep = 1e-6;
inline constexpr double kRoundTripTol = 1e-10;
inline constexpr double kSelfMotionTol = 1e-10;
inline constexpr double kRedundantTol = 1e-9;
inline constexpr double kRedundantStartMin = 0.01;
inline constexpr double kFichterTol = 1e-10;

/// Poses of the two-crossing planner scenario.
Pose scenario_start();
Pose scenario_end();
inline constexpr double kScenarioG = 1.0;
inline constexpr int kScenarioSamples = 41;

Result run(int id, std::uint64_t seed = kDefaultSeed);
std::vector<Result> run_all(std::uint64_t seed = kDefaultSeed);

/// "PASS 3 table-soundness: ... (1.23 s)"
std::string format(const Result& r);

}  // namespace octa::acceptance
