#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "urbanmp/simulate.hpp"

namespace urbanmp {

inline constexpr const char* manifest_file = "manifest.json";
inline constexpr const char* summary_file = "summary.json";
inline constexpr const char* model_file = "model.json";

/// Histogram layout of the per-environment delay CSVs.
inline constexpr double histogram_bin_width = 2.0;
inline constexpr double histogram_max_delay = 100.0;

/// Every file of one sweep, rendered in memory. Keys are file names relative
/// to the output directory; contents depend only on the configuration.
struct SweepArtifacts {
    std::map<std::string, std::string> files;
    std::map<double, std::uint64_t> seeds;
};

SweepArtifacts build_sweep_artifacts(const ScenarioConfig& config);

std::string events_file_name(double nu);
std::string observations_file_name(double nu);
std::string histogram_file_name(double nu);

} // namespace urbanmp
