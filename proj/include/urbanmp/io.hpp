#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include <json.hpp>

#include "urbanmp/analysis.hpp"
#include "urbanmp/geometry.hpp"
#include "urbanmp/simulate.hpp"

namespace urbanmp {

/// Version stamped into every JSON artifact; readers refuse other versions.
inline constexpr int schema_version = 1;

std::string tool_version();

/// Unreadable or unwritable files.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const CanyonParams& p);
nlohmann::json to_json(const ConstellationConfig& c);
nlohmann::json to_json(const ScenarioConfig& c);

/// Missing keys keep their defaults; unknown keys are a ParameterError.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Buildings as footprint corners plus height, rounded to 1e-6 m.
nlohmann::json geometry_to_json(const CanyonGeometry& geometry);

nlohmann::json summary_to_json(const EnvironmentSummary& s);
nlohmann::json model_to_json(const QuadraticModel& m);
QuadraticModel model_from_json(const nlohmann::json& j);

/// Document holding every environment summary plus the fitted model.
nlohmann::json sweep_summary_json(const std::vector<EnvironmentSummary>& summaries,
                                  const std::optional<QuadraticModel>& model, std::uint64_t master_seed);

/// Stable text form used for every JSON file written: 2-space indent and a
/// trailing newline.
std::string dump_json(const nlohmann::json& j);

// CSV writers. Header names carry units.
void write_events_csv(std::ostream& os, const std::vector<EpochObservation>& observations);
void write_observations_csv(std::ostream& os, const std::vector<EpochObservation>& observations);
void write_satellites_csv(std::ostream& os, double epoch, const std::vector<SatelliteState>& states);
void write_histogram_csv(std::ostream& os, const DelayHistogram& h);

inline constexpr const char* events_csv_header = "epoch_s,sat_id,surface_kind,delay_m,rx_m,ry_m,rz_m,plane_index";

/// Delay column of an events CSV written by write_events_csv.
std::vector<double> read_event_delays(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// "5" for 5.0, "12.5" for 12.5; used in per-environment file names.
std::string nu_label(double nu);

} // namespace urbanmp
