#include "urbanmp/io.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "urbanmp/error.hpp"

namespace urbanmp {

using nlohmann::json;

std::string tool_version() { return URBANMP_VERSION; }

namespace {

double round6(double v) { return std::round(v * 1e6) / 1e6; }

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    // "-0.0000" would make byte comparisons depend on the sign of tiny values
    std::string s = buf;
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') {
        s.erase(0, 1);
    }
    return s;
}

template <typename T>
void read_field(const json& j, const char* key, T& out, std::set<std::string>& seen)
{
    seen.insert(key);
    if (auto it = j.find(key); it != j.end()) {
        try {
            out = it->get<T>();
        } catch (const json::exception& e) {
            throw ParameterError(std::string("config field '") + key + "': " + e.what());
        }
    }
}

void reject_unknown(const json& j, const std::set<std::string>& seen, const std::string& where)
{
    for (const auto& item : j.items()) {
        if (!seen.contains(item.key())) {
            throw ParameterError("unknown config key '" + where + item.key() + "'");
        }
    }
}

CanyonParams canyon_from_json(const json& j)
{
    CanyonParams p;
    std::set<std::string> seen;
    read_field(j, "block_side_m", p.block_side, seen);
    read_field(j, "road_width_m", p.road_width, seen);
    read_field(j, "building_width_m", p.building_width, seen);
    read_field(j, "rice_nu_m", p.rice_nu, seen);
    read_field(j, "rice_sigma_m", p.rice_sigma, seen);
    read_field(j, "seed", p.seed, seen);
    reject_unknown(j, seen, "canyon.");
    return p;
}

ConstellationConfig constellation_from_json(const json& j)
{
    ConstellationConfig c;
    std::set<std::string> seen;
    read_field(j, "satellite_count", c.satellite_count, seen);
    read_field(j, "semi_major_axis_m", c.semi_major_axis, seen);
    read_field(j, "inclination_deg", c.inclination, seen);
    read_field(j, "plane_count", c.plane_count, seen);
    read_field(j, "orbital_period_s", c.orbital_period, seen);
    read_field(j, "earth_rotation_rate_rad_s", c.earth_rotation_rate, seen);
    read_field(j, "epoch_offsets_s", c.epoch_offsets, seen);
    read_field(j, "observer_latitude_deg", c.observer_latitude, seen);
    read_field(j, "observer_longitude_deg", c.observer_longitude, seen);
    read_field(j, "observer_height_m", c.observer_height, seen);
    read_field(j, "elevation_mask_deg", c.elevation_mask, seen);
    read_field(j, "mask_in_trace", c.mask_in_trace, seen);
    reject_unknown(j, seen, "constellation.");
    return c;
}

} // namespace

json to_json(const CanyonParams& p)
{
    return {{"block_side_m", p.block_side},   {"road_width_m", p.road_width}, {"building_width_m", p.building_width},
            {"rice_nu_m", p.rice_nu},         {"rice_sigma_m", p.rice_sigma}, {"seed", p.seed}};
}

json to_json(const ConstellationConfig& c)
{
    return {{"satellite_count", c.satellite_count},
            {"semi_major_axis_m", c.semi_major_axis},
            {"inclination_deg", c.inclination},
            {"plane_count", c.plane_count},
            {"orbital_period_s", c.orbital_period},
            {"earth_rotation_rate_rad_s", c.earth_rotation_rate},
            {"epoch_offsets_s", c.epoch_offsets},
            {"observer_latitude_deg", c.observer_latitude},
            {"observer_longitude_deg", c.observer_longitude},
            {"observer_height_m", c.observer_height},
            {"elevation_mask_deg", c.elevation_mask},
            {"mask_in_trace", c.mask_in_trace}};
}

json to_json(const ScenarioConfig& c)
{
    return {{"schema_version", schema_version},
            {"canyon", to_json(c.canyon)},
            {"constellation", to_json(c.constellation)},
            {"vehicle_speed_m_s", c.vehicle_speed},
            {"vehicle_length_m", c.vehicle_length},
            {"vehicle_width_m", c.vehicle_width},
            {"vehicle_height_m", c.vehicle_height},
            {"antenna_offset_m", c.antenna_offset},
            {"duration_s", c.duration},
            {"sample_period_s", c.sample_period},
            {"repetitions", c.repetitions},
            {"repetition_spacing_s", c.repetition_spacing},
            {"min_delay_filter_m", c.min_delay_filter},
            {"start_corner", c.start_corner},
            {"nu_sweep_m", c.nu_sweep},
            {"master_seed", c.master_seed}};
}

ScenarioConfig scenario_from_json(const json& j)
{
    if (!j.is_object()) {
        throw ParameterError("config must be a JSON object");
    }
    ScenarioConfig c;
    std::set<std::string> seen;
    int version = schema_version;
    read_field(j, "schema_version", version, seen);
    if (version != schema_version) {
        throw ParameterError("config schema_version " + std::to_string(version) + " is not supported");
    }
    seen.insert("canyon");
    if (auto it = j.find("canyon"); it != j.end()) {
        c.canyon = canyon_from_json(*it);
    }
    seen.insert("constellation");
    if (auto it = j.find("constellation"); it != j.end()) {
        c.constellation = constellation_from_json(*it);
    }
    read_field(j, "vehicle_speed_m_s", c.vehicle_speed, seen);
    read_field(j, "vehicle_length_m", c.vehicle_length, seen);
    read_field(j, "vehicle_width_m", c.vehicle_width, seen);
    read_field(j, "vehicle_height_m", c.vehicle_height, seen);
    read_field(j, "antenna_offset_m", c.antenna_offset, seen);
    read_field(j, "duration_s", c.duration, seen);
    read_field(j, "sample_period_s", c.sample_period, seen);
    read_field(j, "repetitions", c.repetitions, seen);
    read_field(j, "repetition_spacing_s", c.repetition_spacing, seen);
    read_field(j, "min_delay_filter_m", c.min_delay_filter, seen);
    read_field(j, "start_corner", c.start_corner, seen);
    read_field(j, "nu_sweep_m", c.nu_sweep, seen);
    read_field(j, "master_seed", c.master_seed, seen);
    reject_unknown(j, seen, "");
    c.validate();
    return c;
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParameterError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) { return scenario_from_json(read_json_file(path)); }

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json geometry_to_json(const CanyonGeometry& geometry)
{
    json buildings = json::array();
    for (const auto& b : geometry.buildings) {
        buildings.push_back({{"block", b.block},
                             {"footprint_m",
                              {{round6(b.x_min), round6(b.y_min)},
                               {round6(b.x_max), round6(b.y_min)},
                               {round6(b.x_max), round6(b.y_max)},
                               {round6(b.x_min), round6(b.y_max)}}},
                             {"height_m", round6(b.height)}});
    }
    return {{"schema_version", schema_version},
            {"tool_version", tool_version()},
            {"params", to_json(geometry.params)},
            {"building_count", geometry.buildings.size()},
            {"plane_count", geometry.planes.size()},
            {"buildings", std::move(buildings)}};
}

json summary_to_json(const EnvironmentSummary& s)
{
    json j{{"nu_m", s.nu},
           {"mu_m", s.mu},
           {"epoch_count", s.epoch_count},
           {"observation_count", s.observation_count},
           {"mean_received_ns", s.mean_received},
           {"mode_fractions",
            {{"SPLOS", s.mode_fractions[0]},
             {"MP", s.mode_fractions[1]},
             {"NLOS", s.mode_fractions[2]},
             {"BLOCKED", s.mode_fractions[3]}}},
           {"pooled_delay_count", s.pooled_delays.size()},
           {"reflections_per_epoch", s.reflections_per_epoch},
           {"median_delay_m", nullptr},
           {"gamma_shape", nullptr},
           {"gamma_scale", nullptr}};
    if (s.median_delay) {
        j["median_delay_m"] = *s.median_delay;
    }
    if (s.gamma) {
        j["gamma_shape"] = s.gamma->shape;
        j["gamma_scale"] = s.gamma->scale;
    }
    return j;
}

json model_to_json(const QuadraticModel& m)
{
    json points = json::array();
    for (const auto& [x, y] : m.training_points) {
        points.push_back({x, y});
    }
    return {{"c2", m.c2}, {"c1", m.c1}, {"c0", m.c0}, {"rms_error_m", m.rms_error}, {"training_points", points}};
}

QuadraticModel model_from_json(const json& j)
{
    QuadraticModel m;
    m.c2 = j.at("c2").get<double>();
    m.c1 = j.at("c1").get<double>();
    m.c0 = j.at("c0").get<double>();
    m.rms_error = j.at("rms_error_m").get<double>();
    for (const auto& p : j.at("training_points")) {
        m.training_points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    return m;
}

json sweep_summary_json(const std::vector<EnvironmentSummary>& summaries, const std::optional<QuadraticModel>& model,
                        std::uint64_t master_seed)
{
    json envs = json::array();
    for (const auto& s : summaries) {
        envs.push_back(summary_to_json(s));
    }
    return {{"schema_version", schema_version},
            {"tool_version", tool_version()},
            {"master_seed", master_seed},
            {"environments", std::move(envs)},
            {"model", model ? model_to_json(*model) : json(nullptr)}};
}

void write_events_csv(std::ostream& os, const std::vector<EpochObservation>& observations)
{
    os << events_csv_header << '\n';
    for (const auto& obs : observations) {
        for (const auto& e : obs.reflections) {
            os << fixed(e.epoch, 3) << ',' << e.sat_id << ',' << to_string(e.kind) << ',' << fixed(e.delay, 4) << ','
               << fixed(e.point.x, 4) << ',' << fixed(e.point.y, 4) << ',' << fixed(e.point.z, 4) << ','
               << e.plane_index << '\n';
        }
    }
}

void write_observations_csv(std::ostream& os, const std::vector<EpochObservation>& observations)
{
    os << "repetition,epoch_s,sat_id,elevation_deg,azimuth_deg,mode,reflection_count\n";
    for (const auto& obs : observations) {
        os << obs.repetition << ',' << fixed(obs.epoch, 3) << ',' << obs.sat_id << ',' << fixed(obs.elevation, 6)
           << ',' << fixed(obs.azimuth, 6) << ',' << to_string(obs.mode) << ',' << obs.reflections.size() << '\n';
    }
}

void write_satellites_csv(std::ostream& os, double epoch, const std::vector<SatelliteState>& states)
{
    for (const auto& st : states) {
        os << fixed(epoch, 3) << ',' << st.sat_id << ',' << fixed(st.position.x, 3) << ','
           << fixed(st.position.y, 3) << ',' << fixed(st.position.z, 3) << ',' << fixed(st.elevation, 6) << ','
           << fixed(st.azimuth, 6) << '\n';
    }
}

void write_histogram_csv(std::ostream& os, const DelayHistogram& h)
{
    os << "bin_low_m,bin_high_m,density\n";
    for (std::size_t k = 0; k < h.density.size(); ++k) {
        const double lo = static_cast<double>(k) * h.bin_width;
        const double hi = std::min(h.max_delay, lo + h.bin_width);
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s,%s,%.9g\n", fixed(lo, 4).c_str(), fixed(hi, 4).c_str(), h.density[k]);
        os << buf;
    }
}

std::vector<double> read_event_delays(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != events_csv_header) {
        throw ParameterError("unexpected events CSV header in " + path.string());
    }
    std::vector<double> delays;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        for (int col = 0; col < 4 && std::getline(row, cell, ','); ++col) {
            if (col == 3) {
                delays.push_back(std::stod(cell));
            }
        }
    }
    return delays;
}

std::string nu_label(double nu)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", nu);
    return buf;
}

} // namespace urbanmp
