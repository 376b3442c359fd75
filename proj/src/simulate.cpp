#include "urbanmp/simulate.hpp"

#include <cmath>
#include <string>

#include "urbanmp/error.hpp"
#include "urbanmp/rice.hpp"
#include "urbanmp/rng.hpp"

namespace urbanmp {

void ScenarioConfig::validate() const
{
    canyon.validate();
    constellation.validate();
    const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(vehicle_speed) || !positive(duration) || !positive(sample_period)) {
        throw ParameterError("vehicle_speed, duration and sample_period must be > 0");
    }
    if (!positive(vehicle_length) || !positive(vehicle_width) || !positive(vehicle_height)) {
        throw ParameterError("vehicle dimensions must be > 0");
    }
    if (!positive(antenna_offset)) {
        throw ParameterError("antenna_offset must be > 0");
    }
    if (!std::isfinite(min_delay_filter) || min_delay_filter < 0.0) {
        throw ParameterError("min_delay_filter must be >= 0");
    }
    if (repetitions < 1) {
        throw ParameterError("repetitions must be >= 1");
    }
    if (!std::isfinite(repetition_spacing) || repetition_spacing < 0.0) {
        throw ParameterError("repetition_spacing must be >= 0");
    }
    if (start_corner < 0 || start_corner > 3) {
        throw ParameterError("start_corner must be in 0..3");
    }
    const double perimeter = 4.0 * loop_side();
    if (std::abs(duration * vehicle_speed - perimeter) > 1e-9 * perimeter) {
        throw ParameterError("duration * vehicle_speed must equal the loop perimeter 4 (b + delta b) = " +
                             std::to_string(perimeter) + " m");
    }
    if (nu_sweep.empty()) {
        throw ParameterError("nu_sweep must not be empty");
    }
    for (double nu : nu_sweep) {
        if (!std::isfinite(nu) || !(nu > 0.0)) {
            throw ParameterError("every nu in nu_sweep must be > 0");
        }
    }
}

int ScenarioConfig::samples_per_repetition() const
{
    int n = 0;
    while (static_cast<double>(n) * sample_period < duration) {
        ++n;
    }
    return n;
}

std::vector<double> ScenarioConfig::repetition_starts() const
{
    std::vector<double> starts;
    for (int k = 0; k < repetitions; ++k) {
        starts.push_back(static_cast<double>(k) * repetition_spacing);
    }
    return starts;
}

std::string_view to_string(ReceptionMode mode)
{
    switch (mode) {
    case ReceptionMode::splos: return "SPLOS";
    case ReceptionMode::multipath: return "MP";
    case ReceptionMode::nlos: return "NLOS";
    case ReceptionMode::blocked: return "BLOCKED";
    }
    return "unknown";
}

ReceptionMode reception_mode_from_string(std::string_view name)
{
    if (name == "SPLOS") return ReceptionMode::splos;
    if (name == "MP") return ReceptionMode::multipath;
    if (name == "NLOS") return ReceptionMode::nlos;
    if (name == "BLOCKED") return ReceptionMode::blocked;
    throw ParameterError("unknown reception mode: " + std::string(name));
}

ReceptionMode classify(bool los_clear, bool has_reflections)
{
    if (los_clear) {
        return has_reflections ? ReceptionMode::multipath : ReceptionMode::splos;
    }
    return has_reflections ? ReceptionMode::nlos : ReceptionMode::blocked;
}

VehiclePose vehicle_position(double t, const ScenarioConfig& config)
{
    if (!(t >= 0.0 && t <= config.duration)) {
        throw ParameterError("vehicle_position: t outside [0, duration]");
    }
    const double side = config.loop_side();
    const double half = 0.5 * side;
    // south-west, south-east, north-east, north-west
    const Vec3 corners[4] = {{-half, -half, 0.0}, {half, -half, 0.0}, {half, half, 0.0}, {-half, half, 0.0}};

    const double travelled = std::fmod(config.vehicle_speed * t, 4.0 * side);
    const int leg = std::min(3, static_cast<int>(travelled / side));
    const double along = travelled - leg * side;
    const Vec3& a = corners[(config.start_corner + leg) % 4];
    const Vec3& b = corners[(config.start_corner + leg + 1) % 4];
    const Vec3 dir = (b - a) * (1.0 / side);
    return {a + dir * along, std::atan2(dir.y, dir.x)};
}

Vec3 antenna_position(const VehiclePose& pose, const ScenarioConfig& config)
{
    return pose.position + Vec3{0.0, 0.0, config.vehicle_height + config.antenna_offset};
}

BoundedPlane vehicle_roof_plane(const VehiclePose& pose, const ScenarioConfig& config)
{
    const double c = std::cos(pose.heading);
    const double s = std::sin(pose.heading);
    const double hl = 0.5 * config.vehicle_length;
    const double hw = 0.5 * config.vehicle_width;
    return BoundedPlane{pose.position + Vec3{0.0, 0.0, config.vehicle_height},
                        {0.0, 0.0, 1.0},
                        {c, s, 0.0},
                        {-s, c, 0.0},
                        -hl, hl, -hw, hw,
                        SurfaceKind::vehicle_roof,
                        -1};
}

std::vector<EpochObservation> observe_epoch(const ScenarioConfig& config, const CanyonGeometry& geometry,
                                            int repetition, int sample)
{
    const double t = static_cast<double>(sample) * config.sample_period;
    const double constellation_time = static_cast<double>(repetition) * config.repetition_spacing + t;
    const VehiclePose pose = vehicle_position(t, config);
    const Vec3 antenna = antenna_position(pose, config);
    const BoundedPlane roof = vehicle_roof_plane(pose, config);
    const double floor_elevation = config.constellation.mask_in_trace ? config.constellation.elevation_mask : 0.0;

    std::vector<EpochObservation> out;
    for (const auto& sat : satellite_states(config.constellation, constellation_time, antenna)) {
        if (!(sat.elevation > floor_elevation)) {
            continue;
        }
        TraceResult traced = trace_epoch(sat, antenna, geometry, {&roof, 1}, constellation_time);
        std::erase_if(traced.reflections, [&](const ReflectionEvent& e) { return e.delay < config.min_delay_filter; });

        EpochObservation obs;
        obs.epoch = t;
        obs.repetition = repetition;
        obs.sat_id = sat.sat_id;
        obs.mode = classify(traced.los_clear, !traced.reflections.empty());
        obs.reflections = std::move(traced.reflections);
        obs.elevation = sat.elevation;
        obs.azimuth = sat.azimuth;
        out.push_back(std::move(obs));
    }
    return out;
}

namespace {

EnvironmentRun assemble(const CanyonGeometry& geometry, std::vector<std::vector<EpochObservation>>& slots)
{
    EnvironmentRun run;
    run.nu = geometry.params.rice_nu;
    run.mu = rice_mean(geometry.params.rice_nu, geometry.params.rice_sigma);
    run.seed = geometry.params.seed;
    run.epoch_count = static_cast<int>(slots.size());
    std::size_t total = 0;
    for (const auto& s : slots) {
        total += s.size();
    }
    run.observations.reserve(total);
    for (auto& s : slots) {
        std::move(s.begin(), s.end(), std::back_inserter(run.observations));
    }
    return run;
}

} // namespace

EnvironmentRun run_environment(const ScenarioConfig& config, const CanyonGeometry& geometry)
{
    config.validate();
    const int samples = config.samples_per_repetition();
    const int total = config.repetitions * samples;
    std::vector<std::vector<EpochObservation>> slots(static_cast<std::size_t>(total));

#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < total; ++i) {
        slots[static_cast<std::size_t>(i)] = observe_epoch(config, geometry, i / samples, i % samples);
    }
    return assemble(geometry, slots);
}

EnvironmentRun run_environment_serial(const ScenarioConfig& config, const CanyonGeometry& geometry)
{
    config.validate();
    const int samples = config.samples_per_repetition();
    std::vector<std::vector<EpochObservation>> slots;
    slots.reserve(static_cast<std::size_t>(config.repetitions * samples));
    for (int k = 0; k < config.repetitions; ++k) {
        for (int i = 0; i < samples; ++i) {
            slots.push_back(observe_epoch(config, geometry, k, i));
        }
    }
    return assemble(geometry, slots);
}

CanyonParams environment_canyon(const ScenarioConfig& config, double nu)
{
    if (!std::isfinite(nu) || !(nu > 0.0)) {
        throw ParameterError("nu_h must be > 0");
    }
    CanyonParams params = config.canyon;
    params.rice_nu = nu;
    params.seed = derive_seed(config.master_seed, nu);
    return params;
}

EnvironmentRun run_environment(const ScenarioConfig& config, double nu)
{
    return run_environment(config, generate_canyon(environment_canyon(config, nu)));
}

std::map<double, EnvironmentRun> run_sweep(const ScenarioConfig& config)
{
    config.validate();
    std::map<double, EnvironmentRun> runs;
    for (double nu : config.nu_sweep) {
        if (!runs.contains(nu)) {
            runs.emplace(nu, run_environment(config, nu));
        }
    }
    return runs;
}

double open_sky_census(const ScenarioConfig& config, double mask)
{
    ConstellationConfig constellation = config.constellation;
    constellation.epoch_offsets = config.repetition_starts();
    return mean_open_sky_count(constellation, mask, config.duration, config.sample_period);
}

} // namespace urbanmp
