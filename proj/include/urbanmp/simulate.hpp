#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "urbanmp/geometry.hpp"
#include "urbanmp/orbits.hpp"
#include "urbanmp/raytrace.hpp"

namespace urbanmp {

inline constexpr std::uint64_t default_master_seed = 20201122;

struct ScenarioConfig {
    CanyonParams canyon;
    ConstellationConfig constellation;
    double vehicle_speed = 5.0;    ///< [m/s]
    double vehicle_length = 2.0;   ///< [m]
    double vehicle_width = 2.0;    ///< [m]
    double vehicle_height = 1.5;   ///< [m]
    double antenna_offset = 0.01;  ///< delta, antenna height over the roof [m]
    double duration = 224.0;       ///< [s]
    double sample_period = 1.0;    ///< [s]
    int repetitions = 6;
    double repetition_spacing = 7200.0; ///< [s]
    /// Reflections with a delay below this are dropped before classification.
    /// Default 2 * delta: the largest delay a bounce off the vehicle roof can have.
    double min_delay_filter = 0.02;
    int start_corner = 0; ///< 0..3, counter-clockwise from the south-west corner
    std::vector<double> nu_sweep{5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
    std::uint64_t master_seed = default_master_seed;

    void validate() const;
    /// Number of samples per repetition: t = 0, T, 2T, ... strictly below duration.
    int samples_per_repetition() const;
    /// Constellation start time of each repetition, k * repetition_spacing.
    std::vector<double> repetition_starts() const;
    /// Side of the driving loop, b + delta b.
    double loop_side() const { return canyon.block_pitch(); }
};

enum class ReceptionMode { splos, multipath, nlos, blocked };

std::string_view to_string(ReceptionMode mode);
ReceptionMode reception_mode_from_string(std::string_view name);
ReceptionMode classify(bool los_clear, bool has_reflections);

struct EpochObservation {
    double epoch = 0.0; ///< time within the repetition [s]
    int repetition = 0;
    int sat_id = 0;
    ReceptionMode mode = ReceptionMode::blocked;
    std::vector<ReflectionEvent> reflections;
    double elevation = 0.0; ///< [deg]
    double azimuth = 0.0;   ///< [deg]
};

struct VehiclePose {
    Vec3 position; ///< ground point below the vehicle center
    double heading = 0.0; ///< [rad], counter-clockwise from East
};

/// Pose on the rectangular loop along the road midlines around the central
/// block. Throws ParameterError for t outside [0, duration].
VehiclePose vehicle_position(double t, const ScenarioConfig& config);

Vec3 antenna_position(const VehiclePose& pose, const ScenarioConfig& config);
BoundedPlane vehicle_roof_plane(const VehiclePose& pose, const ScenarioConfig& config);

struct EnvironmentRun {
    double nu = 0.0;
    double mu = 0.0; ///< analytic mean building height
    std::uint64_t seed = 0;
    int epoch_count = 0; ///< repetitions * samples_per_repetition
    std::vector<EpochObservation> observations; ///< ordered by (repetition, epoch, sat_id)
};

/// Every satellite above the horizon (above the mask when mask_in_trace) at
/// one sample of one repetition, classified after the delay filter.
std::vector<EpochObservation> observe_epoch(const ScenarioConfig& config, const CanyonGeometry& geometry,
                                            int repetition, int sample);

/// OpenMP kernel over (repetition, sample) pairs.
EnvironmentRun run_environment(const ScenarioConfig& config, const CanyonGeometry& geometry);
/// Serial reference of the same loop; output is identical.
EnvironmentRun run_environment_serial(const ScenarioConfig& config, const CanyonGeometry& geometry);

/// Generates the city for nu with seed derive_seed(master_seed, nu) and runs it.
EnvironmentRun run_environment(const ScenarioConfig& config, double nu);

CanyonParams environment_canyon(const ScenarioConfig& config, double nu);

std::map<double, EnvironmentRun> run_sweep(const ScenarioConfig& config);

/// Open-sky census at the given mask over this scenario's repetition schedule.
double open_sky_census(const ScenarioConfig& config, double mask);

} // namespace urbanmp
