#pragma once

#include <utility>
#include <vector>

#include "urbanmp/vec3.hpp"

namespace urbanmp {

inline constexpr double earth_radius = 6371.0e3; ///< spherical Earth [m]

/// Nominal circular GPS-like constellation. Satellites are split over
/// plane_count planes spaced evenly in right ascension; the first
/// satellite_count % plane_count planes hold one extra slot.
struct ConstellationConfig {
    int satellite_count = 31;
    double semi_major_axis = 26559.7e3; ///< [m]
    double inclination = 55.0;          ///< [deg]
    int plane_count = 6;
    double orbital_period = 43082.0;          ///< [s]
    double earth_rotation_rate = 7.2921159e-5; ///< [rad/s]
    std::vector<double> epoch_offsets{0.0, 7200.0, 14400.0, 21600.0, 28800.0, 36000.0}; ///< [s]
    double observer_latitude = 40.0;   ///< [deg]
    double observer_longitude = -70.0; ///< [deg]
    double observer_height = 0.0;      ///< [m]
    double elevation_mask = 15.0;      ///< [deg]
    bool mask_in_trace = true;         ///< also drop satellites below the mask when tracing

    void validate() const;
};

struct Geodetic {
    double latitude = 0.0;  ///< [deg]
    double longitude = 0.0; ///< [deg]
    double height = 0.0;    ///< [m] above the spherical Earth
};

struct SatelliteState {
    int sat_id = 0;
    Vec3 position;          ///< local ENU [m]
    double elevation = 0.0; ///< theta [deg], relative to the antenna
    double azimuth = 0.0;   ///< beta [deg], clockwise from North, [0, 360)
};

/// Orbital slot of one satellite at t = 0.
struct SatelliteSlot {
    int sat_id = 0;
    int plane = 0;
    double right_ascension = 0.0;  ///< [rad]
    double argument_of_latitude = 0.0; ///< [rad] at t = 0
};

std::vector<SatelliteSlot> constellation_slots(const ConstellationConfig& config);

/// Inertial positions (Earth-fixed frame at t = 0) at the given time.
std::vector<Vec3> propagate_inertial(const ConstellationConfig& config, double time_since_epoch);

/// Earth-fixed positions; the inertial frame is rotated by the Earth
/// rotation angle accumulated since t = 0.
std::vector<Vec3> propagate_constellation(const ConstellationConfig& config, double time_since_epoch);

Vec3 geodetic_to_earth_fixed(const Geodetic& g);
Geodetic earth_fixed_to_geodetic(const Vec3& p);

/// East-North-Up frame anchored at an observer on the spherical Earth.
class LocalFrame {
public:
    explicit LocalFrame(const Geodetic& observer);

    Vec3 to_local(const Vec3& earth_fixed) const;
    Vec3 to_earth_fixed(const Vec3& local) const;
    const Vec3& origin() const { return origin_; }

private:
    Vec3 origin_;
    Vec3 east_;
    Vec3 north_;
    Vec3 up_;
};

Vec3 to_local_enu(const Vec3& earth_fixed, const Geodetic& observer);
Vec3 from_local_enu(const Vec3& local, const Geodetic& observer);

/// (elevation, azimuth) in degrees of satellite as seen from antenna, both
/// in the same ENU frame. Throws GeometryError on zero range.
std::pair<double, double> elevation_azimuth(const Vec3& satellite_enu, const Vec3& antenna_enu);

/// All satellites at one constellation time, in the observer's ENU frame,
/// with angles relative to antenna_enu.
std::vector<SatelliteState> satellite_states(const ConstellationConfig& config, double constellation_time,
                                             const Vec3& antenna_enu);

/// Satellites strictly above mask averaged over every epoch in
/// [0, duration) with the given step, at every offset in epoch_offsets.
double mean_open_sky_count(const ConstellationConfig& config, double mask, double duration, double step);

} // namespace urbanmp
