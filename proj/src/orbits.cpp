#include "urbanmp/orbits.hpp"

#include <cmath>
#include <string>
#include <tuple>

#include "urbanmp/error.hpp"

namespace urbanmp {

void ConstellationConfig::validate() const
{
    if (satellite_count < 1) {
        throw ParameterError("satellite_count must be >= 1");
    }
    if (plane_count < 1 || plane_count > satellite_count) {
        throw ParameterError("plane_count must be in [1, satellite_count]");
    }
    if (!(inclination > 0.0 && inclination <= 90.0)) {
        throw ParameterError("inclination must be in (0, 90] degrees");
    }
    if (!(semi_major_axis > earth_radius) || !std::isfinite(semi_major_axis)) {
        throw ParameterError("semi_major_axis must exceed the Earth radius");
    }
    if (!(orbital_period > 0.0) || !std::isfinite(orbital_period)) {
        throw ParameterError("orbital_period must be > 0");
    }
    if (!std::isfinite(earth_rotation_rate)) {
        throw ParameterError("earth_rotation_rate must be finite");
    }
    if (!(observer_latitude >= -90.0 && observer_latitude <= 90.0) || !std::isfinite(observer_longitude)) {
        throw ParameterError("observer latitude must be in [-90, 90] and longitude finite");
    }
    if (!(elevation_mask >= 0.0 && elevation_mask < 90.0)) {
        throw ParameterError("elevation_mask must be in [0, 90)");
    }
    if (epoch_offsets.empty()) {
        throw ParameterError("epoch_offsets must not be empty");
    }
    for (double offset : epoch_offsets) {
        if (!std::isfinite(offset) || offset < 0.0) {
            throw ParameterError("epoch offsets must be finite and >= 0");
        }
    }
}

std::vector<SatelliteSlot> constellation_slots(const ConstellationConfig& config)
{
    config.validate();
    std::vector<SatelliteSlot> slots;
    slots.reserve(static_cast<std::size_t>(config.satellite_count));
    const int base = config.satellite_count / config.plane_count;
    const int extra = config.satellite_count % config.plane_count;
    const double two_pi = 2.0 * constants::pi;
    int id = 1;
    for (int plane = 0; plane < config.plane_count; ++plane) {
        const int in_plane = base + (plane < extra ? 1 : 0);
        // Stagger neighbouring planes so slots do not line up across planes.
        const double phase = two_pi * plane / config.satellite_count;
        for (int k = 0; k < in_plane; ++k) {
            slots.push_back({id++, plane, two_pi * plane / config.plane_count,
                             std::fmod(phase + two_pi * k / in_plane, two_pi)});
        }
    }
    return slots;
}

std::vector<Vec3> propagate_inertial(const ConstellationConfig& config, double time_since_epoch)
{
    if (!(time_since_epoch >= 0.0)) {
        throw ParameterError("time_since_epoch must be >= 0");
    }
    const auto slots = constellation_slots(config);
    const double mean_motion = 2.0 * constants::pi / config.orbital_period;
    const double ci = std::cos(config.inclination * constants::deg2rad);
    const double si = std::sin(config.inclination * constants::deg2rad);
    // Reduce the phase before scaling so large times keep full precision.
    const double orbit_phase = std::fmod(time_since_epoch, config.orbital_period) * mean_motion;

    std::vector<Vec3> out;
    out.reserve(slots.size());
    for (const auto& slot : slots) {
        const double u = slot.argument_of_latitude + orbit_phase;
        const double xp = std::cos(u);
        const double yp = std::sin(u);
        const double co = std::cos(slot.right_ascension);
        const double so = std::sin(slot.right_ascension);
        const Vec3 unit{co * xp - so * ci * yp, so * xp + co * ci * yp, si * yp};
        out.push_back(unit * config.semi_major_axis);
    }
    return out;
}

std::vector<Vec3> propagate_constellation(const ConstellationConfig& config, double time_since_epoch)
{
    auto positions = propagate_inertial(config, time_since_epoch);
    const double sidereal_day = 2.0 * constants::pi / config.earth_rotation_rate;
    const double angle = std::fmod(time_since_epoch, sidereal_day) * config.earth_rotation_rate;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (auto& p : positions) {
        p = Vec3{c * p.x + s * p.y, -s * p.x + c * p.y, p.z};
    }
    return positions;
}

Vec3 geodetic_to_earth_fixed(const Geodetic& g)
{
    const double lat = g.latitude * constants::deg2rad;
    const double lon = g.longitude * constants::deg2rad;
    const double r = earth_radius + g.height;
    return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

Geodetic earth_fixed_to_geodetic(const Vec3& p)
{
    const double r = norm(p);
    if (!(r > 0.0)) {
        throw GeometryError("earth_fixed_to_geodetic: point at the Earth center");
    }
    return {std::asin(p.z / r) * constants::rad2deg, std::atan2(p.y, p.x) * constants::rad2deg, r - earth_radius};
}

LocalFrame::LocalFrame(const Geodetic& observer)
    : origin_(geodetic_to_earth_fixed(observer))
{
    if (!(observer.latitude >= -90.0 && observer.latitude <= 90.0)) {
        throw ParameterError("observer latitude must be in [-90, 90]");
    }
    const double lat = observer.latitude * constants::deg2rad;
    const double lon = observer.longitude * constants::deg2rad;
    east_ = {-std::sin(lon), std::cos(lon), 0.0};
    north_ = {-std::sin(lat) * std::cos(lon), -std::sin(lat) * std::sin(lon), std::cos(lat)};
    up_ = {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

Vec3 LocalFrame::to_local(const Vec3& earth_fixed) const
{
    const Vec3 d = earth_fixed - origin_;
    return {dot(d, east_), dot(d, north_), dot(d, up_)};
}

Vec3 LocalFrame::to_earth_fixed(const Vec3& local) const
{
    return origin_ + east_ * local.x + north_ * local.y + up_ * local.z;
}

Vec3 to_local_enu(const Vec3& earth_fixed, const Geodetic& observer)
{
    return LocalFrame(observer).to_local(earth_fixed);
}

Vec3 from_local_enu(const Vec3& local, const Geodetic& observer)
{
    return LocalFrame(observer).to_earth_fixed(local);
}

std::pair<double, double> elevation_azimuth(const Vec3& satellite_enu, const Vec3& antenna_enu)
{
    const Vec3 d = satellite_enu - antenna_enu;
    const double range = norm(d);
    if (!(range > 0.0)) {
        throw GeometryError("elevation_azimuth: satellite and antenna coincide");
    }
    const double horizontal = std::hypot(d.x, d.y);
    // atan2 form of arcsin(up / range); better conditioned near the zenith
    const double elevation = std::atan2(d.z, horizontal) * constants::rad2deg;
    double azimuth = std::atan2(d.x, d.y) * constants::rad2deg;
    if (azimuth < 0.0) {
        azimuth += 360.0;
    }
    if (azimuth >= 360.0) {
        azimuth -= 360.0;
    }
    return {elevation, azimuth};
}

std::vector<SatelliteState> satellite_states(const ConstellationConfig& config, double constellation_time,
                                             const Vec3& antenna_enu)
{
    const LocalFrame frame({config.observer_latitude, config.observer_longitude, config.observer_height});
    const auto positions = propagate_constellation(config, constellation_time);
    std::vector<SatelliteState> states;
    states.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        SatelliteState st;
        st.sat_id = static_cast<int>(i) + 1;
        st.position = frame.to_local(positions[i]);
        std::tie(st.elevation, st.azimuth) = elevation_azimuth(st.position, antenna_enu);
        states.push_back(st);
    }
    return states;
}

double mean_open_sky_count(const ConstellationConfig& config, double mask, double duration, double step)
{
    if (!(mask >= 0.0 && mask <= 90.0)) {
        throw ParameterError("mask must be in [0, 90]");
    }
    if (!(step > 0.0) || !(duration > 0.0)) {
        throw ParameterError("duration and step must be > 0");
    }
    config.validate();
    const Vec3 observer{};
    long long total = 0;
    long long epochs = 0;
    for (double offset : config.epoch_offsets) {
        for (long long k = 0;; ++k) {
            const double t = static_cast<double>(k) * step;
            if (t >= duration) {
                break;
            }
            for (const auto& st : satellite_states(config, offset + t, observer)) {
                total += st.elevation > mask ? 1 : 0;
            }
            ++epochs;
        }
    }
    return static_cast<double>(total) / static_cast<double>(epochs);
}

} // namespace urbanmp
