#pragma once

#include <optional>
#include <span>
#include <vector>

#include "urbanmp/geometry.hpp"
#include "urbanmp/orbits.hpp"
#include "urbanmp/vec3.hpp"

namespace urbanmp {

/// Parametric tolerance for strict segment/face intersection.
inline constexpr double occlusion_epsilon = 1e-9;

/// One accepted single-bounce reflection.
struct ReflectionEvent {
    int sat_id = 0;
    double epoch = 0.0; ///< constellation time [s]
    Vec3 point;         ///< reflection point r [m]
    double delay = 0.0; ///< extra path length d [m]
    int plane_index = -1;
    SurfaceKind kind = SurfaceKind::building_wall;
};

/// Mirror image of the antenna in the (unbounded) plane.
Vec3 mirror_point(const Vec3& antenna, const BoundedPlane& plane);

/// Specular reflection point of the satellite-antenna pair on the plane, or
/// nothing when the two are not strictly on the same side, the mirrored ray
/// runs parallel to the plane, or the point falls outside the plane extent.
std::optional<Vec3> reflection_point(const Vec3& satellite, const Vec3& antenna, const BoundedPlane& plane);

/// Extra path length of s -> r -> a over s -> a. Never negative.
double path_delay(const Vec3& satellite, const Vec3& antenna, const Vec3& reflection);

/// True when the open segment crosses a building face at a parameter in
/// (eps, 1 - eps). The face with index ignore_plane is skipped.
bool segment_occluded(const Vec3& from, const Vec3& to, const CanyonGeometry& geometry,
                      std::optional<int> ignore_plane = std::nullopt);

struct TraceResult {
    bool los_clear = false;
    std::vector<ReflectionEvent> reflections;
};

/// Direct-path visibility plus every single-bounce reflection of one
/// satellite. Candidate reflectors are all building planes followed by the
/// vehicle planes; vehicle planes get indices geometry.planes.size() + j and
/// never occlude. Both legs of a reflection are occlusion-tested with the
/// reflecting plane ignored.
TraceResult trace_epoch(const SatelliteState& satellite, const Vec3& antenna, const CanyonGeometry& geometry,
                        std::span<const BoundedPlane> vehicle_planes, double epoch = 0.0);

} // namespace urbanmp
