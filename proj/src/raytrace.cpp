#include "urbanmp/raytrace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "urbanmp/error.hpp"

namespace urbanmp {

Vec3 mirror_point(const Vec3& antenna, const BoundedPlane& plane)
{
    const Vec3& n = plane.normal;
    return antenna + n * (2.0 * dot(plane.point - antenna, n) / dot(n, n));
}

std::optional<Vec3> reflection_point(const Vec3& satellite, const Vec3& antenna, const BoundedPlane& plane)
{
    const double side_s = plane.signed_distance(satellite);
    const double side_a = plane.signed_distance(antenna);
    if (!(side_s * side_a > 0.0)) {
        return std::nullopt;
    }
    const Vec3 mirrored = mirror_point(antenna, plane);
    const Vec3 ray = satellite - mirrored;
    const double denom = dot(ray, plane.normal);
    if (denom == 0.0) {
        return std::nullopt;
    }
    // Intersection of the line s--a_m with the plane. Parametrised from a_m
    // instead of s: same point, but the short leg keeps full precision when
    // the satellite is ~2e7 m away.
    const double k = dot(plane.point - mirrored, plane.normal) / denom;
    const Vec3 r = mirrored + ray * k;
    if (!plane.contains(r)) {
        return std::nullopt;
    }
    return r;
}

double path_delay(const Vec3& satellite, const Vec3& antenna, const Vec3& reflection)
{
    const Vec3 rs = reflection - satellite;
    const Vec3 as = antenna - satellite;
    const double len_rs = norm(rs);
    const double len_as = norm(as);
    const double len_ar = norm(antenna - reflection);
    // |r-s| - |a-s| = (r-a).(r+a-2s) / (|r-s| + |a-s|), free of cancellation
    const double denom = len_rs + len_as;
    const double diff = denom > 0.0 ? dot(reflection - antenna, rs + as) / denom : 0.0;
    return std::max(0.0, diff + len_ar);
}

namespace {

// Conservative line/box overlap on t in [0, 1] for culling; the box is
// padded so faces lying on its boundary are never culled.
bool segment_touches_box(const Vec3& from, const Vec3& dir, const Box& box)
{
    constexpr double pad = 1e-6;
    double t_lo = 0.0;
    double t_hi = 1.0;
    const double o[3] = {from.x, from.y, from.z};
    const double d[3] = {dir.x, dir.y, dir.z};
    const double lo[3] = {box.lo.x - pad, box.lo.y - pad, box.lo.z - pad};
    const double hi[3] = {box.hi.x + pad, box.hi.y + pad, box.hi.z + pad};
    for (int axis = 0; axis < 3; ++axis) {
        if (d[axis] == 0.0) {
            if (o[axis] < lo[axis] || o[axis] > hi[axis]) {
                return false;
            }
            continue;
        }
        const double inv = 1.0 / d[axis];
        double t0 = (lo[axis] - o[axis]) * inv;
        double t1 = (hi[axis] - o[axis]) * inv;
        if (t0 > t1) {
            std::swap(t0, t1);
        }
        t_lo = std::max(t_lo, t0);
        t_hi = std::min(t_hi, t1);
        if (t_lo > t_hi) {
            return false;
        }
    }
    return true;
}

bool crosses_face(const Vec3& from, const Vec3& dir, const BoundedPlane& face)
{
    const double denom = dot(dir, face.normal);
    if (denom == 0.0) {
        return false;
    }
    const double t = dot(face.point - from, face.normal) / denom;
    if (!(t > occlusion_epsilon && t < 1.0 - occlusion_epsilon)) {
        return false;
    }
    return face.contains(from + dir * t);
}

} // namespace

bool segment_occluded(const Vec3& from, const Vec3& to, const CanyonGeometry& geometry,
                      std::optional<int> ignore_plane)
{
    const Vec3 dir = to - from;
    const int skip = ignore_plane.value_or(-1);
    for (int block = 0; block < 9; ++block) {
        const int first = geometry.block_first[block];
        const int last = geometry.block_first[block + 1];
        if (first == last || !segment_touches_box(from, dir, geometry.block_bounds[block])) {
            continue;
        }
        for (int b = first; b < last; ++b) {
            if (!segment_touches_box(from, dir, geometry.buildings[b].bounds())) {
                continue;
            }
            for (int k = 0; k < planes_per_building; ++k) {
                const int index = b * planes_per_building + k;
                if (index != skip && crosses_face(from, dir, geometry.planes[index])) {
                    return true;
                }
            }
        }
    }
    return false;
}

TraceResult trace_epoch(const SatelliteState& satellite, const Vec3& antenna, const CanyonGeometry& geometry,
                        std::span<const BoundedPlane> vehicle_planes, double epoch)
{
    if (!(satellite.elevation > 0.0)) {
        throw ParameterError("trace_epoch: satellite must be above the horizon");
    }
    const Vec3& s = satellite.position;
    TraceResult result;
    result.los_clear = !segment_occluded(s, antenna, geometry);

    const auto consider = [&](const BoundedPlane& plane, int index) {
        const auto r = reflection_point(s, antenna, plane);
        if (!r) {
            return;
        }
        if (segment_occluded(s, *r, geometry, index) || segment_occluded(*r, antenna, geometry, index)) {
            return;
        }
        result.reflections.push_back({satellite.sat_id, epoch, *r, path_delay(s, antenna, *r), index, plane.kind});
    };

    const int building_planes = static_cast<int>(geometry.planes.size());
    for (int i = 0; i < building_planes; ++i) {
        consider(geometry.planes[i], i);
    }
    for (std::size_t j = 0; j < vehicle_planes.size(); ++j) {
        consider(vehicle_planes[j], building_planes + static_cast<int>(j));
    }
    return result;
}

} // namespace urbanmp
