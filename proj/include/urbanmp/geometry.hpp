#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "urbanmp/vec3.hpp"

namespace urbanmp {

struct CanyonParams {
    double block_side = 250.0;     ///< b [m]
    double road_width = 30.0;      ///< delta b [m]
    double building_width = 25.0;  ///< w [m]; also used as building depth
    double rice_nu = 25.0;         ///< nu_h [m]
    double rice_sigma = 5.0;       ///< sigma_h [m]
    std::uint64_t seed = 42;

    /// Throws ParameterError when an invariant does not hold.
    void validate() const;
    /// Buildings along one block edge, b / w.
    int buildings_per_edge() const;
    /// Distance between neighbouring block centers, b + delta b.
    double block_pitch() const { return block_side + road_width; }
};

enum class SurfaceKind { building_wall, building_roof, vehicle_roof };

std::string_view to_string(SurfaceKind kind);
SurfaceKind surface_kind_from_string(std::string_view name);

/// Rectangle embedded in 3-D. A point q belongs to it when
/// (q - point) . normal == 0 and its coordinates along axis_u / axis_v fall
/// inside [u_min, u_max] x [v_min, v_max].
struct BoundedPlane {
    Vec3 point;
    Vec3 normal;
    Vec3 axis_u;
    Vec3 axis_v;
    double u_min = 0.0;
    double u_max = 0.0;
    double v_min = 0.0;
    double v_max = 0.0;
    SurfaceKind kind = SurfaceKind::building_wall;
    int building = -1; ///< owning building, -1 for the vehicle

    double signed_distance(const Vec3& q) const { return dot(q - point, normal); }
    /// In-extent test for a point assumed to lie on the plane; tol widens the
    /// rectangle on every side.
    bool contains(const Vec3& q, double tol = 0.0) const;
};

struct Box {
    Vec3 lo;
    Vec3 hi;
};

/// Axis-aligned cuboid standing on the ground plane z = 0.
struct Building {
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
    double height = 0.0;
    int block = 0;

    Box bounds() const { return {{x_min, y_min, 0.0}, {x_max, y_max, height}}; }
};

inline constexpr int planes_per_building = 5; // 4 walls + roof

/// The generated city. Immutable after construction.
///
/// planes[5 * i + k] belongs to buildings[i]: k = 0..3 are the east, west,
/// north and south walls, k = 4 the roof. block_bounds holds one box per
/// block enclosing all of its buildings, for occlusion culling.
struct CanyonGeometry {
    CanyonParams params;
    std::vector<Building> buildings;
    std::vector<BoundedPlane> planes;
    std::array<Box, 9> block_bounds{};
    std::array<int, 10> block_first{}; ///< buildings of block j: [block_first[j], block_first[j+1])
};

/// 3x3 blocks centered on the origin with pitch b + delta b. Each block's
/// perimeter is tiled with w x w buildings whose heights are Rice(nu, sigma)
/// draws taken in block-major, row-major cell order.
CanyonGeometry generate_canyon(const CanyonParams& params);

/// Same block layout with no buildings at all. Used for open-sky test runs.
CanyonGeometry empty_canyon(const CanyonParams& params);

/// Planes of one building in the canonical order above.
std::array<BoundedPlane, planes_per_building> building_planes(const Building& b, int building_index);

} // namespace urbanmp
