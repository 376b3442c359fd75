#include "urbanmp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "urbanmp/error.hpp"
#include "urbanmp/rice.hpp"
#include "urbanmp/rng.hpp"

namespace urbanmp {

void CanyonParams::validate() const
{
    const auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!finite_positive(block_side) || !finite_positive(road_width) || !finite_positive(building_width)) {
        throw ParameterError("block side, road width and building width must be finite and > 0");
    }
    if (!finite_positive(rice_sigma)) {
        throw ParameterError("rice_sigma must be finite and > 0");
    }
    if (!std::isfinite(rice_nu) || rice_nu < 0.0) {
        throw ParameterError("rice_nu must be finite and >= 0, got " + std::to_string(rice_nu));
    }
    const double ratio = block_side / building_width;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        throw ParameterError("block side must be an integer multiple of the building width");
    }
}

int CanyonParams::buildings_per_edge() const
{
    return static_cast<int>(std::lround(block_side / building_width));
}

std::string_view to_string(SurfaceKind kind)
{
    switch (kind) {
    case SurfaceKind::building_wall: return "building_wall";
    case SurfaceKind::building_roof: return "building_roof";
    case SurfaceKind::vehicle_roof: return "vehicle_roof";
    }
    return "unknown";
}

SurfaceKind surface_kind_from_string(std::string_view name)
{
    if (name == "building_wall") return SurfaceKind::building_wall;
    if (name == "building_roof") return SurfaceKind::building_roof;
    if (name == "vehicle_roof") return SurfaceKind::vehicle_roof;
    throw ParameterError("unknown surface kind: " + std::string(name));
}

bool BoundedPlane::contains(const Vec3& q, double tol) const
{
    const Vec3 rel = q - point;
    const double u = dot(rel, axis_u);
    const double v = dot(rel, axis_v);
    return u >= u_min - tol && u <= u_max + tol && v >= v_min - tol && v <= v_max + tol;
}

std::array<BoundedPlane, planes_per_building> building_planes(const Building& b, int building_index)
{
    const double cx = 0.5 * (b.x_min + b.x_max);
    const double cy = 0.5 * (b.y_min + b.y_max);
    const double hx = 0.5 * (b.x_max - b.x_min);
    const double hy = 0.5 * (b.y_max - b.y_min);
    const Vec3 up{0.0, 0.0, 1.0};

    const auto wall = [&](Vec3 foot, Vec3 normal, Vec3 along, double half) {
        return BoundedPlane{foot, normal, along, up, -half, half, 0.0, b.height,
                            SurfaceKind::building_wall, building_index};
    };
    return {
        wall({b.x_max, cy, 0.0}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, hy),
        wall({b.x_min, cy, 0.0}, {-1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, hy),
        wall({cx, b.y_max, 0.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}, hx),
        wall({cx, b.y_min, 0.0}, {0.0, -1.0, 0.0}, {1.0, 0.0, 0.0}, hx),
        BoundedPlane{{cx, cy, b.height}, up, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, -hx, hx, -hy, hy,
                     SurfaceKind::building_roof, building_index},
    };
}

namespace {

CanyonGeometry build(const CanyonParams& params, bool with_buildings)
{
    params.validate();
    CanyonGeometry geo;
    geo.params = params;

    const int n = params.buildings_per_edge();
    const double w = params.building_width;
    const double half_block = 0.5 * params.block_side;
    RandomStream rng(params.seed);

    int block = 0;
    for (int bj = -1; bj <= 1; ++bj) {
        for (int bi = -1; bi <= 1; ++bi, ++block) {
            geo.block_first[block] = static_cast<int>(geo.buildings.size());
            const double x0 = bi * params.block_pitch() - half_block;
            const double y0 = bj * params.block_pitch() - half_block;
            Box bounds{{x0, y0, 0.0}, {x0 + params.block_side, y0 + params.block_side, 0.0}};

            if (with_buildings) {
                for (int cj = 0; cj < n; ++cj) {
                    for (int ci = 0; ci < n; ++ci) {
                        const bool perimeter = ci == 0 || cj == 0 || ci == n - 1 || cj == n - 1;
                        if (!perimeter) {
                            continue;
                        }
                        Building b;
                        b.x_min = x0 + ci * w;
                        b.x_max = x0 + (ci + 1) * w;
                        b.y_min = y0 + cj * w;
                        b.y_max = y0 + (cj + 1) * w;
                        b.height = sample_rice(params.rice_nu, params.rice_sigma, rng);
                        b.block = block;
                        bounds.hi.z = std::max(bounds.hi.z, b.height);
                        geo.buildings.push_back(b);
                    }
                }
            }
            geo.block_bounds[block] = bounds;
        }
    }
    geo.block_first[9] = static_cast<int>(geo.buildings.size());

    geo.planes.reserve(geo.buildings.size() * planes_per_building);
    for (std::size_t i = 0; i < geo.buildings.size(); ++i) {
        const auto planes = building_planes(geo.buildings[i], static_cast<int>(i));
        geo.planes.insert(geo.planes.end(), planes.begin(), planes.end());
    }
    return geo;
}

} // namespace

CanyonGeometry generate_canyon(const CanyonParams& params) { return build(params, true); }

CanyonGeometry empty_canyon(const CanyonParams& params) { return build(params, false); }

} // namespace urbanmp
