#include <doctest.h>

#include <cmath>

#include "urbanmp/error.hpp"
#include "urbanmp/geometry.hpp"
#include "urbanmp/io.hpp"
#include "urbanmp/rice.hpp"

using namespace urbanmp;

namespace {

CanyonParams params_for(double nu, std::uint64_t seed = 42)
{
    CanyonParams p;
    p.rice_nu = nu;
    p.seed = seed;
    return p;
}

bool overlaps(const Building& a, const Building& b)
{
    return a.x_min < b.x_max - 1e-9 && b.x_min < a.x_max - 1e-9 && a.y_min < b.y_max - 1e-9 &&
           b.y_min < a.y_max - 1e-9;
}

} // namespace

TEST_CASE("default canyon has a ring of 36 buildings per block")
{
    const auto geo = generate_canyon(params_for(25.0));
    REQUIRE(geo.buildings.size() == 324);
    CHECK(geo.planes.size() == 324 * planes_per_building);
    for (int j = 0; j < 9; ++j) {
        CHECK(geo.block_first[j + 1] - geo.block_first[j] == 36);
    }
    for (const auto& b : geo.buildings) {
        CHECK(b.height > 0.0);
        CHECK(b.x_max - b.x_min == doctest::Approx(25.0));
        CHECK(b.y_max - b.y_min == doctest::Approx(25.0));
    }
}

TEST_CASE("building count follows the tiling formula")
{
    CanyonParams p;
    p.block_side = 100.0;
    p.building_width = 10.0;
    CHECK(generate_canyon(p).buildings.size() == 9 * (100 - 64));

    p.block_side = 20.0;
    p.building_width = 10.0;
    CHECK(generate_canyon(p).buildings.size() == 9 * 4);
}

TEST_CASE("footprints lie inside their block and never overlap")
{
    const auto geo = generate_canyon(params_for(25.0));
    const double pitch = geo.params.block_pitch();
    const double half = geo.params.block_side / 2.0;
    for (std::size_t i = 0; i < geo.buildings.size(); ++i) {
        const auto& b = geo.buildings[i];
        const double cx = (b.block % 3 - 1) * pitch;
        const double cy = (b.block / 3 - 1) * pitch;
        CHECK(b.x_min >= cx - half - 1e-9);
        CHECK(b.x_max <= cx + half + 1e-9);
        CHECK(b.y_min >= cy - half - 1e-9);
        CHECK(b.y_max <= cy + half + 1e-9);
        const auto& box = geo.block_bounds[b.block];
        CHECK(b.height <= box.hi.z);
        for (std::size_t k = i + 1; k < geo.buildings.size(); ++k) {
            CHECK_FALSE(overlaps(b, geo.buildings[k]));
        }
    }
}

TEST_CASE("plane frames are orthonormal with outward walls and upward roofs")
{
    const auto geo = generate_canyon(params_for(40.0));
    for (std::size_t p = 0; p < geo.planes.size(); ++p) {
        const auto& pl = geo.planes[p];
        CHECK(norm(pl.normal) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(dot(pl.normal, pl.axis_u)) < 1e-12);
        CHECK(std::abs(dot(pl.normal, pl.axis_v)) < 1e-12);
        CHECK(pl.building == static_cast<int>(p / planes_per_building));
        const auto& b = geo.buildings[pl.building];
        const Vec3 center{(b.x_min + b.x_max) / 2, (b.y_min + b.y_max) / 2, b.height / 2};
        CHECK(pl.signed_distance(center) < 0.0);
        if (p % planes_per_building == 4) {
            CHECK(pl.kind == SurfaceKind::building_roof);
            CHECK(pl.normal.z == 1.0);
        } else {
            CHECK(pl.kind == SurfaceKind::building_wall);
            CHECK(pl.normal.z == 0.0);
        }
    }
}

TEST_CASE("bounded plane containment")
{
    Building b{0.0, 10.0, 0.0, 10.0, 20.0, 0};
    const auto planes = building_planes(b, 0);
    const auto& east = planes[0];
    CHECK(east.contains({10.0, 5.0, 10.0}));
    CHECK(east.contains({10.0, 0.0, 0.0}));
    CHECK_FALSE(east.contains({10.0, 5.0, 20.5}));
    CHECK(east.contains({10.0, 5.0, 20.5}, 1.0));
    CHECK_FALSE(east.contains({10.0, -0.1, 5.0}));
}

TEST_CASE("generation is deterministic for a given seed")
{
    const auto a = dump_json(geometry_to_json(generate_canyon(params_for(25.0, 7))));
    const auto b = dump_json(geometry_to_json(generate_canyon(params_for(25.0, 7))));
    CHECK(a == b);
    const auto c = dump_json(geometry_to_json(generate_canyon(params_for(25.0, 8))));
    CHECK(a != c);
}

TEST_CASE("nu changes heights but not footprints")
{
    const auto shallow = generate_canyon(params_for(5.0));
    const auto deep = generate_canyon(params_for(60.0));
    REQUIRE(shallow.buildings.size() == deep.buildings.size());
    bool any_height_differs = false;
    for (std::size_t i = 0; i < shallow.buildings.size(); ++i) {
        const auto& s = shallow.buildings[i];
        const auto& d = deep.buildings[i];
        CHECK(s.x_min == d.x_min);
        CHECK(s.x_max == d.x_max);
        CHECK(s.y_min == d.y_min);
        CHECK(s.y_max == d.y_max);
        any_height_differs = any_height_differs || s.height != d.height;
    }
    CHECK(any_height_differs);
}

TEST_CASE("mean height stays near the analytic Rice mean")
{
    for (double nu : {0.0, 5.0, 25.0, 60.0}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const auto geo = generate_canyon(params_for(nu, seed));
            double sum = 0.0;
            double sum2 = 0.0;
            for (const auto& b : geo.buildings) {
                sum += b.height;
                sum2 += b.height * b.height;
            }
            const double n = static_cast<double>(geo.buildings.size());
            const double mean = sum / n;
            const double sd = std::sqrt(sum2 / n - mean * mean);
            CAPTURE(nu);
            CAPTURE(seed);
            CHECK(std::abs(mean - rice_mean(nu, 5.0)) < 4.0 * sd / std::sqrt(n));
        }
    }
}

TEST_CASE("invalid parameters are rejected")
{
    CanyonParams p;
    p.building_width = 24.0;
    CHECK_THROWS_AS(generate_canyon(p), ParameterError);
    p = {};
    p.rice_sigma = 0.0;
    CHECK_THROWS_AS(generate_canyon(p), ParameterError);
    p = {};
    p.rice_nu = -1.0;
    CHECK_THROWS_AS(generate_canyon(p), ParameterError);
    p = {};
    p.road_width = -5.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("empty canyon keeps the block layout without buildings")
{
    const auto geo = empty_canyon(CanyonParams{});
    CHECK(geo.buildings.empty());
    CHECK(geo.planes.empty());
}

TEST_CASE("surface kind names round-trip")
{
    for (auto k : {SurfaceKind::building_wall, SurfaceKind::building_roof, SurfaceKind::vehicle_roof}) {
        CHECK(surface_kind_from_string(to_string(k)) == k);
    }
    CHECK_THROWS(surface_kind_from_string("window"));
}
