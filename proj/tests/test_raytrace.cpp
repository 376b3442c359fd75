#include <doctest.h>

#include <cmath>

#include "urbanmp/geometry.hpp"
#include "urbanmp/oracles.hpp"
#include "urbanmp/raytrace.hpp"
#include "urbanmp/rng.hpp"

using namespace urbanmp;

namespace {

BoundedPlane plane_z0(double half = 1e6)
{
    BoundedPlane p;
    p.point = {0, 0, 0};
    p.normal = {0, 0, 1};
    p.axis_u = {1, 0, 0};
    p.axis_v = {0, 1, 0};
    p.u_min = -half;
    p.u_max = half;
    p.v_min = -half;
    p.v_max = half;
    return p;
}

BoundedPlane wall_x0(double half = 1e6)
{
    BoundedPlane p;
    p.point = {0, 0, 0};
    p.normal = {1, 0, 0};
    p.axis_u = {0, 1, 0};
    p.axis_v = {0, 0, 1};
    p.u_min = -half;
    p.u_max = half;
    p.v_min = -half;
    p.v_max = half;
    return p;
}

Vec3 random_point(RandomStream& rng, double lo, double hi)
{
    return {lo + (hi - lo) * rng.uniform(), lo + (hi - lo) * rng.uniform(), lo + (hi - lo) * rng.uniform()};
}

// Two buildings 25 m tall lining a 30 m street along the y axis.
CanyonGeometry street_canyon(double height)
{
    CanyonGeometry g = empty_canyon(CanyonParams{});
    g.buildings.push_back({-40.0, -15.0, -100.0, 100.0, height, 4});
    g.buildings.push_back({15.0, 40.0, -100.0, 100.0, height, 4});
    for (int i = 0; i < 2; ++i) {
        for (const auto& p : building_planes(g.buildings[i], i)) {
            g.planes.push_back(p);
        }
    }
    for (int j = 0; j < 10; ++j) {
        g.block_first[j] = j <= 4 ? 0 : 2;
    }
    for (auto& box : g.block_bounds) {
        box = {{1e9, 1e9, 1e9}, {-1e9, -1e9, -1e9}};
    }
    g.block_bounds[4] = {{-40.0, -100.0, 0.0}, {40.0, 100.0, height}};
    return g;
}

} // namespace

TEST_CASE("mirror point examples")
{
    const auto m = mirror_point({1, 2, 3}, plane_z0());
    CHECK(m == Vec3{1, 2, -3});

    BoundedPlane p = plane_z0();
    p.point = {10, 0, 0};
    p.normal = {1, 0, 0};
    CHECK(mirror_point({4, 5, 6}, p) == Vec3{16, 5, 6});
}

TEST_CASE("mirror point properties")
{
    RandomStream rng(21);
    for (int i = 0; i < 10000; ++i) {
        BoundedPlane p = plane_z0();
        p.point = random_point(rng, -100, 100);
        p.normal = normalized(random_point(rng, -1, 1));
        const Vec3 a = random_point(rng, -100, 100);
        const Vec3 m = mirror_point(a, p);
        CHECK(norm(mirror_point(m, p) - a) < 1e-12 * std::max(1.0, norm(a)) * 100);
        CHECK(std::abs(p.signed_distance(m) + p.signed_distance(a)) < 1e-9);
    }
}

TEST_CASE("reflection point examples")
{
    const auto r = reflection_point({0, 0, 10}, {4, 0, 10}, plane_z0());
    REQUIRE(r);
    CHECK(norm(*r - Vec3{2, 0, 0}) < 1e-12);

    const auto centered = reflection_point({-5, 0, 5}, {5, 0, 5}, plane_z0());
    REQUIRE(centered);
    CHECK(norm(*centered) < 1e-12);

    CHECK_FALSE(reflection_point({0, 0, 10}, {4, 0, -10}, plane_z0()));
    CHECK_FALSE(reflection_point({0, 0, 10}, {4, 0, 0}, plane_z0()));
    CHECK_FALSE(reflection_point({0, 0, 10}, {4, 0, 10}, plane_z0(1.0)));
}

TEST_CASE("reflection point obeys the law of reflection and matches a grid search")
{
    RandomStream rng(22);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec3 s = random_point(rng, -50, 50) + Vec3{0, 0, 60};
        const Vec3 a = random_point(rng, -50, 50) + Vec3{0, 0, 60};
        const auto r = reflection_point(s, a, plane_z0());
        REQUIRE(r);
        const Vec3 in = normalized(*r - s);
        const Vec3 out = normalized(a - *r);
        CHECK(std::abs(in.z + out.z) < 1e-9);
        CHECK(std::abs(dot(cross(in, out), Vec3{0, 0, 1})) < 1e-9);
        ++checked;
    }
    CHECK(checked == 10000);

    RandomStream grid_rng(23);
    for (int i = 0; i < 100; ++i) {
        const Vec3 s = random_point(grid_rng, -20, 20) + Vec3{0, 0, 30};
        const Vec3 a = random_point(grid_rng, -20, 20) + Vec3{0, 0, 30};
        const auto r = reflection_point(s, a, plane_z0(200.0));
        REQUIRE(r);
        const auto best = oracle::min_path_on_plane(s, a, plane_z0(200.0));
        CHECK(norm(*r - best.point) <= best.resolution * 2.0);
        CHECK(norm(*r - s) + norm(a - *r) <= best.path_length + 1e-9);
    }
}

TEST_CASE("path delay examples and properties")
{
    CHECK(path_delay({0, 0, 10}, {4, 0, 10}, {2, 0, 0}) == doctest::Approx(2 * std::sqrt(104.0) - 4.0));
    CHECK(std::abs(path_delay({0, 0, 10}, {4, 0, 10}, {2, 0, 0}) - 16.3961) < 1e-4);
    CHECK(path_delay({0, 0, 0}, {10, 0, 0}, {5, 0, 0}) == 0.0);

    RandomStream rng(24);
    for (int i = 0; i < 10000; ++i) {
        const Vec3 s = random_point(rng, -1e7, 1e7);
        const Vec3 a = random_point(rng, -100, 100);
        const Vec3 r = random_point(rng, -100, 100);
        CHECK(path_delay(s, a, r) >= 0.0);
    }
}

TEST_CASE("segment occlusion examples")
{
    const auto g = street_canyon(25.0);
    const Vec3 a{0, 0, 1.5};

    CHECK_FALSE(segment_occluded(a, a + Vec3{0, 0, 2e7}, g));

    // 5 degrees elevation perpendicular to the street: hits the wall 15 m away
    const double t = std::tan(5.0 * constants::deg2rad);
    CHECK(segment_occluded(a, a + Vec3{1e6, 0, 1e6 * t}, g));
    // along the street the path stays clear
    CHECK_FALSE(segment_occluded(a, a + Vec3{0, 1e6, 1e6 * t}, g));
    // steep enough to clear the roof edge
    CHECK_FALSE(segment_occluded(a, a + Vec3{1e3, 0, 1e3 * 2.0}, g));

    CHECK_FALSE(segment_occluded(a, a + Vec3{1e-12, 0, 0}, g));
    // the segment stopping on a face is not blocked by that face
    CHECK_FALSE(segment_occluded(a, {15.0, 0.0, 10.0}, g));
}

TEST_CASE("segment occlusion is symmetric")
{
    const auto g = street_canyon(25.0);
    RandomStream rng(25);
    for (int i = 0; i < 10000; ++i) {
        const Vec3 p{-60 + 120 * rng.uniform(), -120 + 240 * rng.uniform(), 40 * rng.uniform()};
        const Vec3 q{-60 + 120 * rng.uniform(), -120 + 240 * rng.uniform(), 40 * rng.uniform()};
        CHECK(segment_occluded(p, q, g) == segment_occluded(q, p, g));
    }
}

TEST_CASE("occlusion ignores the designated plane")
{
    const auto g = street_canyon(25.0);
    const Vec3 a{0, 0, 1.5};
    const Vec3 through{30, 0, 5};
    CHECK(segment_occluded(a, through, g));
    // the east building's west wall is plane 1 of building 1
    CHECK(segment_occluded(a, through, g, planes_per_building + 1) == false);
}

TEST_CASE("trace on a single wall yields one reflection")
{
    CanyonGeometry g = empty_canyon(CanyonParams{});
    g.planes.push_back(wall_x0());
    SatelliteState sat;
    sat.sat_id = 3;
    sat.position = {10, 0, 4};
    sat.elevation = 90.0;
    const auto result = trace_epoch(sat, {10, 0, 0}, g, {}, 12.0);
    CHECK(result.los_clear);
    REQUIRE(result.reflections.size() == 1);
    const auto& ev = result.reflections.front();
    CHECK(ev.sat_id == 3);
    CHECK(ev.epoch == 12.0);
    CHECK(ev.plane_index == 0);
    CHECK(norm(ev.point - Vec3{0, 0, 2}) < 1e-12);
    CHECK(std::abs(ev.delay - 16.3961) < 1e-4);
}

TEST_CASE("zenith satellite over an open roof gives only the roof bounce")
{
    const auto g = empty_canyon(CanyonParams{});
    BoundedPlane roof = plane_z0(1.0);
    roof.point = {0, 0, 1.5};
    roof.kind = SurfaceKind::vehicle_roof;
    const std::vector<BoundedPlane> vehicle{roof};
    const Vec3 antenna{0, 0, 1.51};
    SatelliteState sat;
    sat.position = {0, 0, 2e7};
    sat.elevation = 90.0;
    const auto result = trace_epoch(sat, antenna, g, vehicle);
    CHECK(result.los_clear);
    REQUIRE(result.reflections.size() == 1);
    CHECK(result.reflections[0].kind == SurfaceKind::vehicle_roof);
    CHECK(result.reflections[0].plane_index == 0);
    CHECK(result.reflections[0].delay <= 0.02 + 1e-9);
}

TEST_CASE("vehicle roof never occludes")
{
    const auto g = street_canyon(25.0);
    BoundedPlane roof = plane_z0(1.0);
    roof.point = {0, 0, 1.5};
    const std::vector<BoundedPlane> vehicle{roof};
    SatelliteState sat;
    sat.elevation = 30.0;
    sat.position = {0, 2e7, 2e7 * std::tan(30.0 * constants::deg2rad)};
    const auto result = trace_epoch(sat, {0, 0, 1.51}, g, vehicle);
    CHECK(result.los_clear);
}

TEST_CASE("trace rejects satellites below the horizon")
{
    const auto g = empty_canyon(CanyonParams{});
    SatelliteState sat;
    sat.position = {1e7, 0, -1e5};
    sat.elevation = -1.0;
    CHECK_THROWS(trace_epoch(sat, {0, 0, 1.5}, g, {}));
}
