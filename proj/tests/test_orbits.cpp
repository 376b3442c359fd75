#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "urbanmp/error.hpp"
#include "urbanmp/orbits.hpp"
#include "urbanmp/rng.hpp"

using namespace urbanmp;

TEST_CASE("ENU frame examples")
{
    const Geodetic obs{40.0, -70.0, 0.0};
    const Vec3 origin = geodetic_to_earth_fixed(obs);
    const Vec3 up = normalized(origin);

    const Vec3 zenith = to_local_enu(origin + up * 1000.0, obs);
    CHECK(std::abs(zenith.x) < 1e-6);
    CHECK(std::abs(zenith.y) < 1e-6);
    CHECK(zenith.z == doctest::Approx(1000.0).epsilon(1e-12));

    const Geodetic equator{0.0, 0.0, 0.0};
    const Vec3 east = to_local_enu({earth_radius, 10.0, 0.0}, equator);
    CHECK(east.x == doctest::Approx(10.0));
    CHECK(std::abs(east.y) < 1e-9);
    CHECK(std::abs(east.z) < 1e-9);
    const Vec3 north = to_local_enu({earth_radius, 0.0, 10.0}, equator);
    CHECK(north.y == doctest::Approx(10.0));
}

TEST_CASE("elevation and azimuth examples")
{
    const Vec3 a{0, 0, 0};
    auto [el, az] = elevation_azimuth({0, 0, 100}, a);
    CHECK(el == doctest::Approx(90.0));

    std::tie(el, az) = elevation_azimuth({1, 0, 1}, a);
    CHECK(el == doctest::Approx(45.0));
    CHECK(az == doctest::Approx(90.0));

    std::tie(el, az) = elevation_azimuth({0, 1, 0}, a);
    CHECK(el == doctest::Approx(0.0));
    CHECK(az == doctest::Approx(0.0));

    std::tie(el, az) = elevation_azimuth({-1, -1, 0}, a);
    CHECK(az == doctest::Approx(225.0));

    CHECK_THROWS_AS(elevation_azimuth(a, a), GeometryError);
}

TEST_CASE("ENU round trip")
{
    const Geodetic obs{40.0, -70.0, 0.0};
    RandomStream rng(5);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 p{(rng.uniform() - 0.5) * 6e7, (rng.uniform() - 0.5) * 6e7, (rng.uniform() - 0.5) * 6e7};
        const Vec3 back = from_local_enu(to_local_enu(p, obs), obs);
        CHECK(norm(back - p) < 1e-6);
    }
}

TEST_CASE("geodetic conversion round trip")
{
    for (double lat : {-80.0, -10.0, 0.0, 40.0, 89.0}) {
        for (double lon : {-179.0, -70.0, 0.0, 120.0}) {
            const Geodetic g{lat, lon, 123.0};
            const Geodetic back = earth_fixed_to_geodetic(geodetic_to_earth_fixed(g));
            CHECK(back.latitude == doctest::Approx(g.latitude));
            CHECK(back.longitude == doctest::Approx(g.longitude));
            CHECK(back.height == doctest::Approx(g.height).epsilon(1e-6));
        }
    }
}

TEST_CASE("constellation slots cover six evenly spaced planes")
{
    ConstellationConfig c;
    const auto slots = constellation_slots(c);
    REQUIRE(slots.size() == 31);
    std::array<int, 6> per_plane{};
    for (const auto& s : slots) {
        ++per_plane[s.plane];
        CHECK(s.right_ascension == doctest::Approx(s.plane * constants::pi / 3.0));
    }
    CHECK(per_plane == std::array<int, 6>{6, 5, 5, 5, 5, 5});
}

TEST_CASE("orbit planes recovered from positions are 60 degrees apart")
{
    ConstellationConfig c;
    const auto slots = constellation_slots(c);
    const auto p0 = propagate_inertial(c, 0.0);
    const auto p1 = propagate_inertial(c, 600.0);
    for (std::size_t i = 0; i < slots.size(); ++i) {
        const Vec3 h = cross(p0[i], p1[i]);
        const Vec3 node = cross(Vec3{0, 0, 1}, h);
        double angle = std::atan2(node.y, node.x);
        if (angle < 0) {
            angle += 2 * constants::pi;
        }
        if (angle > 2 * constants::pi - 1e-9) {
            angle = 0.0;
        }
        CHECK(std::acos(h.z / norm(h)) * constants::rad2deg == doctest::Approx(55.0));
        CHECK(angle * constants::rad2deg == doctest::Approx(slots[i].plane * 60.0).epsilon(1e-9));
    }
}

TEST_CASE("orbit radius is constant and the track repeats")
{
    ConstellationConfig c;
    for (double t : {0.0, 1234.5, 20000.0}) {
        for (const auto& p : propagate_constellation(c, t)) {
            CHECK(norm(p) == doctest::Approx(c.semi_major_axis).epsilon(1e-12));
        }
    }
    // two orbits are one sidereal day to within the nominal period's rounding
    const auto a = propagate_constellation(c, 500.0);
    const auto b = propagate_constellation(c, 500.0 + 2.0 * c.orbital_period);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(norm(a[i] - b[i]) < 1000.0);
    }
}

TEST_CASE("satellite states use constellation time directly")
{
    ConstellationConfig c;
    const Vec3 antenna{0, 0, 1.51};
    const auto direct = satellite_states(c, 7200.0 * 3 + 17.0, antenna);
    const auto again = satellite_states(c, 21617.0, antenna);
    REQUIRE(direct.size() == again.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(direct[i].position == again[i].position);
        CHECK(direct[i].azimuth >= 0.0);
        CHECK(direct[i].azimuth < 360.0);
    }
}

TEST_CASE("open sky count examples and monotonicity")
{
    ConstellationConfig c;
    CHECK(mean_open_sky_count(c, 90.0, 224.0, 1.0) == 0.0);
    double previous = 1e9;
    for (double mask : {0.0, 5.0, 10.0, 15.0, 30.0, 60.0}) {
        const double n = mean_open_sky_count(c, mask, 224.0, 8.0);
        CHECK(n <= previous);
        previous = n;
    }
    CHECK_THROWS_AS(mean_open_sky_count(c, -1.0, 224.0, 1.0), ParameterError);
    CHECK_THROWS_AS(mean_open_sky_count(c, 91.0, 224.0, 1.0), ParameterError);
}

TEST_CASE("per-epoch visible set shrinks as the mask rises")
{
    ConstellationConfig c;
    for (double t = 0.0; t < 224.0; t += 16.0) {
        const auto states = satellite_states(c, t, {0, 0, 0});
        const auto above = [&](double mask) {
            return std::count_if(states.begin(), states.end(), [&](const auto& s) { return s.elevation > mask; });
        };
        CHECK(above(0.0) >= above(15.0));
        CHECK(above(15.0) >= above(45.0));
    }
}

TEST_CASE("invalid constellation config")
{
    ConstellationConfig c;
    c.satellite_count = 0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.plane_count = 0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.semi_major_axis = 1000.0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
}
