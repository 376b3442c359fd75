#include <doctest.h>

#include <cmath>

#include "urbanmp/error.hpp"
#include "urbanmp/rng.hpp"
#include "urbanmp/simulate.hpp"

using namespace urbanmp;

namespace {

ScenarioConfig short_config()
{
    ScenarioConfig c;
    c.repetitions = 2;
    c.nu_sweep = {5, 60};
    return c;
}

bool same_observations(const EnvironmentRun& a, const EnvironmentRun& b)
{
    if (a.observations.size() != b.observations.size() || a.epoch_count != b.epoch_count) {
        return false;
    }
    for (std::size_t i = 0; i < a.observations.size(); ++i) {
        const auto& x = a.observations[i];
        const auto& y = b.observations[i];
        if (x.epoch != y.epoch || x.repetition != y.repetition || x.sat_id != y.sat_id || x.mode != y.mode ||
            x.reflections.size() != y.reflections.size()) {
            return false;
        }
        for (std::size_t k = 0; k < x.reflections.size(); ++k) {
            if (x.reflections[k].delay != y.reflections[k].delay ||
                x.reflections[k].plane_index != y.reflections[k].plane_index ||
                !(x.reflections[k].point == y.reflections[k].point)) {
                return false;
            }
        }
    }
    return true;
}

double splos_fraction(const EnvironmentRun& run)
{
    std::size_t n = 0;
    for (const auto& o : run.observations) {
        n += o.mode == ReceptionMode::splos ? 1 : 0;
    }
    return static_cast<double>(n) / run.observations.size();
}

} // namespace

TEST_CASE("vehicle pose examples")
{
    ScenarioConfig c;
    const double half = c.loop_side() / 2.0;
    const auto start = vehicle_position(0.0, c);
    CHECK(start.position.x == doctest::Approx(-half));
    CHECK(start.position.y == doctest::Approx(-half));
    CHECK(start.position.z == 0.0);

    const auto end = vehicle_position(c.duration, c);
    CHECK(norm(end.position - start.position) < 1e-9);

    const auto mid = vehicle_position(28.0, c);
    CHECK(mid.position.x == doctest::Approx(-half + 140.0));
    CHECK(mid.position.y == doctest::Approx(-half));

    CHECK(antenna_position(start, c).z == doctest::Approx(1.51));
    CHECK_THROWS_AS(vehicle_position(-1.0, c), ParameterError);
    CHECK_THROWS_AS(vehicle_position(c.duration + 1.0, c), ParameterError);
}

TEST_CASE("vehicle stays on the road midlines and moves at constant speed")
{
    ScenarioConfig c;
    const double half = c.loop_side() / 2.0;
    Vec3 prev = vehicle_position(0.0, c).position;
    for (double t = 0.5; t <= c.duration; t += 0.5) {
        const Vec3 p = vehicle_position(t, c).position;
        const bool on_x = std::abs(std::abs(p.x) - half) < 1e-9;
        const bool on_y = std::abs(std::abs(p.y) - half) < 1e-9;
        CHECK((on_x || on_y));
        CHECK(norm(p - prev) <= 0.5 * c.vehicle_speed + 1e-9);
        prev = p;
    }
}

TEST_CASE("vehicle roof sits under the antenna")
{
    ScenarioConfig c;
    const auto pose = vehicle_position(50.0, c);
    const auto roof = vehicle_roof_plane(pose, c);
    const Vec3 a = antenna_position(pose, c);
    CHECK(roof.kind == SurfaceKind::vehicle_roof);
    CHECK(roof.signed_distance(a) == doctest::Approx(c.antenna_offset));
    CHECK(roof.contains(a - roof.normal * c.antenna_offset));
}

TEST_CASE("configuration invariants")
{
    ScenarioConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.samples_per_repetition() == 224);
    CHECK(c.repetition_starts() == std::vector<double>{0, 7200, 14400, 21600, 28800, 36000});
    c.vehicle_speed = 4.0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.sample_period = 0.0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
    c = {};
    c.repetitions = 0;
    CHECK_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("reception modes")
{
    CHECK(classify(true, false) == ReceptionMode::splos);
    CHECK(classify(true, true) == ReceptionMode::multipath);
    CHECK(classify(false, true) == ReceptionMode::nlos);
    CHECK(classify(false, false) == ReceptionMode::blocked);
    for (auto m : {ReceptionMode::splos, ReceptionMode::multipath, ReceptionMode::nlos, ReceptionMode::blocked}) {
        CHECK(reception_mode_from_string(to_string(m)) == m);
    }
    CHECK(to_string(ReceptionMode::multipath) == "MP");
}

TEST_CASE("environment runs are deterministic and the parallel kernel matches the serial one")
{
    const auto c = short_config();
    const auto geo = generate_canyon(environment_canyon(c, 25.0));
    const auto serial = run_environment_serial(c, geo);
    const auto parallel = run_environment(c, geo);
    const auto again = run_environment(c, geo);
    CHECK(serial.epoch_count == 2 * 224);
    CHECK(same_observations(serial, parallel));
    CHECK(same_observations(parallel, again));
}

TEST_CASE("observations are partitioned into modes consistently with their reflections")
{
    const auto c = short_config();
    const auto run = run_environment(c, 40.0);
    CHECK_FALSE(run.observations.empty());
    for (const auto& o : run.observations) {
        const bool has = !o.reflections.empty();
        CHECK(((o.mode == ReceptionMode::multipath || o.mode == ReceptionMode::nlos) == has));
        CHECK(o.elevation > c.constellation.elevation_mask);
        for (const auto& r : o.reflections) {
            CHECK(r.delay >= c.min_delay_filter);
            CHECK(r.sat_id == o.sat_id);
        }
    }
}

TEST_CASE("shallow canyons see more clear sky than deep ones")
{
    const auto c = short_config();
    CHECK(splos_fraction(run_environment(c, 5.0)) > splos_fraction(run_environment(c, 60.0)));
}

TEST_CASE("without buildings every satellite is received directly")
{
    auto c = short_config();
    const auto run = run_environment(c, empty_canyon(c.canyon));
    CHECK_FALSE(run.observations.empty());
    for (const auto& o : run.observations) {
        CHECK(o.mode == ReceptionMode::splos);
        CHECK(o.reflections.empty());
    }
}

TEST_CASE("sweep composition")
{
    auto c = short_config();
    c.repetitions = 1;
    c.nu_sweep = {25};
    const auto single = run_sweep(c);
    REQUIRE(single.size() == 1);
    CHECK(same_observations(single.at(25.0), run_environment(c, 25.0)));

    c.nu_sweep = {60, 5, 25};
    const auto forward = run_sweep(c);
    c.nu_sweep = {25, 60, 5};
    const auto permuted = run_sweep(c);
    REQUIRE(forward.size() == 3);
    for (const auto& [nu, run] : forward) {
        CHECK(same_observations(run, permuted.at(nu)));
        CHECK(run.seed == derive_seed(c.master_seed, nu));
    }
    CHECK(same_observations(forward.at(25.0), single.at(25.0)));
}

TEST_CASE("open sky census is independent of the city")
{
    ScenarioConfig c;
    const double n = open_sky_census(c, 15.0);
    CHECK(n > 4.0);
    CHECK(n < 14.0);
    CHECK(open_sky_census(c, 90.0) == 0.0);
}
