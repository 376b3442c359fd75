#include "urbanmp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <ostream>

#include "urbanmp/analysis.hpp"
#include "urbanmp/artifacts.hpp"
#include "urbanmp/error.hpp"
#include "urbanmp/oracles.hpp"
#include "urbanmp/raytrace.hpp"
#include "urbanmp/rice.hpp"
#include "urbanmp/rng.hpp"

namespace urbanmp {

using nlohmann::json;

namespace {

std::string fmt(const char* pattern, double v)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string join(const std::vector<double>& values, const char* pattern)
{
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        s += (i ? " " : "") + fmt(pattern, values[i]);
    }
    return s;
}

// Environments of a summary document sorted by mu.
std::vector<json> environments_by_mu(const json& summary)
{
    std::vector<json> envs(summary.at("environments").begin(), summary.at("environments").end());
    std::stable_sort(envs.begin(), envs.end(),
                     [](const json& a, const json& b) { return a.at("mu_m").get<double>() < b.at("mu_m").get<double>(); });
    return envs;
}

std::vector<double> column(const std::vector<json>& envs, const char* key)
{
    std::vector<double> out;
    for (const auto& e : envs) {
        out.push_back(e.at(key).get<double>());
    }
    return out;
}

CriterionResult trend(const char* id, const char* name, const std::vector<double>& values)
{
    const int inversions = count_increases(values);
    return {id, name, std::to_string(inversions) + " inversions [" + join(values, "%.3f") + "]",
            "<= " + std::to_string(bounds::max_trend_inversions) + " inversions",
            inversions <= bounds::max_trend_inversions};
}

BoundedPlane random_plane(RandomStream& rng, double half_extent)
{
    const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    const Vec3 normal = normalized(Vec3{rng.standard_normal(), rng.standard_normal(), rng.standard_normal()});
    const Vec3 helper = std::abs(normal.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    const Vec3 u = normalized(cross(helper, normal));
    const Vec3 v = cross(normal, u);
    return BoundedPlane{{uni(-50, 50), uni(-50, 50), uni(-50, 50)}, normal, u, v, -half_extent, half_extent,
                        -half_extent, half_extent, SurfaceKind::building_wall, 0};
}

struct ReflectionCase {
    BoundedPlane plane;
    Vec3 satellite;
    Vec3 antenna;
};

// Antenna 1..30 m in front of a random plane, satellite 50 m .. 2e7 m away
// on the same side.
ReflectionCase random_reflection_case(RandomStream& rng)
{
    const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    ReflectionCase c{random_plane(rng, 40.0), {}, {}};
    const auto& pl = c.plane;
    c.antenna = pl.point + pl.normal * uni(1.0, 30.0) + pl.axis_u * uni(-20, 20) + pl.axis_v * uni(-20, 20);
    Vec3 dir;
    do {
        dir = normalized(Vec3{rng.standard_normal(), rng.standard_normal(), rng.standard_normal()});
    } while (dot(dir, pl.normal) < 0.1);
    const double range = std::exp(uni(std::log(50.0), std::log(2.0e7)));
    c.satellite = c.antenna + dir * range;
    return c;
}

double angle_to(const Vec3& v, const Vec3& n) { return std::atan2(norm(cross(v, n)), dot(v, n)); }

} // namespace

bool VerificationReport::all_pass() const
{
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
}

void VerificationReport::print(std::ostream& os) const
{
    for (const auto& c : criteria) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << "  " << c.name << " | observed: " << c.observed
           << " | bound: " << c.bound << '\n';
    }
    const auto passed = std::count_if(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
    os << passed << "/" << criteria.size() << " criteria passed\n";
}

int count_increases(const std::vector<double>& values)
{
    int n = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        n += values[i] > values[i - 1] ? 1 : 0;
    }
    return n;
}

std::optional<double> threshold_crossing(const std::vector<double>& mu, const std::vector<double>& received,
                                         double threshold)
{
    for (std::size_t i = 0; i < received.size(); ++i) {
        if (received[i] < threshold) {
            if (i == 0) {
                return mu[0];
            }
            const double f = (received[i - 1] - threshold) / (received[i - 1] - received[i]);
            return mu[i - 1] + f * (mu[i] - mu[i - 1]);
        }
    }
    return std::nullopt;
}

CriterionResult check_open_sky(const ScenarioConfig& config)
{
    const double mean = open_sky_census(config, bounds::open_sky_mask);
    return {"C1", "open-sky satellites above 15 deg", fmt("%.4f", mean),
            fmt("%.2f", bounds::open_sky_expected) + " +/- " + fmt("%.1f", bounds::open_sky_tolerance),
            std::abs(mean - bounds::open_sky_expected) <= bounds::open_sky_tolerance};
}

CriterionResult check_threshold(const json& summary)
{
    const auto envs = environments_by_mu(summary);
    const auto mu = column(envs, "mu_m");
    const auto ns = column(envs, "mean_received_ns");
    const auto crossing = threshold_crossing(mu, ns, bounds::threshold_received);
    const std::string bound = "N_s < 4 first reached at mu in [" + fmt("%.0f", bounds::threshold_mu_lo) + ", " +
                              fmt("%.0f", bounds::threshold_mu_hi) + "] m";
    if (!crossing) {
        const double lowest = ns.empty() ? 0.0 : *std::min_element(ns.begin(), ns.end());
        return {"C2", "positioning threshold", "no crossing, min N_s = " + fmt("%.3f", lowest), bound, false};
    }
    return {"C2", "positioning threshold", "crosses at mu = " + fmt("%.2f", *crossing) + " m", bound,
            *crossing >= bounds::threshold_mu_lo && *crossing <= bounds::threshold_mu_hi};
}

CriterionResult check_reflection_trend(const json& summary)
{
    return trend("C3a", "reflections per epoch non-increasing in mu",
                 column(environments_by_mu(summary), "reflections_per_epoch"));
}

CriterionResult check_received_trend(const json& summary)
{
    return trend("C3b", "mean N_s non-increasing in mu", column(environments_by_mu(summary), "mean_received_ns"));
}

CriterionResult check_mode_endpoints(const json& summary)
{
    const auto envs = environments_by_mu(summary);
    if (envs.size() < 2) {
        return {"C3c", "SPLOS down / BLOCKED up, shallowest vs deepest", "fewer than 2 environments",
                "strict change", false};
    }
    const auto& first = envs.front().at("mode_fractions");
    const auto& last = envs.back().at("mode_fractions");
    const double splos0 = first.at("SPLOS").get<double>();
    const double splos1 = last.at("SPLOS").get<double>();
    const double blocked0 = first.at("BLOCKED").get<double>();
    const double blocked1 = last.at("BLOCKED").get<double>();
    return {"C3c", "SPLOS down / BLOCKED up, shallowest vs deepest",
            "SPLOS " + fmt("%.3f", splos0) + " -> " + fmt("%.3f", splos1) + ", BLOCKED " + fmt("%.3f", blocked0) +
                " -> " + fmt("%.3f", blocked1),
            "SPLOS strictly lower and BLOCKED strictly higher", splos1 < splos0 && blocked1 > blocked0};
}

CriterionResult check_gamma_scale(const json& summary)
{
    std::vector<double> scales;
    bool ok = true;
    for (const auto& e : environments_by_mu(summary)) {
        if (e.at("pooled_delay_count").get<std::size_t>() < bounds::gamma_min_pooled) {
            continue;
        }
        if (e.at("gamma_scale").is_null()) {
            ok = false;
            continue;
        }
        const double scale = e.at("gamma_scale").get<double>();
        scales.push_back(scale);
        ok = ok && scale >= bounds::gamma_scale_lo && scale <= bounds::gamma_scale_hi;
    }
    return {"C4a", "gamma scale per environment (>= 500 delays)", "[" + join(scales, "%.3f") + "]",
            "each in [" + fmt("%.1f", bounds::gamma_scale_lo) + ", " + fmt("%.1f", bounds::gamma_scale_hi) + "]",
            ok && !scales.empty()};
}

CriterionResult check_gamma_shape_trend(const json& summary)
{
    std::vector<double> shapes;
    for (const auto& e : environments_by_mu(summary)) {
        if (e.at("pooled_delay_count").get<std::size_t>() >= bounds::gamma_min_pooled && !e.at("gamma_shape").is_null()) {
            shapes.push_back(e.at("gamma_shape").get<double>());
        }
    }
    auto r = trend("C4b", "gamma shape decreasing in mu", shapes);
    r.pass = r.pass && shapes.size() >= 2;
    return r;
}

CriterionResult check_model_refit(const json& summary, const json& model)
{
    std::vector<std::pair<double, double>> points;
    for (const auto& e : environments_by_mu(summary)) {
        if (!e.at("median_delay_m").is_null()) {
            points.emplace_back(e.at("mean_received_ns").get<double>(), e.at("median_delay_m").get<double>());
        }
    }
    const std::string bound = "rms <= " + fmt("%.2f", bounds::model_rms_max) + " m, model.json consistent";
    QuadraticModel refit;
    try {
        refit = fit_quadratic(points);
    } catch (const FitError& e) {
        return {"C5a", "quadratic model refit", e.what(), bound, false};
    }
    bool consistent = model.value("available", false);
    if (consistent) {
        const auto stored = model_from_json(model);
        const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
        consistent = close(stored.c2, refit.c2) && close(stored.c1, refit.c1) && close(stored.c0, refit.c0) &&
                     close(stored.rms_error, refit.rms_error);
    }
    char obs[160];
    std::snprintf(obs, sizeof obs, "d = %.4f N^2 + %.4f N + %.4f, rms %.4f m%s", refit.c2, refit.c1, refit.c0,
                  refit.rms_error, consistent ? "" : " (model.json mismatch)");
    return {"C5a", "quadratic model refit", obs, bound, consistent && refit.rms_error <= bounds::model_rms_max};
}

CriterionResult check_reference_model()
{
    const auto m = reference_model();
    const double at5 = estimate_median_delay(m, 5.0);
    const double at8 = estimate_median_delay(m, 8.0);
    return {"C5b", "published coefficients at N_s = 5, 8", fmt("%.10f", at5) + ", " + fmt("%.10f", at8),
            "15.57, 21.84", std::abs(at5 - bounds::reference_at_5) <= bounds::reference_tolerance &&
                                std::abs(at8 - bounds::reference_at_8) <= bounds::reference_tolerance};
}

CriterionResult check_geometry_oracles()
{
    RandomStream rng(0x6E0C0FFEEULL);
    const auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };

    int grid_ok = 0;
    for (int accepted = 0; accepted < bounds::oracle_grid_cases;) {
        const auto c = random_reflection_case(rng);
        const auto r = reflection_point(c.satellite, c.antenna, c.plane);
        if (!r) {
            continue;
        }
        ++accepted;
        const auto best = oracle::min_path_on_plane(c.satellite, c.antenna, c.plane);
        const double via_r = norm(*r - c.satellite) + norm(c.antenna - *r);
        const bool minimal = via_r <= best.path_length + 1e-9 * std::max(1.0, best.path_length);
        const bool located = norm(*r - best.point) <= 2.0 * best.resolution;
        grid_ok += minimal && located ? 1 : 0;
    }

    double worst_involution = 0.0;
    for (int i = 0; i < bounds::property_cases; ++i) {
        const auto plane = random_plane(rng, 10.0);
        const Vec3 a{uni(-100, 100), uni(-100, 100), uni(-100, 100)};
        worst_involution = std::max(worst_involution, norm(mirror_point(mirror_point(a, plane), plane) - a));
    }

    double worst_law = 0.0;
    for (int done = 0; done < bounds::property_cases;) {
        const auto c = random_reflection_case(rng);
        const auto r = reflection_point(c.satellite, c.antenna, c.plane);
        if (!r) {
            continue;
        }
        ++done;
        const double incident = angle_to(c.satellite - *r, c.plane.normal);
        const double reflected = angle_to(c.antenna - *r, c.plane.normal);
        worst_law = std::max(worst_law, std::abs(incident - reflected));
    }

    double lowest_delay = 0.0;
    for (int i = 0; i < bounds::property_cases; ++i) {
        const Vec3 s{uni(-1e3, 1e3), uni(-1e3, 1e3), uni(0, 2e7)};
        const Vec3 a{uni(-100, 100), uni(-100, 100), uni(0, 50)};
        // every fourth case puts r on the segment, the d = 0 boundary
        const Vec3 r = i % 4 == 0 ? a + (s - a) * uni(0, 1) : Vec3{uni(-200, 200), uni(-200, 200), uni(0, 100)};
        lowest_delay = std::min(lowest_delay, path_delay(s, a, r));
    }

    char obs[200];
    std::snprintf(obs, sizeof obs, "grid %d/%d, involution %.2e m, law %.2e rad, min d %.2e m", grid_ok,
                  bounds::oracle_grid_cases, worst_involution, worst_law, lowest_delay);
    return {"C6", "geometry oracle suite", obs, "all grid cases, involution <= 1e-12 m, law <= 1e-9 rad, d >= 0",
            grid_ok == bounds::oracle_grid_cases && worst_involution <= bounds::involution_tolerance &&
                worst_law <= bounds::reflection_law_tolerance && lowest_delay >= 0.0};
}

CriterionResult check_rice_sampling()
{
    constexpr double sigma = 5.0;
    std::string obs;
    bool ok = true;
    for (double nu : {0.0, 5.0, 25.0, 60.0}) {
        RandomStream rng(derive_seed(0x51CE, nu));
        double sum = 0.0;
        for (std::size_t i = 0; i < bounds::rice_draws; ++i) {
            sum += sample_rice(nu, sigma, rng);
        }
        const double mean = sum / static_cast<double>(bounds::rice_draws);
        const double rel = std::abs(mean - rice_mean(nu, sigma)) / rice_mean(nu, sigma);
        ok = ok && rel <= bounds::rice_sample_rel_tolerance;
        obs += (obs.empty() ? "" : ", ") + ("nu=" + fmt("%g", nu) + ": " + fmt("%.2e", rel));
    }
    return {"C7a", "Rice sample mean vs analytic mean (1e6 draws)", obs, "relative error <= 1%", ok};
}

CriterionResult check_rice_quadrature()
{
    constexpr double sigma = 5.0;
    double worst = 0.0;
    for (double nu : {0.0, 5.0, 25.0, 60.0}) {
        const double q = oracle::rice_mean_quadrature(nu, sigma);
        worst = std::max(worst, std::abs(rice_mean(nu, sigma) - q) / q);
    }
    return {"C7b", "Rice analytic mean vs quadrature", "worst relative error " + fmt("%.2e", worst),
            "<= 1e-6 relative", worst <= bounds::rice_quadrature_rel_tolerance};
}

CriterionResult check_zero_building(const ScenarioConfig& config)
{
    const auto run = run_environment(config, empty_canyon(config.canyon));
    std::size_t events = 0;
    std::size_t non_splos = 0;
    for (const auto& obs : run.observations) {
        events += obs.reflections.size();
        non_splos += obs.mode != ReceptionMode::splos ? 1 : 0;
    }
    return {"C9b", "zero-building scenario retains no events",
            std::to_string(events) + " events, " + std::to_string(non_splos) + " non-SPLOS of " +
                std::to_string(run.observations.size()),
            "0 events", events == 0};
}

CriterionResult check_delay_floor(const std::vector<std::filesystem::path>& event_files)
{
    double lowest = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (const auto& f : event_files) {
        for (double d : read_event_delays(f)) {
            lowest = std::min(lowest, d);
            ++count;
        }
    }
    return {"C9a", "no retained delay below 1 cm",
            std::to_string(count) + " events, min d = " + (count ? fmt("%.4f", lowest) : std::string("n/a")),
            "d >= 0.01 m", count == 0 || lowest >= bounds::delta_filter_floor};
}

VerificationReport verify_sweep(const std::filesystem::path& out_dir)
{
    namespace fs = std::filesystem;
    std::vector<std::string> missing;
    for (const char* name : {manifest_file, summary_file, model_file}) {
        if (!fs::is_regular_file(out_dir / name)) {
            missing.emplace_back(name);
        }
    }
    if (!missing.empty()) {
        std::string what = "missing sweep artifacts in " + out_dir.string() + ":";
        for (const auto& m : missing) {
            what += " " + m;
        }
        throw MissingArtifactError(what, missing);
    }

    const json manifest = read_json_file(out_dir / manifest_file);
    const json summary = read_json_file(out_dir / summary_file);
    const json model = read_json_file(out_dir / model_file);
    for (const auto* doc : {&manifest, &summary, &model}) {
        if (doc->value("schema_version", -1) != schema_version) {
            throw ParameterError("artifact schema_version mismatch (expected " + std::to_string(schema_version) + ")");
        }
    }

    std::vector<fs::path> event_files;
    for (const auto& item : manifest.at("output_paths").at("environments").items()) {
        const auto path = out_dir / item.value().at("events").get<std::string>();
        if (!fs::is_regular_file(path)) {
            missing.push_back(path.filename().string());
        }
        event_files.push_back(path);
    }
    if (!missing.empty()) {
        std::string what = "missing sweep artifacts in " + out_dir.string() + ":";
        for (const auto& m : missing) {
            what += " " + m;
        }
        throw MissingArtifactError(what, missing);
    }

    const ScenarioConfig config = scenario_from_json(manifest.at("config"));

    VerificationReport report;
    auto& c = report.criteria;
    c.push_back(check_open_sky(config));
    c.push_back(check_threshold(summary));
    c.push_back(check_reflection_trend(summary));
    c.push_back(check_received_trend(summary));
    c.push_back(check_mode_endpoints(summary));
    c.push_back(check_gamma_scale(summary));
    c.push_back(check_gamma_shape_trend(summary));
    c.push_back(check_model_refit(summary, model));
    c.push_back(check_reference_model());
    c.push_back(check_geometry_oracles());
    c.push_back(check_rice_sampling());
    c.push_back(check_rice_quadrature());

    // Determinism: re-run from the manifest and compare bytes.
    const auto rerun = build_sweep_artifacts(config);
    const auto read = [&](const char* name) {
        std::ifstream in(out_dir / name, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    const bool same_summary = rerun.files.at(summary_file) == read(summary_file);
    const bool same_model = rerun.files.at(model_file) == read(model_file);
    c.push_back({"C8", "rerun from manifest is byte-identical",
                 std::string("summary ") + (same_summary ? "identical" : "differs") + ", model " +
                     (same_model ? "identical" : "differs"),
                 "both identical", same_summary && same_model});

    c.push_back(check_delay_floor(event_files));
    c.push_back(check_zero_building(config));
    return report;
}

} // namespace urbanmp
