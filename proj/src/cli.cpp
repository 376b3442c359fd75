#include "urbanmp/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "urbanmp/artifacts.hpp"
#include "urbanmp/error.hpp"
#include "urbanmp/io.hpp"
#include "urbanmp/rice.hpp"

namespace urbanmp::cli {

namespace fs = std::filesystem;

GenerateSummary cmd_generate(const ScenarioConfig& config, double nu, std::uint64_t seed, const fs::path& out_path,
                             std::ostream& log)
{
    CanyonParams params = config.canyon;
    params.rice_nu = nu;
    params.seed = seed;
    const auto geometry = generate_canyon(params);
    write_text_file(out_path, dump_json(geometry_to_json(geometry)));

    GenerateSummary s;
    s.building_count = geometry.buildings.size();
    for (const auto& b : geometry.buildings) {
        s.mean_height += b.height;
    }
    s.mean_height /= static_cast<double>(std::max<std::size_t>(1, s.building_count));
    s.analytic_mean = rice_mean(params.rice_nu, params.rice_sigma);
    log << "wrote " << out_path.string() << ": " << s.building_count << " buildings, mean height " << std::fixed
        << std::setprecision(3) << s.mean_height << " m (Rice mean " << s.analytic_mean << " m)\n";
    log.unsetf(std::ios::floatfield);
    return s;
}

void cmd_sweep(const ScenarioConfig& config, const fs::path& out_dir, std::ostream& log)
{
    config.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
    }
    const auto artifacts = build_sweep_artifacts(config);
    std::vector<std::string> failed;
    for (const auto& [name, text] : artifacts.files) {
        try {
            write_text_file(out_dir / name, text);
        } catch (const IoError& e) {
            failed.push_back(e.what());
        }
    }
    if (!failed.empty()) {
        std::string what = "failed to write:";
        for (const auto& f : failed) {
            what += "\n  " + f;
        }
        throw IoError(what);
    }
    log << "sweep of " << artifacts.seeds.size() << " environment(s) written to " << out_dir.string() << '\n';
}

VerificationReport cmd_verify(const fs::path& out_dir, std::ostream& log)
{
    auto report = verify_sweep(out_dir);
    report.print(log);
    return report;
}

namespace {

std::optional<std::uint64_t> env_seed()
{
    const char* value = std::getenv(seed_env_var);
    if (value == nullptr || *value == '\0') {
        return std::nullopt;
    }
    try {
        std::size_t used = 0;
        const auto seed = std::stoull(value, &used);
        if (used != std::string(value).size()) {
            throw ParameterError("");
        }
        return seed;
    } catch (const std::exception&) {
        throw ParameterError(std::string(seed_env_var) + " is not an unsigned integer: " + value);
    }
}

std::vector<double> parse_nu_list(const std::string& text)
{
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw ParameterError("");
            }
        } catch (const std::exception&) {
            throw ParameterError("--nu expects a comma-separated list of numbers, got '" + text + "'");
        }
    }
    if (values.empty()) {
        throw ParameterError("--nu list is empty");
    }
    return values;
}

constexpr const char* exit_help = "Exit status: 0 success, 2 config/parameter error, 3 I/O error or missing "
                                  "artifacts, 4 verification failed, 1 unexpected error.";

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Urban canyon GNSS multipath simulator", "urbanmp"};
    app.footer(exit_help);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::string nu_text;
    bool quiet = false;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "scenario config JSON (defaults for missing keys)");
        sub->add_option("--seed", seed, std::string("seed; overrides ") + seed_env_var + " and the config");
        sub->add_flag("--quiet", quiet, "suppress progress output");
    };

    auto* generate = app.add_subcommand("generate", "write one generated city as JSON");
    add_common(generate);
    generate->add_option("--out", out_path, "output geometry JSON")->required();
    generate->add_option("--nu", nu_text, "Rice nu_h of the building heights [m]");

    auto* sweep = app.add_subcommand("sweep", "run the environment sweep and write all artifacts");
    add_common(sweep);
    sweep->add_option("--out", out_path, "output directory")->required();
    sweep->add_option("--nu", nu_text, "comma-separated nu_h list overriding the config sweep");

    auto* verify = app.add_subcommand("verify", "check a completed sweep against the acceptance criteria");
    verify->add_option("--out", out_path, "sweep output directory")->required();
    verify->add_flag("--quiet", quiet, "print only the verdict");

    auto* satellites = app.add_subcommand("satellites", "export satellite states over the repetition schedule");
    add_common(satellites);
    satellites->add_option("--out", out_path, "output CSV")->required();

    auto* census = app.add_subcommand("census", "mean open-sky satellite count above the elevation mask");
    add_common(census);

    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) {
        args.emplace_back(argv[i]);
    }
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << exit_help << '\n';
        return config_error;
    }

    std::ostringstream sink;
    std::ostream& log = quiet ? static_cast<std::ostream&>(sink) : out;
    try {
        if (*verify) {
            const auto report = verify_sweep(out_path);
            if (quiet) {
                out << (report.all_pass() ? "PASS" : "FAIL") << '\n';
            } else {
                report.print(out);
            }
            return report.all_pass() ? ok : verification_failed;
        }

        ScenarioConfig config = config_path.empty() ? ScenarioConfig{} : load_scenario(config_path);
        const auto effective_seed = seed ? seed : env_seed();

        if (*generate) {
            const double nu = nu_text.empty() ? config.canyon.rice_nu : parse_nu_list(nu_text).at(0);
            cmd_generate(config, nu, effective_seed.value_or(config.canyon.seed), out_path, log);
        } else if (*sweep) {
            if (effective_seed) {
                config.master_seed = *effective_seed;
            }
            if (!nu_text.empty()) {
                config.nu_sweep = parse_nu_list(nu_text);
            }
            cmd_sweep(config, out_path, log);
        } else if (*satellites) {
            config.validate();
            std::ofstream csv(out_path, std::ios::binary | std::ios::trunc);
            if (!csv) {
                throw IoError("cannot write " + out_path);
            }
            csv << "epoch_s,sat_id,east_m,north_m,up_m,elevation_deg,azimuth_deg\n";
            for (double start : config.repetition_starts()) {
                for (int i = 0; i < config.samples_per_repetition(); ++i) {
                    const double t = start + i * config.sample_period;
                    write_satellites_csv(csv, t, satellite_states(config.constellation, t, Vec3{}));
                }
            }
            if (!csv.flush()) {
                throw IoError("write failed for " + out_path);
            }
            log << "wrote " << out_path << '\n';
        } else if (*census) {
            const double mask = config.constellation.elevation_mask;
            out << "mean satellites above " << mask << " deg: " << std::fixed << std::setprecision(4)
                << open_sky_census(config, mask) << '\n';
        }
        return ok;
    } catch (const ParameterError& e) {
        err << "parameter error: " << e.what() << '\n';
        return config_error;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return unexpected;
    }
}

} // namespace urbanmp::cli
