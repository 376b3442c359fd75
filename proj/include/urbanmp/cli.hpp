#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "urbanmp/simulate.hpp"
#include "urbanmp/verify.hpp"

namespace urbanmp::cli {

/// Process exit statuses.
enum ExitCode : int {
    ok = 0,
    unexpected = 1,
    config_error = 2,
    io_error = 3,
    verification_failed = 4,
};

/// Environment variable that overrides the seed when --seed is absent.
inline constexpr const char* seed_env_var = "URBANMP_SEED";

struct GenerateSummary {
    std::size_t building_count = 0;
    double mean_height = 0.0;
    double analytic_mean = 0.0;
};

/// Writes the geometry JSON for one nu and returns the height summary.
GenerateSummary cmd_generate(const ScenarioConfig& config, double nu, std::uint64_t seed,
                             const std::filesystem::path& out_path, std::ostream& log);

/// Runs the sweep and writes every artifact into out_dir (created if needed).
void cmd_sweep(const ScenarioConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

VerificationReport cmd_verify(const std::filesystem::path& out_dir, std::ostream& log);

/// Full command-line entry point; returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace urbanmp::cli
