#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "urbanmp/io.hpp"
#include "urbanmp/simulate.hpp"

namespace urbanmp {

struct CriterionResult {
    std::string id;
    std::string name;
    std::string observed;
    std::string bound;
    bool pass = false;
};

struct VerificationReport {
    std::vector<CriterionResult> criteria;

    bool all_pass() const;
    void print(std::ostream& os) const;
};

/// Required sweep files are absent from the output directory.
class MissingArtifactError : public IoError {
public:
    MissingArtifactError(const std::string& what, std::vector<std::string> missing)
        : IoError(what), missing_(std::move(missing)) {}
    const std::vector<std::string>& missing() const { return missing_; }

private:
    std::vector<std::string> missing_;
};

/// Fixed bounds of the acceptance criteria.
namespace bounds {
inline constexpr double open_sky_expected = 7.88;
inline constexpr double open_sky_tolerance = 1.0;
inline constexpr double open_sky_mask = 15.0;
inline constexpr double threshold_received = 4.0;
inline constexpr double threshold_mu_lo = 30.0;
inline constexpr double threshold_mu_hi = 55.0;
inline constexpr int max_trend_inversions = 1;
inline constexpr std::size_t gamma_min_pooled = 500;
inline constexpr double gamma_scale_lo = 0.5;
inline constexpr double gamma_scale_hi = 2.0;
inline constexpr double model_rms_max = 1.0;
inline constexpr double reference_at_5 = 15.57;
inline constexpr double reference_at_8 = 21.84;
inline constexpr double reference_tolerance = 1e-9;
inline constexpr int oracle_grid_cases = 100;
inline constexpr int property_cases = 10000;
inline constexpr double involution_tolerance = 1e-12;
inline constexpr double reflection_law_tolerance = 1e-9;
inline constexpr std::size_t rice_draws = 1000000;
inline constexpr double rice_sample_rel_tolerance = 0.01;
inline constexpr double rice_quadrature_rel_tolerance = 1e-6;
inline constexpr double delta_filter_floor = 0.01;
} // namespace bounds

/// Number of adjacent pairs where values[i + 1] > values[i].
int count_increases(const std::vector<double>& values);

/// Linearly interpolated mu at which mean N_s first drops below the
/// threshold, or nothing if it never does. Environments are taken in
/// ascending mu order.
std::optional<double> threshold_crossing(const std::vector<double>& mu, const std::vector<double>& received,
                                         double threshold);

// Criteria that only need the summary document.
CriterionResult check_threshold(const nlohmann::json& summary);
CriterionResult check_reflection_trend(const nlohmann::json& summary);
CriterionResult check_received_trend(const nlohmann::json& summary);
CriterionResult check_mode_endpoints(const nlohmann::json& summary);
CriterionResult check_gamma_scale(const nlohmann::json& summary);
CriterionResult check_gamma_shape_trend(const nlohmann::json& summary);
CriterionResult check_model_refit(const nlohmann::json& summary, const nlohmann::json& model);

// Self-contained criteria.
CriterionResult check_open_sky(const ScenarioConfig& config);
CriterionResult check_reference_model();
CriterionResult check_geometry_oracles();
CriterionResult check_rice_sampling();
CriterionResult check_rice_quadrature();
CriterionResult check_zero_building(const ScenarioConfig& config);
CriterionResult check_delay_floor(const std::vector<std::filesystem::path>& event_files);

/// Evaluates every acceptance criterion against a completed sweep directory.
/// Throws MissingArtifactError when manifest, summary, model or an events
/// file named by the manifest is absent, ParameterError on schema mismatch.
VerificationReport verify_sweep(const std::filesystem::path& out_dir);

} // namespace urbanmp
