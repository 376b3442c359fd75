#pragma once

#include <array>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "urbanmp/simulate.hpp"

namespace urbanmp {

struct GammaFit {
    double shape = 0.0;
    double scale = 0.0;
    int iterations = 0;
};

struct EnvironmentSummary {
    double nu = 0.0;
    double mu = 0.0;
    int epoch_count = 0;
    int observation_count = 0;
    double mean_received = 0.0;          ///< N_s, SPLOS + MP + NLOS per epoch
    std::array<double, 4> mode_fractions{}; ///< indexed by ReceptionMode
    std::vector<double> pooled_delays;
    std::optional<double> median_delay;  ///< d_m; absent without delays
    std::optional<GammaFit> gamma;       ///< absent when no fit is possible
    double reflections_per_epoch = 0.0;
};

struct QuadraticModel {
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
    double rms_error = 0.0;
    std::vector<std::pair<double, double>> training_points; ///< (N_s, d_m)

    double operator()(double x) const { return (c2 * x + c1) * x + c0; }
};

/// Published coefficients d_m = -0.23 N_s^2 + 5.08 N_s - 4.08.
QuadraticModel reference_model();

double median(std::vector<double> values);

/// Epochs are counted as distinct (repetition, epoch) pairs unless
/// epoch_count is given; pass it when some epochs may have no satellites.
EnvironmentSummary summarize_environment(std::span<const EpochObservation> observations, double nu, double sigma,
                                         std::optional<int> epoch_count = std::nullopt);
EnvironmentSummary summarize_environment(const EnvironmentRun& run, double sigma);

inline constexpr std::size_t gamma_min_samples = 30;

/// Two-parameter gamma maximum-likelihood fit. Newton iteration on
/// ln(k) - digamma(k) = ln(mean) - mean(ln x), started from Minka's
/// closed-form approximation; scale = mean / k.
GammaFit fit_gamma(std::span<const double> delays);

/// Least squares on the basis (x^2, x, 1).
QuadraticModel fit_quadratic(std::span<const std::pair<double, double>> points);

/// Model prediction clamped below at 0.
double estimate_median_delay(const QuadraticModel& model, double received);

double rms_error(std::span<const double> predicted, std::span<const double> actual);

struct DelayHistogram {
    double bin_width = 0.0;
    double max_delay = 0.0;
    std::vector<double> density; ///< bin k covers [k w, (k+1) w)
    std::size_t overflow = 0;    ///< samples at or above max_delay
    std::size_t total = 0;
};

/// Densities normalised by the total sample count, so the binned area is the
/// fraction of samples below max_delay.
DelayHistogram histogram_delays(std::span<const double> delays, double bin_width, double max_delay);

} // namespace urbanmp
