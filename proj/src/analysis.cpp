#include "urbanmp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "urbanmp/error.hpp"
#include "urbanmp/rice.hpp"

namespace urbanmp {

QuadraticModel reference_model()
{
    QuadraticModel m;
    m.c2 = -0.23;
    m.c1 = 5.08;
    m.c0 = -4.08;
    return m;
}

double median(std::vector<double> values)
{
    if (values.empty()) {
        throw ParameterError("median of an empty list");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

EnvironmentSummary summarize_environment(std::span<const EpochObservation> observations, double nu, double sigma,
                                         std::optional<int> epoch_count)
{
    if (observations.empty()) {
        throw ParameterError("summarize_environment: no observations");
    }
    EnvironmentSummary s;
    s.nu = nu;
    s.mu = rice_mean(nu, sigma);
    s.observation_count = static_cast<int>(observations.size());

    std::array<std::size_t, 4> counts{};
    std::set<std::pair<int, double>> epochs;
    for (const auto& obs : observations) {
        ++counts[static_cast<std::size_t>(obs.mode)];
        epochs.emplace(obs.repetition, obs.epoch);
        for (const auto& e : obs.reflections) {
            s.pooled_delays.push_back(e.delay);
        }
    }
    s.epoch_count = epoch_count.value_or(static_cast<int>(epochs.size()));
    if (s.epoch_count <= 0) {
        throw ParameterError("summarize_environment: epoch count must be positive");
    }
    for (std::size_t m = 0; m < 4; ++m) {
        s.mode_fractions[m] = static_cast<double>(counts[m]) / static_cast<double>(observations.size());
    }
    const std::size_t received = counts[0] + counts[1] + counts[2];
    s.mean_received = static_cast<double>(received) / s.epoch_count;
    s.reflections_per_epoch = static_cast<double>(s.pooled_delays.size()) / s.epoch_count;

    if (!s.pooled_delays.empty()) {
        s.median_delay = median(s.pooled_delays);
        try {
            s.gamma = fit_gamma(s.pooled_delays);
        } catch (const FitError&) {
            s.gamma.reset();
        }
    }
    return s;
}

EnvironmentSummary summarize_environment(const EnvironmentRun& run, double sigma)
{
    return summarize_environment(run.observations, run.nu, sigma, run.epoch_count);
}

GammaFit fit_gamma(std::span<const double> delays)
{
    if (delays.size() < gamma_min_samples) {
        throw FitError(FitError::Kind::insufficient_data,
                       "gamma fit needs at least 30 samples, got " + std::to_string(delays.size()));
    }
    double sum = 0.0;
    double sum_log = 0.0;
    for (double d : delays) {
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw FitError(FitError::Kind::insufficient_data, "gamma fit needs finite samples > 0");
        }
        sum += d;
        sum_log += std::log(d);
    }
    const double n = static_cast<double>(delays.size());
    const double mean = sum / n;
    const double target = std::log(mean) - sum_log / n;
    const auto [lo, hi] = std::minmax_element(delays.begin(), delays.end());
    if (*lo == *hi || !(target > 0.0)) {
        throw FitError(FitError::Kind::degenerate_distribution, "gamma fit: all samples identical");
    }

    double shape = (3.0 - target + std::sqrt((target - 3.0) * (target - 3.0) + 24.0 * target)) / (12.0 * target);
    int it = 0;
    for (; it < 100; ++it) {
        const double f = std::log(shape) - boost::math::digamma(shape) - target;
        const double df = 1.0 / shape - boost::math::trigamma(shape);
        double next = shape - f / df;
        if (!(next > 0.0)) {
            next = 0.5 * shape;
        }
        const double step = std::abs(next - shape);
        shape = next;
        if (step <= 1e-10 * shape) {
            ++it;
            break;
        }
    }
    return {shape, mean / shape, it};
}

namespace {

// Gaussian elimination with full pivoting on a 3x3 system.
std::array<double, 3> solve3(std::array<std::array<double, 3>, 3> a, std::array<double, 3> b)
{
    std::array<int, 3> col{0, 1, 2};
    double scale = 0.0;
    for (const auto& row : a) {
        for (double v : row) {
            scale = std::max(scale, std::abs(v));
        }
    }
    for (int k = 0; k < 3; ++k) {
        int pr = k;
        int pc = k;
        for (int i = k; i < 3; ++i) {
            for (int j = k; j < 3; ++j) {
                if (std::abs(a[i][j]) > std::abs(a[pr][pc])) {
                    pr = i;
                    pc = j;
                }
            }
        }
        if (!(std::abs(a[pr][pc]) > 1e-13 * scale)) {
            throw FitError(FitError::Kind::singular, "quadratic fit: singular normal equations");
        }
        std::swap(a[k], a[pr]);
        std::swap(b[k], b[pr]);
        for (auto& row : a) {
            std::swap(row[k], row[pc]);
        }
        std::swap(col[k], col[pc]);
        for (int i = k + 1; i < 3; ++i) {
            const double f = a[i][k] / a[k][k];
            for (int j = k; j < 3; ++j) {
                a[i][j] -= f * a[k][j];
            }
            b[i] -= f * b[k];
        }
    }
    std::array<double, 3> y{};
    for (int i = 2; i >= 0; --i) {
        double acc = b[i];
        for (int j = i + 1; j < 3; ++j) {
            acc -= a[i][j] * y[j];
        }
        y[i] = acc / a[i][i];
    }
    std::array<double, 3> x{};
    for (int i = 0; i < 3; ++i) {
        x[col[i]] = y[i];
    }
    return x;
}

} // namespace

QuadraticModel fit_quadratic(std::span<const std::pair<double, double>> points)
{
    std::set<double> distinct;
    for (const auto& [x, y] : points) {
        if (!std::isfinite(x) || !std::isfinite(y)) {
            throw ParameterError("fit_quadratic: non-finite point");
        }
        distinct.insert(x);
    }
    if (points.size() < 3 || distinct.size() < 3) {
        throw FitError(FitError::Kind::singular, "quadratic fit needs at least 3 distinct abscissae");
    }
    // Normal equations on columns (x^2, x, 1).
    std::array<std::array<double, 3>, 3> ata{};
    std::array<double, 3> atb{};
    for (const auto& [x, y] : points) {
        const double basis[3] = {x * x, x, 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                ata[i][j] += basis[i] * basis[j];
            }
            atb[i] += basis[i] * y;
        }
    }
    const auto c = solve3(ata, atb);

    QuadraticModel m;
    m.c2 = c[0];
    m.c1 = c[1];
    m.c0 = c[2];
    m.training_points.assign(points.begin(), points.end());
    std::vector<double> predicted;
    std::vector<double> actual;
    for (const auto& [x, y] : points) {
        predicted.push_back(m(x));
        actual.push_back(y);
    }
    m.rms_error = rms_error(predicted, actual);
    return m;
}

double estimate_median_delay(const QuadraticModel& model, double received)
{
    if (!(received >= 0.0)) {
        throw ParameterError("estimate_median_delay: received satellite count must be >= 0");
    }
    return std::max(0.0, model(received));
}

double rms_error(std::span<const double> predicted, std::span<const double> actual)
{
    if (predicted.empty() || predicted.size() != actual.size()) {
        throw ParameterError("rms_error: lists must be non-empty and of equal length");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double e = predicted[i] - actual[i];
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(predicted.size()));
}

DelayHistogram histogram_delays(std::span<const double> delays, double bin_width, double max_delay)
{
    if (!(bin_width > 0.0) || !std::isfinite(bin_width) || !(max_delay > 0.0) || !std::isfinite(max_delay)) {
        throw ParameterError("histogram_delays: bin width and max delay must be > 0");
    }
    DelayHistogram h;
    h.bin_width = bin_width;
    h.max_delay = max_delay;
    h.density.assign(static_cast<std::size_t>(std::ceil(max_delay / bin_width - 1e-12)), 0.0);
    h.total = delays.size();
    std::vector<std::size_t> counts(h.density.size(), 0);
    for (double d : delays) {
        if (d >= max_delay) {
            ++h.overflow;
            continue;
        }
        const auto k = static_cast<std::size_t>(std::max(0.0, std::floor(d / bin_width)));
        ++counts[std::min(k, counts.size() - 1)];
    }
    if (h.total > 0) {
        for (std::size_t k = 0; k < counts.size(); ++k) {
            h.density[k] = static_cast<double>(counts[k]) / (static_cast<double>(h.total) * bin_width);
        }
    }
    return h;
}

} // namespace urbanmp
