#include "urbanmp/rice.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "urbanmp/error.hpp"
#include "urbanmp/vec3.hpp"

namespace urbanmp {
namespace {

constexpr double series_limit = 30.0;

// e^{-z} * sum_k (z/2)^{2k+n} / (k! (k+n)!)
double scaled_series(int order, double z)
{
    const double half = 0.5 * z;
    double term = order == 0 ? 1.0 : half;
    double sum = term;
    const double q = half * half;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k + order));
        sum += term;
        if (term < sum * 1e-17) {
            break;
        }
    }
    return sum * std::exp(-z);
}

// Hankel expansion of e^{-z} I_n(z); terms are summed while they shrink.
double scaled_asymptotic(int order, double z)
{
    const double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = -term * (mu - odd * odd) / (k * 8.0 * z);
        if (std::abs(next) >= std::abs(term)) {
            break;
        }
        term = next;
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return sum / std::sqrt(2.0 * constants::pi * z);
}

double scaled_bessel(int order, double z)
{
    if (!(z >= 0.0) || !std::isfinite(z)) {
        throw ParameterError("scaled Bessel argument must be finite and >= 0, got " + std::to_string(z));
    }
    return z <= series_limit ? scaled_series(order, z) : scaled_asymptotic(order, z);
}

void check_rice_params(double nu, double sigma)
{
    if (!std::isfinite(nu) || !std::isfinite(sigma)) {
        throw ParameterError("Rice parameters must be finite");
    }
    if (!(sigma > 0.0)) {
        throw ParameterError("Rice sigma must be > 0, got " + std::to_string(sigma));
    }
    if (nu < 0.0) {
        throw ParameterError("Rice nu must be >= 0, got " + std::to_string(nu));
    }
}

} // namespace

double bessel_i0_scaled(double z) { return scaled_bessel(0, z); }
double bessel_i1_scaled(double z) { return scaled_bessel(1, z); }

double laguerre_half(double x)
{
    if (!std::isfinite(x) || x > 0.0) {
        throw ParameterError("laguerre_half is only defined here for finite x <= 0");
    }
    // e^{x/2} [(1 - x) I0(-x/2) - x I1(-x/2)] with z = -x/2 >= 0
    const double z = -0.5 * x;
    return (1.0 - x) * bessel_i0_scaled(z) - x * bessel_i1_scaled(z);
}

double rice_mean(double nu, double sigma)
{
    check_rice_params(nu, sigma);
    const double ratio = nu / sigma;
    return sigma * std::sqrt(constants::pi / 2.0) * laguerre_half(-0.5 * ratio * ratio);
}

double sample_rice(double nu, double sigma, RandomStream& rng)
{
    check_rice_params(nu, sigma);
    const double x = nu + sigma * rng.standard_normal();
    const double y = sigma * rng.standard_normal();
    const double h = std::hypot(x, y);
    // |(X, Y)| is zero with probability zero; keep the support strictly positive.
    return h > 0.0 ? h : std::numeric_limits<double>::min();
}

} // namespace urbanmp
