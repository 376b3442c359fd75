#pragma once

#include "urbanmp/rng.hpp"

namespace urbanmp {

/// Exponentially scaled modified Bessel functions, e^{-z} I_n(z) for z >= 0.
/// Power series below z = 30, Hankel asymptotic expansion above.
double bessel_i0_scaled(double z);
double bessel_i1_scaled(double z);

/// Laguerre function of degree 1/2 for x <= 0, the argument range the Rice
/// mean needs. Evaluated through the scaled Bessel functions so it never
/// overflows.
double laguerre_half(double x);

/// Analytic Rice mean sigma * sqrt(pi/2) * L_{1/2}(-nu^2 / (2 sigma^2)).
double rice_mean(double nu, double sigma);

/// One Rice(nu, sigma) draw as |(X, Y)| with X ~ N(nu, sigma^2),
/// Y ~ N(0, sigma^2). Consumes exactly two normals from the stream.
double sample_rice(double nu, double sigma, RandomStream& rng);

} // namespace urbanmp
