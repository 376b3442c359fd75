#pragma once

#include "urbanmp/geometry.hpp"
#include "urbanmp/vec3.hpp"

// Brute-force references kept apart from the production code paths they
// check. Nothing in the simulator calls into this header.
namespace urbanmp::oracle {

struct GridMinimum {
    Vec3 point;
    double path_length = 0.0;
    double resolution = 0.0; ///< spacing of the final grid [m]
};

/// Point of the bounded plane minimising |x - s| + |a - x| over a regular
/// n x n grid of its extent, refined once with another n x n grid spanning
/// the best coarse cell and its neighbours.
GridMinimum min_path_on_plane(const Vec3& satellite, const Vec3& antenna, const BoundedPlane& plane, int n = 200);

/// Mean of Rice(nu, sigma) by adaptive Simpson quadrature of x * pdf(x),
/// with I0 taken from std::cyl_bessel_i.
double rice_mean_quadrature(double nu, double sigma);

} // namespace urbanmp::oracle
