#include "urbanmp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace urbanmp::oracle {
namespace {

GridMinimum scan(const Vec3& s, const Vec3& a, const BoundedPlane& plane, double u0, double u1, double v0, double v1,
                 int n)
{
    GridMinimum best;
    best.path_length = std::numeric_limits<double>::infinity();
    const double du = (u1 - u0) / (n - 1);
    const double dv = (v1 - v0) / (n - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Vec3 x = plane.point + plane.axis_u * (u0 + i * du) + plane.axis_v * (v0 + j * dv);
            const double len = norm(x - s) + norm(a - x);
            if (len < best.path_length) {
                best.path_length = len;
                best.point = x;
            }
        }
    }
    best.resolution = std::max(du, dv);
    return best;
}

// e^{-z} I0(z)
double scaled_i0(double z)
{
    if (z < 600.0) {
        return std::cyl_bessel_i(0.0, z) * std::exp(-z);
    }
    return (1.0 + 1.0 / (8.0 * z) + 9.0 / (128.0 * z * z)) / std::sqrt(2.0 * 3.14159265358979323846 * z);
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
               double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

GridMinimum min_path_on_plane(const Vec3& satellite, const Vec3& antenna, const BoundedPlane& plane, int n)
{
    const GridMinimum coarse = scan(satellite, antenna, plane, plane.u_min, plane.u_max, plane.v_min, plane.v_max, n);
    const Vec3 rel = coarse.point - plane.point;
    const double u = dot(rel, plane.axis_u);
    const double v = dot(rel, plane.axis_v);
    const double du = (plane.u_max - plane.u_min) / (n - 1);
    const double dv = (plane.v_max - plane.v_min) / (n - 1);
    return scan(satellite, antenna, plane, std::max(plane.u_min, u - du), std::min(plane.u_max, u + du),
                std::max(plane.v_min, v - dv), std::min(plane.v_max, v + dv), n);
}

double rice_mean_quadrature(double nu, double sigma)
{
    const double s2 = sigma * sigma;
    const auto integrand = [&](double x) {
        if (x <= 0.0) {
            return 0.0;
        }
        const double z = x * nu / s2;
        return x * x / s2 * std::exp(-(x - nu) * (x - nu) / (2.0 * s2)) * scaled_i0(z);
    };
    const double lo = std::max(0.0, nu - 14.0 * sigma);
    const double hi = nu + 14.0 * sigma;
    // Split into panels so the adaptive rule cannot miss the peak.
    const int panels = 64;
    const double width = (hi - lo) / panels;
    double total = 0.0;
    for (int k = 0; k < panels; ++k) {
        const double a = lo + k * width;
        const double b = a + width;
        const double fa = integrand(a);
        const double fb = integrand(b);
        const double fm = integrand(0.5 * (a + b));
        const double whole = width / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson(integrand, a, b, fa, fm, fb, whole, 1e-14 * std::max(1.0, nu + sigma), 40);
    }
    return total;
}

} // namespace urbanmp::oracle
