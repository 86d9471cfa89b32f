#pragma once

#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "arithwave/core.hpp"

namespace arithwave {

// Adaptive Gauss-Kronrod (15-point) integration; tol is a relative target.
template <typename F>
double integrate_1d(F&& f, double a, double b, double tol, int max_depth = 14) {
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, max_depth, tol);
}

// Integral of g over the disk of radius s centred at the origin, in polar
// coordinates with nested adaptive rules.
template <typename F>
double integrate_disk(F&& g, double s, double tol) {
    auto outer = [&](double phi) {
        double c = std::cos(phi), sn = std::sin(phi);
        return integrate_1d(
            [&](double rho) { return g(Vec2{rho * c, rho * sn}) * rho; },
            0.0, s, tol * 0.1);
    };
    return integrate_1d(outer, 0.0, kTwoPi, tol);
}

// Area of the intersection of two radius-s disks whose centres are d apart.
inline double lens_area(double d, double s) {
    if (d >= 2.0 * s) return 0.0;
    if (d <= 0.0) return M_PI * s * s;
    return 2.0 * s * s * std::acos(d / (2.0 * s)) - 0.5 * d * std::sqrt(4.0 * s * s - d * d);
}

} // namespace arithwave
