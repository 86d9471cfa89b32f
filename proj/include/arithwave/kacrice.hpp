#pragma once

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "arithwave/core.hpp"
#include "arithwave/correlations.hpp"
#include "arithwave/gaussint.hpp"
#include "arithwave/quadrature.hpp"
#include "arithwave/spectral.hpp"

namespace arithwave {

// ---------------------------------------------------------------------------
// Two-point Kac-Rice machinery for the nodal-length variance: with r the
// covariance function and H its Hessian,
//
//   X = -2/(n (1-r^2)) (grad r)^t (grad r)
//   Y = -2/n (H + r/(1-r^2) (grad r)^t (grad r))
//
//   8 L2 = r^2 + tr X + tr(Y^2)/4 + (3/4) r^4 - tr(X Y^2)/8 - tr(X^2)/16
//        + tr(Y^4)/128 + tr(Y^2)^2/256 - tr(X) tr(Y^2)/16 + r^2 tr(X)/2
//        + r^2 tr(Y^2)/8
//
// and the remainder is reported as eps_bound = |r|^6 + |tr(X^3)| + tr(Y^6).
// ---------------------------------------------------------------------------

struct KacRiceJet {
    double r = 0.0;
    Sym2 X, Y;
    double L2 = 0.0;
    double eps_bound = 0.0;
};

inline double as_double(i128 v) { return double(v); }

inline KacRiceJet kac_rice_jet(const LatticePointSet& pts, Vec2 x) {
    auto jet = covariance_jet(pts, x);
    double r = jet.value;
    if (r * r >= 1.0 - 1e-9)
        throw std::domain_error("kac_rice_jet: r^2 within 1e-9 of 1 at x = (" +
                                to_string_roundtrip(x.x) + ", " + to_string_roundtrip(x.y) + ")");
    double n = as_double(pts.n);
    double denom = 1.0 - r * r;

    Sym2 G{jet.gradient.x * jet.gradient.x, jet.gradient.x * jet.gradient.y,
           jet.gradient.y * jet.gradient.y};

    KacRiceJet out;
    out.r = r;
    out.X = G * (-2.0 / (n * denom));
    out.Y = (jet.hessian + G * (r / denom)) * (-2.0 / n);

    Sym2 Y2 = square(out.Y);
    Sym2 Y4 = square(Y2);
    double trX = out.X.trace();
    double trX2 = trace_prod(out.X, out.X);
    double trY2 = Y2.trace();
    double trY4 = Y4.trace();
    double trXY2 = trace_prod(out.X, Y2);
    double r2 = r * r;

    out.L2 = (r2 + trX + trY2 / 4.0 + 0.75 * r2 * r2 - trXY2 / 8.0 - trX2 / 16.0 +
              trY4 / 128.0 + trY2 * trY2 / 256.0 - trX * trY2 / 16.0 + r2 * trX / 2.0 +
              r2 * trY2 / 8.0) / 8.0;

    double trX3 = trace_prod(out.X, square(out.X));
    double trY6 = trace_prod(Y2, Y4);
    out.eps_bound = std::pow(std::fabs(r), 6.0) + std::fabs(trX3) + trY6;
    return out;
}

// ---------------------------------------------------------------------------
// Restricted moments of the covariance (the l-th moment over the ball):
//
//   int_{B(s)} r(x)^l dx = pi s^2 S(l,n)/N^l
//                        + (2 pi s^2 / N^l) sum_{|v|>0} J1(2 pi s |v|)/(2 pi s |v|)
//
// summed over ordered l-tuple sums v with multiplicity, against an adaptive
// quadrature of the same integral as an independent check.
// ---------------------------------------------------------------------------

struct MomentIntegral {
    double closed_form = 0.0;
    double quadrature = 0.0;
    double bessel_tail = 0.0;  // the second term of the closed form
};

inline double covariance_value(const LatticePointSet& pts, Vec2 x) {
    double v = 0.0;
    for (auto p : pts.points)
        v += std::cos(kTwoPi * (double(p.x) * x.x + double(p.y) * x.y));
    return v / double(pts.count());
}

inline MomentIntegral moment_integral(const LatticePointSet& pts, int l, double s,
                                      const CorrelationOptions& opt = {}) {
    if (l != 2 && l != 4 && l != 6)
        throw std::invalid_argument("moment_integral: l must be 2, 4 or 6");
    if (!(s > 0.0)) throw std::invalid_argument("moment_integral: s must be positive");
    detail::check_correlation_pre(pts, l, opt);

    int la = (l + 1) / 2, lb = l / 2;
    auto A = mitm::build_sum_table(pts.points, la, false);
    mitm::SumTable Bstore;
    if (la != lb) Bstore = mitm::build_sum_table(pts.points, lb, false);
    const mitm::SumTable& B = (la != lb) ? Bstore : A;

    // multiplicity of each distinct |v|^2 over full-tuple sums
    std::unordered_map<u64, u64> by_norm;
    u64 zero_count = 0;
    for (std::size_t i = 0; i < B.size(); ++i)
        for (std::size_t j = 0; j < A.size(); ++j) {
            i64 sx = A.xs[j] + B.xs[i], sy = A.ys[j] + B.ys[i];
            u64 norm = u64(sx * sx + sy * sy);
            u64 mult = A.counts[j] * B.counts[i];
            if (norm == 0) zero_count += mult;
            else by_norm[norm] += mult;
        }

    double N = double(pts.count());
    double Nl = std::pow(N, double(l));
    double area = M_PI * s * s;

    MomentIntegral out;
    std::vector<std::pair<u64, u64>> norms(by_norm.begin(), by_norm.end());
    std::sort(norms.begin(), norms.end());
    double tail = 0.0;
    for (auto [norm2, mult] : norms) {
        double arg = kTwoPi * s * std::sqrt(double(norm2));
        tail += double(mult) * std::cyl_bessel_j(1, arg) / arg;
    }
    out.bessel_tail = 2.0 * area / Nl * tail;
    out.closed_form = area * double(zero_count) / Nl + out.bessel_tail;
    out.quadrature = integrate_disk(
        [&](Vec2 x) { return std::pow(covariance_value(pts, x), double(l)); }, s, 1e-9);
    return out;
}

} // namespace arithwave
