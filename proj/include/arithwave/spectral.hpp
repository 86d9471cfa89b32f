#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "arithwave/core.hpp"
#include "arithwave/gaussint.hpp"

namespace arithwave {

// ---------------------------------------------------------------------------
// The spectral measure of a lattice point set: mass 1/N at every angle, with
// the quarter-rotation and reflection symmetries of the point set.
// ---------------------------------------------------------------------------

// Erdos-Hall exponent constant kappa = (1/2) log(pi/2).
inline const double kErdosHallKappa = 0.5 * std::log(1.5707963267948966);

struct SpectralMeasure {
    i128 n = 0;
    std::vector<double> atoms; // angles in [0,1), ascending
    double weight = 0.0;       // 1/N for each atom
};

inline SpectralMeasure spectral_measure(const LatticePointSet& pts) {
    if (pts.points.empty())
        throw std::invalid_argument("spectral_measure: empty lattice point set");
    SpectralMeasure m;
    m.n = pts.n;
    m.atoms = pts.angles;
    m.weight = 1.0 / double(pts.count());
    return m;
}

// mu_hat(k) = integral of e(-k theta) dmu. Both symmetries make it real, and
// the quarter-rotation symmetry kills every k not divisible by 4; those are
// returned as exact zeros after checking the numerical sum is consistent.
inline double fourier_coefficient(const SpectralMeasure& m, int k) {
    long double c = 0.0L, s = 0.0L;
    for (double t : m.atoms) {
        long double a = (long double)kTwoPi * k * t;
        c += cosl(a);
        s += sinl(a);
    }
    c *= (long double)m.weight;
    s *= (long double)m.weight;
    if (std::fabs(double(s)) >= 1e-12)
        throw std::logic_error("fourier_coefficient: sine part did not vanish");
    if (k % 4 != 0) {
        if (std::fabs(double(c)) >= 1e-12)
            throw std::logic_error("fourier_coefficient: expected zero for k != 0 mod 4");
        return 0.0;
    }
    return double(c);
}

// ---------------------------------------------------------------------------
// Discrepancy sup_{0<a<b<1} |mu(a,b) - (b-a)| for the open-interval variant,
// evaluated exactly by scanning one-sided limits at every atom. The circular
// variant (arcs wrapping through 0) is exposed separately.
// ---------------------------------------------------------------------------

inline double discrepancy(const SpectralMeasure& m) {
    const auto& t = m.atoms;
    const std::size_t N = t.size();
    const double w = m.weight;
    double best = 0.0;

    // Excess: shrink an arc onto a run of atoms i..j. Arcs live in (0,1), so a
    // run may not start at an atom sitting exactly at 0.
    std::size_t first = 0;
    while (first < N && t[first] == 0.0) ++first;
    for (std::size_t i = first; i < N; ++i)
        for (std::size_t j = i; j < N; ++j)
            best = std::max(best, double(j - i + 1) * w - (t[j] - t[i]));

    // Deficit: widen an arc between consecutive atoms (open at both ends);
    // boundary arcs reach toward 0 and 1.
    for (std::size_t i = 0; i + 1 <= N; ++i)
        for (std::size_t j = i + 1; j < N; ++j)
            best = std::max(best, (t[j] - t[i]) - double(j - i - 1) * w);
    for (std::size_t j = 0; j < N; ++j) {
        double inside = double(j - first) * w;     // atoms strictly inside (0, t[j])
        if (j >= first) best = std::max(best, t[j] - inside);
        double inside_hi = double(N - 1 - j) * w;  // atoms strictly inside (t[j], 1)
        best = std::max(best, (1.0 - t[j]) - inside_hi);
    }
    best = std::max(best, 1.0 - double(N - first) * w); // the full arc (0,1)
    return best;
}

// sup over circular arcs; atoms wrap modulo 1
inline double circular_discrepancy(const SpectralMeasure& m) {
    const auto& t = m.atoms;
    const std::size_t N = t.size();
    const double w = m.weight;
    double best = w; // a point arc shrunk onto a single atom
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            if (i == j) continue;
            double len = t[j] - t[i];
            if (len < 0) len += 1.0;
            std::size_t steps = (j + N - i) % N; // atoms after t[i] up to t[j]
            // closed arc [t_i, t_j]: steps + 1 atoms
            best = std::max(best, double(steps + 1) * w - len);
            // open arc (t_i, t_j): steps - 1 atoms strictly inside
            best = std::max(best, len - double(steps - 1) * w);
        }
    return best;
}

// ---------------------------------------------------------------------------
// Covariance function r(x) = (1/N) sum cos(2 pi <xi, x>) with analytic first
// and second derivatives.
// ---------------------------------------------------------------------------

struct CovarianceJet {
    double value = 0.0;
    Vec2 gradient;
    Sym2 hessian;
};

inline CovarianceJet covariance_jet(const LatticePointSet& pts, Vec2 x) {
    if (pts.points.empty())
        throw std::invalid_argument("covariance_jet: empty lattice point set");
    double v = 0.0, gx = 0.0, gy = 0.0, hxx = 0.0, hxy = 0.0, hyy = 0.0;
    for (auto p : pts.points) {
        double px = double(p.x), py = double(p.y);
        double phase = kTwoPi * (px * x.x + py * x.y);
        double c = std::cos(phase), s = std::sin(phase);
        v += c;
        gx += px * s;
        gy += py * s;
        hxx += px * px * c;
        hxy += px * py * c;
        hyy += py * py * c;
    }
    double inv = 1.0 / double(pts.count());
    CovarianceJet jet;
    jet.value = v * inv;
    jet.gradient = {-kTwoPi * inv * gx, -kTwoPi * inv * gy};
    double f = -kTwoPi * kTwoPi * inv;
    jet.hessian = {f * hxx, f * hxy, f * hyy};
    return jet;
}

// ---------------------------------------------------------------------------
// De-symmetrized Fourier coefficient for n = p^m * q (Gaussian prime angles
// phi in radians; theta = 4 phi under d nu(theta) = d mu(theta/4)):
//
//   [sin((m+1) theta_p) / ((m+1) sin theta_p)] * [sin(2 theta_q) / (2 sin theta_q)]
//
// The removable singularities at theta -> 0 take the value 1.
// ---------------------------------------------------------------------------

inline double desym_lobe_factor(int k, double theta) {
    if (theta == 0.0) return 1.0;
    return std::sin(double(k) * theta) / (double(k) * std::sin(theta));
}

inline double desym_fourier(int m, double phi_p, std::optional<double> phi_q = std::nullopt) {
    if (m < 0) throw std::invalid_argument("desym_fourier: m must be >= 0");
    double value = desym_lobe_factor(m + 1, 4.0 * phi_p);
    if (phi_q) value *= desym_lobe_factor(2, 4.0 * *phi_q);
    return value;
}

} // namespace arithwave
