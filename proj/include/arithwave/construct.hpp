#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "arithwave/core.hpp"
#include "arithwave/gaussint.hpp"
#include "arithwave/spectral.hpp"

namespace arithwave {

// ---------------------------------------------------------------------------
// Split primes with canonical Gaussian-prime angles. The canonical
// representative (a, b) with a > b > 0 puts every angle in (0, pi/4); angles
// outside that chart are reached through conjugation and unit rotations.
// ---------------------------------------------------------------------------

struct SectorQuery {
    double lo = 0.0;       // radians, 0 <= lo < hi <= pi/4
    double hi = 0.0;
    u64 p_min = 2;
    u64 p_max = 0;
};

struct SectorPrime {
    u64 p = 0;
    GaussianInt prime;
    double angle = 0.0;    // atan2(im, re) in (0, pi/4)
};

// all primes p = 1 (mod 4) in [p_min, p_max], ascending, with angles
inline std::vector<SectorPrime> split_prime_table(u64 p_min, u64 p_max) {
    if (p_max < p_min) throw std::invalid_argument("split_prime_table: empty range");
    if (p_max > 50000000ULL) throw ResourceError("split_prime_table: sieve budget is 5e7");
    std::vector<bool> composite(p_max + 1, false);
    std::vector<SectorPrime> out;
    for (u64 p = 2; p <= p_max; ++p) {
        if (composite[p]) continue;
        if (p * p <= p_max)
            for (u64 m = p * p; m <= p_max; m += p) composite[m] = true;
        if (p >= p_min && p % 4 == 1) {
            GaussianInt z = split_prime(p);
            out.push_back({p, z, std::atan2(double(z.im), double(z.re))});
        }
    }
    return out;
}

inline std::vector<SectorPrime> primes_in_sector(const SectorQuery& q) {
    if (!(q.lo >= 0.0 && q.lo < q.hi && q.hi <= M_PI / 4 + 1e-15))
        throw std::invalid_argument("primes_in_sector: need 0 <= lo < hi <= pi/4");
    std::vector<SectorPrime> out;
    for (const auto& sp : split_prime_table(q.p_min, q.p_max))
        if (sp.angle >= q.lo && sp.angle <= q.hi) out.push_back(sp);
    return out;
}

// ---------------------------------------------------------------------------
// ConstructionResult: an explicitly built n with its factorization, the
// quantity achieved (mu_hat_n(4), or |xi1+xi2+xi3|/sqrt(n) for the three-prime
// construction) and the target it was aimed at.
// ---------------------------------------------------------------------------

struct ConstructionResult {
    SplitFactorization factorization;
    double achieved = 0.0;
    double target = 0.0;
    std::vector<LatticePoint> witnesses;

    i128 n() const { return factorization.n; }
};

// Solves sin((m+1)t)/((m+1) sin t) = w on the first lobe (0, pi/(m+1)) by
// bisection; the factor is monotone decreasing from 1 to 0 there.
inline double solve_lobe_angle(int m, double w) {
    if (m < 0) throw std::invalid_argument("solve_lobe_angle: m must be >= 0");
    if (!(w >= 0.0 && w <= 1.0))
        throw std::invalid_argument("solve_lobe_angle: w must lie in [0, 1]");
    double lo = 0.0, hi = M_PI / double(m + 1);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        if (desym_lobe_factor(m + 1, mid) > w) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// n = p^m * q with mu_hat_n(4) within tol of w: the p factor lands near the
// lobe solution, the q factor is pushed above 1 - tol/2 by a small-angle q.
inline ConstructionResult build_pmq(double w, double tol, int m, u64 p_max) {
    if (!(tol > 0.0)) throw std::invalid_argument("build_pmq: tol must be positive");
    if (m < 1) throw std::invalid_argument("build_pmq: m must be >= 1");
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("build_pmq: w must lie in [0, 1]");

    double theta_star = solve_lobe_angle(m, w);
    (void)theta_star; // the direct factor test below is the sharp version

    auto table = split_prime_table(5, p_max);
    // q: first prime whose factor exceeds 1 - tol/2
    std::optional<SectorPrime> q;
    for (const auto& sp : table) {
        if (desym_lobe_factor(2, 4.0 * sp.angle) >= 1.0 - tol / 2) { q = sp; break; }
    }
    double best = 2.0;
    if (q) {
        double fq = desym_lobe_factor(2, 4.0 * q->angle);
        for (const auto& sp : table) {
            if (sp.p == q->p) continue;
            double fp = desym_lobe_factor(m + 1, 4.0 * sp.angle);
            if (std::fabs(fp - w) > tol / 2) {
                best = std::min(best, std::fabs(fp * fq - w));
                continue;
            }
            ConstructionResult res;
            res.target = w;
            res.factorization = make_split_factorization({{sp.p, m}, {q->p, 1}});
            auto mu = spectral_measure(lattice_points(res.factorization));
            res.achieved = fourier_coefficient(mu, 4);
            if (std::fabs(res.achieved - w) <= tol) return res;
            best = std::min(best, std::fabs(res.achieved - w));
        }
    }
    throw SearchExhausted("build_pmq: no (p, q) pair below p_max = " + std::to_string(p_max) +
                          " meets |mu_hat(4) - w| <= tol; best " + to_string_roundtrip(best),
                          best);
}

// ---------------------------------------------------------------------------
// Three-prime construction: n = p1 p2 p3 with three representations near the
// cube-root-of-unity directions, so xi1 + xi2 + xi3 is small. In the
// canonical chart the targets are phi1 ~ pi/6 and phi2, phi3 ~ pi/12:
//
//   xi1 = conj(P1) P2 P3                angle ~ -pi/6 + pi/12 + pi/12 = 0
//   xi2 = -i conj(P1) conj(P2) P3       angle ~ -2 pi/3
//   xi3 = -  conj(P1) conj(P2) conj(P3) angle ~ +2 pi/3
//
// The returned combination is optimised exactly over the whole orbit of
// conjugations and unit rotations, keeping each angle within angle_tol of its
// target.
// ---------------------------------------------------------------------------

namespace constructdetail {

inline double wrap_angle(double a) {
    while (a > M_PI) a -= 2 * M_PI;
    while (a <= -M_PI) a += 2 * M_PI;
    return a;
}

inline GaussianInt orbit_element(const std::array<GaussianInt, 3>& primes, int mask, int unit) {
    GaussianInt z{1, 0};
    for (int i = 0; i < 3; ++i)
        z = z * ((mask >> i) & 1 ? primes[std::size_t(i)].conj() : primes[std::size_t(i)]);
    return z.rotated(unit);
}

} // namespace constructdetail

inline ConstructionResult build_three_prime(double angle_tol, u64 p_max) {
    if (!(angle_tol > 0.0))
        throw std::invalid_argument("build_three_prime: angle_tol must be positive");

    auto table = split_prime_table(5, p_max);
    if (table.size() < 3)
        throw SearchExhausted("build_three_prime: fewer than three split primes below p_max", 3.0);

    const double t1 = M_PI / 6, t23 = M_PI / 12;
    double delta = angle_tol / 3.0;
    std::optional<SectorPrime> p1, p2, p3;
    if (angle_tol >= M_PI) {
        p1 = table[0]; p2 = table[1]; p3 = table[2];
    } else {
        for (const auto& sp : table) {
            if (!p1 && std::fabs(sp.angle - t1) <= delta) { p1 = sp; continue; }
            if (!p2 && std::fabs(sp.angle - t23) <= delta) { p2 = sp; continue; }
            if (!p3 && std::fabs(sp.angle - t23) <= delta) { p3 = sp; continue; }
            if (p1 && p2 && p3) break;
        }
    }
    if (!(p1 && p2 && p3))
        throw SearchExhausted("build_three_prime: no prime triple below p_max = " +
                              std::to_string(p_max) + " lands in the target sectors", 3.0);

    std::array<GaussianInt, 3> primes{p1->prime, p2->prime, p3->prime};
    const double targets[3] = {0.0, -2 * M_PI / 3, 2 * M_PI / 3};

    ConstructionResult res;
    res.target = 0.0;
    res.factorization = make_split_factorization({{p1->p, 1}, {p2->p, 1}, {p3->p, 1}});
    double n = double(i64(res.factorization.n));

    // exact orbit optimisation: 32 choices per representation
    i128 best_norm = -1;
    std::array<GaussianInt, 3> best{};
    for (int c1 = 0; c1 < 32; ++c1) {
        GaussianInt z1 = constructdetail::orbit_element(primes, c1 & 7, c1 >> 3);
        if (angle_tol < M_PI &&
            std::fabs(constructdetail::wrap_angle(std::atan2(double(z1.im), double(z1.re)) - targets[0])) > angle_tol)
            continue;
        for (int c2 = 0; c2 < 32; ++c2) {
            GaussianInt z2 = constructdetail::orbit_element(primes, c2 & 7, c2 >> 3);
            if (angle_tol < M_PI &&
                std::fabs(constructdetail::wrap_angle(std::atan2(double(z2.im), double(z2.re)) - targets[1])) > angle_tol)
                continue;
            for (int c3 = 0; c3 < 32; ++c3) {
                GaussianInt z3 = constructdetail::orbit_element(primes, c3 & 7, c3 >> 3);
                if (angle_tol < M_PI &&
                    std::fabs(constructdetail::wrap_angle(std::atan2(double(z3.im), double(z3.re)) - targets[2])) > angle_tol)
                    continue;
                i128 sx = i128(z1.re) + z2.re + z3.re;
                i128 sy = i128(z1.im) + z2.im + z3.im;
                i128 norm = sx * sx + sy * sy;
                if (norm == 0) continue;
                if (best_norm < 0 || norm < best_norm) {
                    best_norm = norm;
                    best = {z1, z2, z3};
                }
            }
        }
    }
    if (best_norm < 0)
        throw SearchExhausted("build_three_prime: no orbit combination met the angle windows", 3.0);

    res.witnesses = {{best[0].re, best[0].im}, {best[1].re, best[1].im}, {best[2].re, best[2].im}};
    res.achieved = std::sqrt(double(best_norm) / n);
    return res;
}

} // namespace arithwave
