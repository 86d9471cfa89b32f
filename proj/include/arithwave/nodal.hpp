#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "arithwave/core.hpp"
#include "arithwave/field.hpp"
#include "arithwave/kacrice.hpp"
#include "arithwave/marching.hpp"
#include "arithwave/parallel.hpp"
#include "arithwave/quadrature.hpp"
#include "arithwave/rng.hpp"

namespace arithwave {

// ---------------------------------------------------------------------------
// Nodal length of a field restricted to the ball B(s): marching squares on a
// uniform grid of step h over the bounding square, cells clipped to the ball.
// The refinement ratio compares the estimate at h against h/2.
// ---------------------------------------------------------------------------

struct NodalLengthEstimate {
    double length = 0.0;
    double grid_step = 0.0;
    double refinement_ratio = 1.0;
    double domain_radius = 0.0;
};

namespace nodaldetail {

inline double disk_length_at(const HarmonicField& f, Vec2 center, double s, double h) {
    double margin = 2.0 * h;
    Vec2 origin{center.x - s - margin, center.y - s - margin};
    std::size_t nodes = std::size_t(std::ceil(2.0 * (s + margin) / h)) + 2;
    auto values = f.grid(origin, h, nodes, nodes);
    return contour_length_disk(values, nodes, nodes, origin, h, center, s);
}

} // namespace nodaldetail

inline NodalLengthEstimate nodal_length(const HarmonicField& f, double s, double h,
                                        bool refine = true, Vec2 center = {0.0, 0.0}) {
    if (!(s > 0.0)) throw std::invalid_argument("nodal_length: s must be positive");
    if (!(h > 0.0) || h > s / 20.0)
        throw std::invalid_argument("nodal_length: require 0 < h <= s/20");
    NodalLengthEstimate est;
    est.grid_step = h;
    est.domain_radius = s;
    est.length = nodaldetail::disk_length_at(f, center, s, h);
    if (refine) {
        double finer = nodaldetail::disk_length_at(f, center, s, h / 2.0);
        est.refinement_ratio = finer > 0.0 ? est.length / finer : 1.0;
    }
    return est;
}

inline NodalLengthEstimate nodal_length(const FieldSpec& spec, double s, double h,
                                        bool refine = true) {
    return nodal_length(spec.field, s, h, refine);
}

// Kac-Rice expected nodal length per unit area, recomputed from the lattice
// point set: the gradient covariance is 2 pi^2 n I, and the zero-set length
// density of a unit-variance field is sigma/2 with sigma^2 the per-component
// gradient variance.
inline double kac_rice_density(const LatticePointSet& pts) {
    long double sxx = 0, syy = 0;
    for (auto p : pts.points) {
        sxx += (long double)p.x * p.x;
        syy += (long double)p.y * p.y;
    }
    double var_x = double(sxx) / double(pts.count()) * kTwoPi * kTwoPi;
    double var_y = double(syy) / double(pts.count()) * kTwoPi * kTwoPi;
    // the quarter-turn symmetry makes both components equal
    double sigma = std::sqrt(0.5 * (var_x + var_y));
    return sigma / 2.0;
}

// ---------------------------------------------------------------------------
// Variance experiment: Monte-Carlo variance of L(f_n, s) against the
// asymptotic formula (1 + mu_hat(4))/512 (pi s^2)^2 n / N^2 and against the
// Kac-Rice two-point integral (n/2) int L2(u) A(u) du with A the lens area.
// Full-torus lengths are tracked for the covariance identity
// Cov(L(f_n,s), L(f_n)) = (pi s^2)^2 Var(L(f_n)).
// ---------------------------------------------------------------------------

struct VarianceExperimentResult {
    u64 n = 0;
    u64 N = 0;
    double mu4 = 0.0;
    double s = 0.0;
    u64 trials = 0;
    double mc_variance = 0.0;
    double formula_value = 0.0;
    double kacrice_integral = 0.0;
    // diagnostics and the covariance identity pieces
    double mc_mean = 0.0;
    double mean_full = 0.0;
    double var_full = 0.0;
    double cov_restricted_full = 0.0;
    std::size_t grid = 0;
};

struct VarianceOptions {
    std::size_t grid = 0;      // torus nodes per side; 0 = auto
    double quad_tol = 1e-6;
    bool with_kacrice = true;
};

inline std::size_t auto_torus_grid(double sqrt_n) {
    std::size_t g = 128;
    while (double(g) < 10.0 * sqrt_n && g < (std::size_t(1) << 14)) g *= 2;
    return g;
}

inline double kacrice_variance_integral(const LatticePointSet& pts, double s, double tol) {
    double n = as_double(pts.n);
    // polar quadrature over the difference vector u in B(2s), avoiding the
    // r^2 -> 1 singularity at the origin by a negligible cutoff
    double cutoff = 1e-4 / std::sqrt(n);
    auto outer = [&](double phi) {
        double c = std::cos(phi), sn = std::sin(phi);
        return integrate_1d(
            [&](double rho) {
                auto jet = kac_rice_jet(pts, {rho * c, rho * sn});
                return jet.L2 * lens_area(rho, s) * rho;
            },
            cutoff, 2.0 * s, tol * 0.1);
    };
    return n / 2.0 * integrate_1d(outer, 0.0, kTwoPi, tol);
}

inline VarianceExperimentResult variance_experiment(u64 n, double s, u64 trials, u64 seed,
                                                    const VarianceOptions& opt = {}) {
    if (trials < 100) throw std::invalid_argument("variance_experiment: trials must be >= 100");
    auto pts = lattice_points(n);
    if (pts.count() == 0) throw std::invalid_argument("variance_experiment: n is not in S");

    VarianceExperimentResult res;
    res.n = n;
    res.N = pts.count();
    res.s = s;
    res.trials = trials;
    res.mu4 = fourier_coefficient(spectral_measure(pts), 4);
    res.formula_value = (1.0 + res.mu4) / 512.0 * std::pow(M_PI * s * s, 2.0) * double(n) /
                        (double(res.N) * double(res.N));

    std::size_t G = opt.grid ? opt.grid : auto_torus_grid(std::sqrt(double(n)));
    res.grid = G;
    const double h = 1.0 / double(G);
    const Vec2 center{0.5, 0.5};

    std::vector<double> len_s(trials), len_full(trials);
    parallel_for(trials, [&](std::size_t t) {
        auto spec = sample_arw(pts, splitmix_key(seed, t));
        auto values = spec.field.grid({0.0, 0.0}, h, G, G);
        len_full[t] = contour_length_torus(values, G);
        len_s[t] = contour_length_disk(values, G, G, {0.0, 0.0}, h, center, s);
    });

    auto mean = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        return m / double(v.size());
    };
    double ms = mean(len_s), mf = mean(len_full);
    double vs = 0.0, vf = 0.0, cov = 0.0;
    for (u64 t = 0; t < trials; ++t) {
        vs += (len_s[t] - ms) * (len_s[t] - ms);
        vf += (len_full[t] - mf) * (len_full[t] - mf);
        cov += (len_s[t] - ms) * (len_full[t] - mf);
    }
    res.mc_mean = ms;
    res.mc_variance = vs / double(trials - 1);
    res.mean_full = mf;
    res.var_full = vf / double(trials - 1);
    res.cov_restricted_full = cov / double(trials - 1);
    if (opt.with_kacrice)
        res.kacrice_integral = kacrice_variance_integral(pts, s, opt.quad_tol);
    return res;
}

// ---------------------------------------------------------------------------
// Stability of the nodal set under perturbations: given h and theta on B(1),
// estimate beta = min max(|h|, |grad h|), M = C^2 norms, tau = ||theta||_C2
// on a dense grid with Lipschitz padding, and compare the relative change of
// nodal length against C tau M^3 / beta^4 when tau <= beta^2/(16 M).
// ---------------------------------------------------------------------------

struct StabilityReport {
    double beta = 0.0;
    double M = 0.0;
    double tau = 0.0;
    double length_h = 0.0;
    double length_perturbed = 0.0;
    bool hypotheses_ok = false;
    bool bound_satisfied = false;
    double bound_value = 0.0;
    double relative_change = 0.0;
};

namespace nodaldetail {

inline double sym2_norm(const Sym2& m) {
    // spectral norm of a symmetric 2x2 matrix
    double tr = 0.5 * (m.a + m.c);
    double det = m.a * m.c - m.b * m.b;
    double disc = std::sqrt(std::max(tr * tr - det, 0.0));
    return std::max(std::fabs(tr + disc), std::fabs(tr - disc));
}

} // namespace nodaldetail

template <typename FieldH, typename FieldTheta>
StabilityReport stability_check(const FieldH& h, const FieldTheta& theta,
                                std::size_t grid, double C = 100.0) {
    if (grid < 16) throw std::invalid_argument("stability_check: grid must be >= 16");
    const double step = 2.0 / double(grid);

    double beta_raw = std::numeric_limits<double>::infinity();
    double Mh = 0.0, Mht = 0.0, tau_raw = 0.0;
    for (std::size_t j = 0; j <= grid; ++j)
        for (std::size_t i = 0; i <= grid; ++i) {
            Vec2 x{-1.0 + double(i) * step, -1.0 + double(j) * step};
            if (x.norm_sq() > 1.0) continue;
            FieldJet jh = h.jet(x);
            FieldJet jt = theta.jet(x);
            double gh = jh.grad.norm();
            beta_raw = std::min(beta_raw, std::max(std::fabs(jh.value), gh));
            double c2h = std::fabs(jh.value) + gh + nodaldetail::sym2_norm(jh.hess);
            double c2t = std::fabs(jt.value) + jt.grad.norm() + nodaldetail::sym2_norm(jt.hess);
            Mh = std::max(Mh, c2h);
            Mht = std::max(Mht, c2h + c2t); // C^2 norm of h + theta, subadditively
            tau_raw = std::max(tau_raw, c2t);
        }

    StabilityReport rep;
    // Lipschitz padding: between grid nodes a field's value and gradient move
    // at most (its own C^2 scale) * distance
    rep.M = std::max(Mh, Mht) + Mh * step;
    rep.beta = std::max(beta_raw - Mh * step, 0.0);
    rep.tau = tau_raw + tau_raw * step;

    // lengths through a plain value-grid marching pass
    const double step_len = std::min(1.0 / 40.0, step);
    std::size_t nodes = std::size_t(std::ceil(2.4 / step_len)) + 2;
    Vec2 origin{-1.2, -1.2};
    std::vector<double> vh(nodes * nodes), vp(nodes * nodes);
    for (std::size_t j = 0; j < nodes; ++j)
        for (std::size_t i = 0; i < nodes; ++i) {
            Vec2 x{origin.x + double(i) * step_len, origin.y + double(j) * step_len};
            double a = h.jet(x).value, b = theta.jet(x).value;
            vh[j * nodes + i] = a;
            vp[j * nodes + i] = a + b;
        }
    rep.length_h = contour_length_disk(vh, nodes, nodes, origin, step_len, {0, 0}, 1.0);
    rep.length_perturbed = contour_length_disk(vp, nodes, nodes, origin, step_len, {0, 0}, 1.0);
    if (rep.length_h == 0.0)
        throw std::domain_error("stability_check: h has empty nodal set in B(1)");

    rep.hypotheses_ok = rep.tau <= rep.beta * rep.beta / (16.0 * rep.M) && rep.beta > 0.0;
    rep.relative_change = std::fabs(rep.length_perturbed - rep.length_h) / rep.length_h;
    rep.bound_value = C * rep.tau * std::pow(rep.M, 3.0) / std::pow(rep.beta, 4.0);
    rep.bound_satisfied = rep.hypotheses_ok && rep.relative_change <= rep.bound_value;
    return rep;
}

// ---------------------------------------------------------------------------
// Characteristic-function comparison of the nodal lengths of F_n = f_n(R ./
// sqrt(n)) and the Berry field F_mu = f_mu(R .), both over B(1).
// ---------------------------------------------------------------------------

struct CfRow {
    double t = 0.0;
    std::complex<double> cf_arw;
    std::complex<double> cf_brw;
    double abs_diff = 0.0;
    double se = 0.0; // bootstrap standard error of abs_diff
};

struct CfOptions {
    int brw_directions = 256;
    double grid_step = 0.0;     // 0 = auto from R
    std::size_t bootstrap = 200;
};

inline std::vector<CfRow> cf_compare(const LatticePointSet& pts, double R,
                                     const std::vector<double>& t_grid, u64 trials, u64 seed,
                                     const CfOptions& opt = {}) {
    if (R < 1.0) throw std::invalid_argument("cf_compare: R must be >= 1");
    if (trials < 2) throw std::invalid_argument("cf_compare: trials must be >= 2");
    if (pts.count() == 0) throw std::invalid_argument("cf_compare: n is not in S");
    double h = opt.grid_step > 0.0 ? opt.grid_step : 1.0 / (16.0 * std::ceil(R) + 16.0);
    double sqrt_n = std::sqrt(as_double(pts.n));

    std::vector<double> len_arw(trials), len_brw(trials);
    parallel_for(trials, [&](std::size_t t) {
        auto arw = sample_arw(pts, splitmix_key(seed, 2 * t));
        auto Fn = arw.field.scaled_argument(R / sqrt_n);
        len_arw[t] = nodal_length(Fn, 1.0, h, false).length;
        auto brw = sample_brw(opt.brw_directions, splitmix_key(seed, 2 * t + 1));
        auto Fmu = brw.field.scaled_argument(R);
        len_brw[t] = nodal_length(Fmu, 1.0, h, false).length;
    });

    auto cf_of = [&](const std::vector<double>& lens, double t,
                     const std::vector<u32>* resample) {
        std::complex<double> acc{0.0, 0.0};
        std::size_t count = lens.size();
        for (std::size_t i = 0; i < count; ++i) {
            double L = resample ? lens[(*resample)[i]] : lens[i];
            acc += std::complex<double>(std::cos(t * L), std::sin(t * L));
        }
        return acc / double(count);
    };

    std::vector<CfRow> rows;
    for (double t : t_grid) {
        CfRow row;
        row.t = t;
        row.cf_arw = cf_of(len_arw, t, nullptr);
        row.cf_brw = cf_of(len_brw, t, nullptr);
        row.abs_diff = std::abs(row.cf_arw - row.cf_brw);
        // bootstrap over trial indices
        double m = 0.0, m2 = 0.0;
        for (std::size_t b = 0; b < opt.bootstrap; ++b) {
            RngStream rng(seed ^ 0x626f6f74ULL, b);
            std::vector<u32> idx(trials);
            for (auto& v : idx) v = u32(rng.next_u64() % trials);
            double d = std::abs(cf_of(len_arw, t, &idx) - cf_of(len_brw, t, &idx));
            m += d;
            m2 += d * d;
        }
        m /= double(opt.bootstrap);
        row.se = std::sqrt(std::max(m2 / double(opt.bootstrap) - m * m, 0.0));
        rows.push_back(row);
    }
    return rows;
}

inline std::vector<CfRow> cf_compare(u64 n, double R, const std::vector<double>& t_grid,
                                     u64 trials, u64 seed, const CfOptions& opt = {}) {
    return cf_compare(lattice_points(n), R, t_grid, trials, seed, opt);
}

inline std::string cf_csv(const std::vector<CfRow>& rows) {
    std::string out = "t,cf_arw_re,cf_arw_im,cf_brw_re,cf_brw_im,abs_diff,stderr\n";
    for (const auto& r : rows) {
        out += to_string_roundtrip(r.t) + "," + to_string_roundtrip(r.cf_arw.real()) + "," +
               to_string_roundtrip(r.cf_arw.imag()) + "," + to_string_roundtrip(r.cf_brw.real()) +
               "," + to_string_roundtrip(r.cf_brw.imag()) + "," + to_string_roundtrip(r.abs_diff) +
               "," + to_string_roundtrip(r.se) + "\n";
    }
    return out;
}

inline std::string variance_csv(const VarianceExperimentResult& r) {
    std::string out = "n,N,mu4,s,trials,mc_var,formula,kacrice\n";
    out += std::to_string(r.n) + "," + std::to_string(r.N) + "," + to_string_roundtrip(r.mu4) +
           "," + to_string_roundtrip(r.s) + "," + std::to_string(r.trials) + "," +
           to_string_roundtrip(r.mc_variance) + "," + to_string_roundtrip(r.formula_value) + "," +
           to_string_roundtrip(r.kacrice_integral) + "\n";
    return out;
}

} // namespace arithwave
