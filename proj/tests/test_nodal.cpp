#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "arithwave/kacrice.hpp"
#include "arithwave/nodal.hpp"

using namespace arithwave;

TEST_CASE("kac_rice_jet on the symbolic n = 1 case") {
    auto p1 = lattice_points(1);
    auto jet = kac_rice_jet(p1, {0.25, 0.25});
    CHECK(jet.r == Catch::Approx(0.0).margin(1e-14));
    double pi2 = M_PI * M_PI;
    CHECK(jet.X.a == Catch::Approx(-2.0 * pi2).epsilon(1e-12));
    CHECK(jet.X.b == Catch::Approx(-2.0 * pi2).epsilon(1e-12));
    CHECK(jet.X.c == Catch::Approx(-2.0 * pi2).epsilon(1e-12));
    CHECK(jet.X.trace() == Catch::Approx(-4.0 * pi2).epsilon(1e-12));

    // gradient vanishes at (0.5, 0): X is the zero matrix there
    auto jz = kac_rice_jet(p1, {0.5, 0.0});
    CHECK(jz.X.a == Catch::Approx(0.0).margin(1e-20));
    CHECK(jz.X.b == Catch::Approx(0.0).margin(1e-20));
    CHECK(jz.X.c == Catch::Approx(0.0).margin(1e-20));

    // singularity guard near r^2 = 1
    CHECK_THROWS_AS(kac_rice_jet(p1, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("kac_rice_jet invariants and the finite-difference Y assembly") {
    auto pts = lattice_points(25);
    RngStream rng(99, 0);
    int checked = 0;
    while (checked < 10) {
        Vec2 x{rng.next_double(), rng.next_double()};
        auto cj = covariance_jet(pts, x);
        if (cj.value * cj.value >= 1.0 - 1e-6) continue;
        auto kj = kac_rice_jet(pts, x);
        CHECK(kj.X.trace() <= 1e-15);
        CHECK(kj.eps_bound >= 0.0);

        // assemble Y from finite differences of the covariance gradient
        const double d = 1e-5;
        double n = 25.0;
        Sym2 Hfd{
            (covariance_jet(pts, {x.x + d, x.y}).gradient.x -
             covariance_jet(pts, {x.x - d, x.y}).gradient.x) / (2 * d),
            (covariance_jet(pts, {x.x, x.y + d}).gradient.x -
             covariance_jet(pts, {x.x, x.y - d}).gradient.x) / (2 * d),
            (covariance_jet(pts, {x.x, x.y + d}).gradient.y -
             covariance_jet(pts, {x.x, x.y - d}).gradient.y) / (2 * d)};
        double r = cj.value, denom = 1.0 - r * r;
        Sym2 G{cj.gradient.x * cj.gradient.x, cj.gradient.x * cj.gradient.y,
               cj.gradient.y * cj.gradient.y};
        Sym2 Yfd = (Hfd + G * (r / denom)) * (-2.0 / n);
        double scale = std::max(1.0, std::fabs(square(kj.Y).trace()));
        CHECK(std::fabs(square(Yfd).trace() - square(kj.Y).trace()) / scale < 1e-5);
        ++checked;
    }
}

TEST_CASE("moment integrals: closed form equals quadrature") {
    {
        auto pts = lattice_points(5);
        auto m = moment_integral(pts, 2, 0.1);
        // leading term pi s^2 S(2,n)/N^2 = pi s^2 / N exactly
        double lead = M_PI * 0.01 / 8.0;
        CHECK(m.closed_form - m.bessel_tail == Catch::Approx(lead).epsilon(1e-12));
        CHECK(m.quadrature == Catch::Approx(m.closed_form).epsilon(1e-6));
    }
    {
        auto pts = lattice_points(25);
        auto m = moment_integral(pts, 4, 0.2);
        CHECK(m.quadrature == Catch::Approx(m.closed_form).epsilon(1e-6));
    }
    CHECK_THROWS_AS(moment_integral(lattice_points(5), 3, 0.1), std::invalid_argument);
}

struct PlaneField {
    FieldJet jet(Vec2 x) const {
        FieldJet j;
        j.value = x.x;
        j.grad = {1.0, 0.0};
        return j;
    }
};

struct ConstField {
    double c;
    FieldJet jet(Vec2) const {
        FieldJet j;
        j.value = c;
        return j;
    }
};

TEST_CASE("stability_check: analytic plane case") {
    PlaneField h;
    ConstField theta{0.01};
    auto rep = stability_check(h, theta, 160);
    CHECK(rep.length_h == Catch::Approx(2.0).margin(1e-9));
    CHECK(rep.length_perturbed == Catch::Approx(2.0 * std::sqrt(1.0 - 1e-4)).margin(1e-9));
    CHECK(rep.hypotheses_ok);
    CHECK(rep.relative_change == Catch::Approx(5e-5).epsilon(0.01));
    CHECK(rep.bound_satisfied);

    // zero perturbation: lengths equal exactly
    ConstField zero{0.0};
    auto rz = stability_check(h, zero, 160);
    CHECK(rz.length_h == rz.length_perturbed);
    CHECK(rz.bound_satisfied);

    // degenerate input: a field with no zeros in B(1)
    ConstField two{2.0};
    CHECK_THROWS_AS(stability_check(two, zero, 64), std::domain_error);
}

struct ScaledArw {
    HarmonicField f;
    FieldJet jet(Vec2 x) const { return f.jet(x); }
};

TEST_CASE("stability_check: perturbed ARW samples") {
    auto pts = lattice_points(25);
    int pass = 0, total = 25;
    for (int s = 0; s < total; ++s) {
        ScaledArw h{sample_arw(pts, splitmix_key(1000, u64(s))).field.scaled_argument(1.0 / std::sqrt(25.0))};
        ScaledArw raw{sample_arw(pts, splitmix_key(2000, u64(s))).field.scaled_argument(1.0 / std::sqrt(25.0))};
        ScaledArw theta{raw.f};
        for (auto& a : theta.f.A) a *= 1e-4;
        for (auto& b : theta.f.B) b *= 1e-4;
        try {
            auto rep = stability_check(h, theta, 64);
            if (rep.hypotheses_ok && rep.bound_satisfied) ++pass;
        } catch (const std::domain_error&) {
        }
    }
    CHECK(pass >= total * 80 / 100);
}

TEST_CASE("variance experiment smoke") {
    VarianceOptions opt;
    opt.grid = 256;
    opt.quad_tol = 1e-5;
    auto res = variance_experiment(325, 0.3, 120, 7, opt);
    CHECK(res.N == 24);
    CHECK(res.mu4 == Catch::Approx(0.16).margin(0.01));
    CHECK(res.mc_variance > 0.0);
    CHECK(res.formula_value > 0.0);
    CHECK(res.kacrice_integral > 0.0);
    CHECK(res.mc_mean == Catch::Approx(kac_rice_density(lattice_points(325)) * M_PI * 0.09).epsilon(0.1));
    // the two numerical routes agree loosely even at this trial count
    CHECK(res.kacrice_integral / res.mc_variance > 0.3);
    CHECK(res.kacrice_integral / res.mc_variance < 3.0);

    // identical seeds reproduce bit-identically across pool sizes
    setenv("ARITHWAVE_THREADS", "4", 1);
    auto res2 = variance_experiment(325, 0.3, 120, 7, opt);
    unsetenv("ARITHWAVE_THREADS");
    CHECK(res.mc_variance == res2.mc_variance);
    CHECK(res.cov_restricted_full == res2.cov_restricted_full);

    auto csv = variance_csv(res);
    CHECK(csv.rfind("n,N,mu4,s,trials,mc_var,formula,kacrice\n", 0) == 0);
}

TEST_CASE("cf_compare smoke") {
    std::vector<double> ts{0.0, 1.0, 2.5};
    auto rows = cf_compare(u64(325), 2.0, ts, 60, 12345);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].cf_arw == std::complex<double>{1.0, 0.0});
    CHECK(rows[0].cf_brw == std::complex<double>{1.0, 0.0});
    CHECK(rows[0].abs_diff == 0.0);
    for (const auto& r : rows) {
        CHECK(std::abs(r.cf_arw) <= 1.0 + 1e-12);
        CHECK(std::abs(r.cf_brw) <= 1.0 + 1e-12);
        CHECK(r.se >= 0.0);
    }
    auto csv = cf_csv(rows);
    CHECK(csv.rfind("t,cf_arw_re,cf_arw_im,cf_brw_re,cf_brw_im,abs_diff,stderr\n", 0) == 0);
}
