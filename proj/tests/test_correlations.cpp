#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "arithwave/correlations.hpp"
#include "arithwave/gaussint.hpp"
#include "arithwave/rng.hpp"
#include "oracles.hpp"

using namespace arithwave;

static std::vector<oracle::Pt> as_oracle(const LatticePointSet& s) {
    std::vector<oracle::Pt> out;
    for (auto p : s.points) out.push_back({p.x, p.y});
    return out;
}

TEST_CASE("spectral correlations: frozen small cases") {
    auto p5 = lattice_points(5);
    CHECK(spectral_correlations(p5, 2).count == 8);   // S(2,n) = N
    CHECK(spectral_correlations(p5, 3).count == 0);   // parity obstruction
    CHECK(spectral_correlations(p5, 4).count == 168); // brute force; 3N^2-3N
}

TEST_CASE("quasi correlations: frozen oracle values for n = 5") {
    auto p5 = lattice_points(5);
    auto pts = as_oracle(p5);

    // brute force: the minimal nonzero pair sum is (2,1)+(-1,-2) = (1,-1),
    // norm^2 = 2 (swapped-conjugate pair), below the axis pair (0,2).
    CHECK(oracle::min_gap_brute(pts, 2) == 2);

    auto r19 = quasi_correlations(p5, 2, 1.9);
    CHECK(r19.count == oracle::quasi_corr_brute(pts, 2, 3)); // cap floor(1.9^2)
    CHECK(r19.count == 8);
    CHECK(r19.min_nonzero_norm_sq == 2);

    auto r20 = quasi_correlations(p5, 2, 2.0);
    CHECK(r20.count == oracle::quasi_corr_brute(pts, 2, 4));
    CHECK(r20.count == 16);
    REQUIRE(!r20.witnesses.empty());
    for (const auto& w : r20.witnesses) {
        i64 sx = 0, sy = 0;
        for (auto q : w) { sx += q.x; sy += q.y; }
        u64 s2 = u64(sx * sx + sy * sy);
        CHECK(s2 > 0);
        CHECK(s2 <= 4);
    }

    // K beyond the maximal possible sum: everything except exact zeros
    auto r10 = quasi_correlations(p5, 2, 10.0);
    CHECK(r10.count == 8 * 8 - 8); // N^2 - S(2,n) = 56
}

TEST_CASE("min_gap frozen values") {
    CHECK(min_gap(lattice_points(1), 2) == 2); // (1,0)+(0,1) = (1,1)
    CHECK(min_gap(lattice_points(5), 2) == 2);
    auto p25 = lattice_points(25);
    CHECK(min_gap(p25, 3) == oracle::min_gap_brute(as_oracle(p25), 3));
}

TEST_CASE("meet-in-the-middle equals brute force on random instances") {
    RngStream rng(2024, 0);
    int done = 0;
    while (done < 60) {
        u64 n = 2 + rng.next_u64() % 10000;
        auto set = lattice_points(n);
        if (set.count() == 0) continue;
        int l = 2 + int(rng.next_u64() % 3); // 2..4
        double Nl = std::pow(double(set.count()), l);
        if (Nl > 2.0e6) continue;
        auto pts = as_oracle(set);

        CHECK(spectral_correlations(set, l).count == oracle::spectral_corr_brute(pts, l));

        double K = (0.3 + 3.0 * rng.next_double()) * std::sqrt(double(n));
        u64 cap = u64(detail::quasi_cap(K));
        CHECK(quasi_correlations(set, l, K).count == oracle::quasi_corr_brute(pts, l, cap));
        CHECK(min_gap(set, l) == oracle::min_gap_brute(pts, l));
        ++done;
    }
}

TEST_CASE("structural invariants of S and Q") {
    // S(2,n) = N and S(odd,n) = 0 across a sample of S members
    for (u64 n : {1ULL, 2ULL, 13ULL, 25ULL, 50ULL, 65ULL, 325ULL, 1105ULL}) {
        auto set = lattice_points(n);
        REQUIRE(set.count() > 0);
        CHECK(spectral_correlations(set, 2).count == set.count());
        CHECK(spectral_correlations(set, 3).count == 0);
        if (set.count() <= 40) CHECK(spectral_correlations(set, 5).count == 0);
    }

    // Q monotone in K; at K = 2 l sqrt(n) the count is N^l - S(l,n)
    auto p65 = lattice_points(65);
    u64 prev = 0;
    for (double K : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
        u64 c = quasi_correlations(p65, 2, K).count;
        CHECK(c >= prev);
        prev = c;
    }
    u64 N = p65.count();
    CHECK(quasi_correlations(p65, 2, 2 * 2 * std::sqrt(65.0)).count ==
          N * N - spectral_correlations(p65, 2).count);

    // min_gap(n,2)^2 is a nonzero integer <= 4n
    for (u64 n : {5ULL, 13ULL, 17ULL, 25ULL, 65ULL, 85ULL, 325ULL}) {
        u64 g = min_gap(lattice_points(n), 2);
        CHECK(g > 0);
        CHECK(g <= 4 * n);
    }
}

TEST_CASE("heavy-exponent trend for n = 5^m") {
    // S(4,n)/N^2 = 3 - 3/N exactly; S(6,n)/N^3 approaches 15 monotonically
    double prev6 = 0.0;
    u64 n = 1;
    for (int m = 1; m <= 6; ++m) {
        n *= 5;
        auto set = lattice_points(n);
        double N = double(set.count());
        REQUIRE(N == 4.0 * (m + 1));
        double r4 = double(spectral_correlations(set, 4).count) / (N * N);
        CHECK(r4 >= 3.0 - 6.0 / N);
        CHECK(r4 <= 3.0);
        double r6 = double(spectral_correlations(set, 6).count) / (N * N * N);
        CHECK(r6 > prev6);
        prev6 = r6;
    }
    CHECK(prev6 < 15.0);
    CHECK(prev6 > 15.0 * 0.6);
}

TEST_CASE("c_exponent recursion") {
    CHECK(c_exponent(2, 0.01) == Catch::Approx(0.70315).margin(2e-5));
    CHECK(c_exponent(4, 0.0) == Catch::Approx(3.0 * std::log(2.0)).epsilon(1e-12));
    CHECK(c_exponent(6, 0.0) == Catch::Approx(4.5 * std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(c_exponent(1, 0.0), std::invalid_argument);
}

TEST_CASE("budget produces a resource error naming the bound") {
    auto set = lattice_points(1105); // N = 32
    CorrelationOptions opt;
    opt.budget = 100;
    try {
        spectral_correlations(set, 4, opt);
        FAIL("expected ResourceError");
    } catch (const ResourceError& e) {
        CHECK(std::string(e.what()).find("100") != std::string::npos);
    }
}

TEST_CASE("census rows are exact and flagged rather than dropped") {
    // explicit K below 1: every row empty since nonzero integer sums have norm >= 1
    for (const auto& row : census(30, 2, ThresholdExplicit{0.5})) {
        CHECK_FALSE(row.nonempty);
        CHECK(row.count == 0);
        CHECK(row.flag.empty());
    }

    // theorem-1 rule at X = 100: rows match the brute-force oracle per n
    auto rows = census(100, 2, ThresholdTheorem1{0.1});
    std::vector<u64> members;
    for (u64 n = 2; n <= 100; ++n)
        if (oracle::in_S_prime_brute(n)) members.push_back(n);
    REQUIRE(rows.size() == members.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].n == members[i]);
        auto pts = oracle::lattice_points_brute(rows[i].n);
        u64 cap = u64(detail::quasi_cap(rows[i].K));
        u64 want = oracle::quasi_corr_brute(pts, 2, cap);
        CHECK(rows[i].count == want);
        CHECK(rows[i].nonempty == (want > 0));
        CHECK(rows[i].min_gap_sq == oracle::min_gap_brute(pts, 2));
    }

    // a starved budget flags rows instead of dropping them
    CensusOptions opt;
    opt.corr.budget = 2;
    auto starved = census(30, 2, ThresholdExplicit{1.0}, opt);
    REQUIRE(starved.size() == 5);
    for (const auto& row : starved) CHECK_FALSE(row.flag.empty());

    // CSV header per interface contract
    auto csv = census_csv(rows);
    CHECK(csv.rfind("n,N,l,K,min_gap_sq,count,nonempty\n", 0) == 0);
}
