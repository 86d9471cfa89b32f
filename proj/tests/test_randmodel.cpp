#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "arithwave/randmodel.hpp"

using namespace arithwave;

// O(N^l) reference count
static u64 brute_count(const std::vector<Vec2>& pts, int l, double alpha) {
    u64 count = 0;
    std::vector<std::size_t> idx(std::size_t(l), 0);
    for (;;) {
        long double sx = 0, sy = 0;
        for (auto i : idx) { sx += (long double)pts[i].x; sy += (long double)pts[i].y; }
        if (sx * sx + sy * sy <= (long double)alpha * alpha) ++count;
        int j = l - 1;
        while (j >= 0 && ++idx[std::size_t(j)] == pts.size()) { idx[std::size_t(j)] = 0; --j; }
        if (j < 0) break;
    }
    return count;
}

TEST_CASE("model points lie on the unit circle at the right angles") {
    auto eta = SignMatrix::complete(2);
    REQUIRE(eta.rows.size() == 4);

    AngleSample zero;
    zero.theta = {0.0, 0.0};
    for (auto p : model_points(eta, zero)) {
        CHECK(p.x == Catch::Approx(1.0));
        CHECK(p.y == Catch::Approx(0.0).margin(1e-15));
    }

    // omega = 1: conjugate pair at angles t and -t
    auto eta1 = SignMatrix::complete(1);
    AngleSample s1;
    s1.theta = {0.15};
    auto pts1 = model_points(eta1, s1);
    REQUIRE(pts1.size() == 2);
    CHECK(pts1[0].x == Catch::Approx(std::cos(kTwoPi * 0.15)));
    CHECK(pts1[0].y == Catch::Approx(-std::sin(kTwoPi * 0.15)));
    CHECK(pts1[1].y == Catch::Approx(std::sin(kTwoPi * 0.15)));

    auto sample = AngleSample::draw(2, 42);
    for (auto p : model_points(eta, sample))
        CHECK(std::fabs(p.norm_sq() - 1.0) < 1e-14);

    AngleSample bad;
    bad.theta = {0.1};
    CHECK_THROWS_AS(model_points(eta, bad), std::invalid_argument);
}

TEST_CASE("count_small_sums equals brute force") {
    // trivial bounds first
    auto eta = SignMatrix::complete(3);
    auto sample = AngleSample::draw(3, 7);
    auto pts = model_points(eta, sample);
    u64 N = pts.size();
    CHECK(count_small_sums(pts, 2, 2.0 + 1e-9) == N * N);

    AngleSample zeros;
    zeros.theta = {0.0, 0.0, 0.0};
    auto collapsed = model_points(eta, zeros);
    CHECK(count_small_sums(collapsed, 2, 0.5) == 0);

    for (u64 seed = 0; seed < 12; ++seed) {
        for (int omega : {3, 4, 5}) {
            auto m = SignMatrix::complete(omega);
            auto s = AngleSample::draw(omega, seed);
            auto p = model_points(m, s);
            for (int l : {2, 3}) {
                if (std::pow(double(p.size()), l) > 1.0e6) continue;
                for (double alpha : {0.05, 0.2, 0.7}) {
                    CHECK(count_small_sums(p, l, alpha) == brute_count(p, l, alpha));
                }
            }
        }
    }
}

TEST_CASE("count_small_sums scaling is stable in omega for l = 2") {
    // mean over seeds of count/(alpha N^2) hovers near arcsin'(0)/pi = 1/pi
    for (int omega : {4, 6}) {
        auto m = SignMatrix::complete(omega);
        double N = double(m.rows.size());
        double alpha = 0.05;
        double total = 0.0;
        int seeds = 200;
        for (int s = 0; s < seeds; ++s)
            total += double(count_small_sums(model_points(m, AngleSample::draw(omega, u64(s))), 2, alpha));
        double ratio = total / seeds / (alpha * N * N);
        CHECK(ratio > 0.2);
        CHECK(ratio < 2.0);
    }
}

TEST_CASE("small_sum_probability: closed form for l = 2") {
    auto full = small_sum_probability(2, 2.0, 2000, 1);
    CHECK(full.value == 1.0);
    CHECK(full.se == 0.0);

    auto est = small_sum_probability(2, 0.1, 400000, 9);
    double want = (2.0 / M_PI) * std::asin(0.05);
    CHECK(std::fabs(est.value - want) < 4.0 * est.se + 1e-12);

    // l = 3: the vector small-ball is quadratic in alpha, so halving alpha
    // cuts the probability by about four (see the notes in the README)
    auto lo = small_sum_probability(3, 0.05, 4000000, 11);
    auto hi = small_sum_probability(3, 0.10, 4000000, 12);
    double ratio = hi.value / lo.value;
    CHECK(ratio > 3.2);
    CHECK(ratio < 4.9);
}

TEST_CASE("small_sum_probability is deterministic across pool sizes") {
    auto a = small_sum_probability(2, 0.3, 100000, 77);
    setenv("ARITHWAVE_THREADS", "3", 1);
    auto b = small_sum_probability(2, 0.3, 100000, 77);
    unsetenv("ARITHWAVE_THREADS");
    CHECK(a.value == b.value);
    CHECK(a.se == b.se);
}

TEST_CASE("rank statistics: exact and sampled") {
    CHECK(rank_statistics(1, 5, 0, 0).value == 1.0);
    auto r22 = rank_statistics(2, 2, 0, 0);
    CHECK(r22.value == 0.5);
    CHECK(r22.se == 0.0);
    auto r210 = rank_statistics(2, 10, 0, 0);
    CHECK(r210.value == 1.0 - std::pow(2.0, -9.0));

    // sampled: nondecreasing in omega within noise, converging to 1
    double prev = 0.0;
    for (int omega : {4, 8, 12, 16, 20, 24}) {
        auto est = rank_statistics(4, omega, 20000, 3);
        CHECK(est.value >= prev - 3.0 * (est.se + 0.01));
        prev = est.value;
    }
    CHECK(prev >= 0.999 - 0.005);
}
