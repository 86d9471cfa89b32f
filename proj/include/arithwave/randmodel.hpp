#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "arithwave/core.hpp"
#include "arithwave/parallel.hpp"
#include "arithwave/rng.hpp"

namespace arithwave {

// ---------------------------------------------------------------------------
// Random model for lattice points: angles phi_i = sum_k eta_ik theta_k (mod 1)
// with deterministic sign rows eta and i.i.d. uniform theta. The default sign
// matrix enumerates all 2^omega rows, giving N = 2^omega model points.
// ---------------------------------------------------------------------------

struct SignMatrix {
    int omega = 0;
    std::vector<std::vector<int>> rows; // entries in {-1, +1}, rows distinct

    static SignMatrix complete(int omega) {
        if (omega < 1 || omega > 30)
            throw std::invalid_argument("SignMatrix::complete: omega must be in [1, 30]");
        SignMatrix m;
        m.omega = omega;
        m.rows.reserve(std::size_t(1) << omega);
        for (u64 mask = 0; mask < (u64(1) << omega); ++mask) {
            std::vector<int> row(static_cast<std::size_t>(omega));
            for (int k = 0; k < omega; ++k)
                row[std::size_t(k)] = (mask >> k) & 1 ? 1 : -1;
            m.rows.push_back(std::move(row));
        }
        return m;
    }
};

struct AngleSample {
    std::vector<double> theta; // omega values in [0,1)
    u64 seed = 0;

    static AngleSample draw(int omega, u64 seed) {
        AngleSample s;
        s.seed = seed;
        RngStream rng(seed, 0);
        s.theta.resize(std::size_t(omega));
        for (auto& t : s.theta) t = rng.next_double();
        return s;
    }
};

inline std::vector<Vec2> model_points(const SignMatrix& eta, const AngleSample& sample) {
    if (sample.theta.size() != std::size_t(eta.omega))
        throw std::invalid_argument("model_points: omega mismatch between matrix and sample");
    std::vector<Vec2> pts;
    pts.reserve(eta.rows.size());
    for (const auto& row : eta.rows) {
        double phi = 0.0;
        for (int k = 0; k < eta.omega; ++k)
            phi += row[std::size_t(k)] * sample.theta[std::size_t(k)];
        phi -= std::floor(phi);
        pts.push_back({std::cos(kTwoPi * phi), std::sin(kTwoPi * phi)});
    }
    return pts;
}

// ---------------------------------------------------------------------------
// count_small_sums: ordered l-tuples with |sum| <= alpha (zero sums included).
// Meet-in-the-middle over half-tuple sums, sorted by x; candidates inside the
// alpha-box are filtered by |sum|^2 <= alpha^2 in double precision with a
// 1e-12 guard band, and boundary hits are rechecked in long double.
// ---------------------------------------------------------------------------

namespace randdetail {

struct HalfSums {
    std::vector<double> xs, ys;           // sorted by (x, y)
    std::vector<long double> xl, yl;      // extended-precision copies
};

inline HalfSums build_half_sums(const std::vector<Vec2>& pts, int k,
                                const std::vector<std::pair<long double, long double>>& ext) {
    const std::size_t N = pts.size();
    std::size_t total = 1;
    for (int j = 0; j < k; ++j) total *= N;
    std::vector<std::size_t> order(total);
    HalfSums h;
    h.xs.resize(total);
    h.ys.resize(total);
    h.xl.resize(total);
    h.yl.resize(total);
    std::vector<std::size_t> idx(std::size_t(k), 0);
    for (std::size_t r = 0; r < total; ++r) {
        double sx = 0, sy = 0;
        long double lx = 0, ly = 0;
        for (int j = 0; j < k; ++j) {
            sx += pts[idx[std::size_t(j)]].x;
            sy += pts[idx[std::size_t(j)]].y;
            lx += ext[idx[std::size_t(j)]].first;
            ly += ext[idx[std::size_t(j)]].second;
        }
        h.xs[r] = sx; h.ys[r] = sy; h.xl[r] = lx; h.yl[r] = ly;
        int j = k - 1;
        while (j >= 0 && ++idx[std::size_t(j)] == N) { idx[std::size_t(j)] = 0; --j; }
    }
    for (std::size_t r = 0; r < total; ++r) order[r] = r;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (h.xs[a] != h.xs[b]) return h.xs[a] < h.xs[b];
        return h.ys[a] < h.ys[b];
    });
    HalfSums out;
    out.xs.reserve(total); out.ys.reserve(total);
    out.xl.reserve(total); out.yl.reserve(total);
    for (std::size_t r : order) {
        out.xs.push_back(h.xs[r]);
        out.ys.push_back(h.ys[r]);
        out.xl.push_back(h.xl[r]);
        out.yl.push_back(h.yl[r]);
    }
    return out;
}

} // namespace randdetail

inline u64 count_small_sums(const std::vector<Vec2>& pts, int l, double alpha,
                            u64 budget = 100000000) {
    if (pts.empty()) throw std::invalid_argument("count_small_sums: empty point set");
    if (l < 2) throw std::invalid_argument("count_small_sums: l must be >= 2");
    if (!(alpha > 0.0)) throw std::invalid_argument("count_small_sums: alpha must be positive");
    int la = (l + 1) / 2, lb = l / 2;
    double work = std::pow(double(pts.size()), double(la));
    if (work > double(budget))
        throw ResourceError("count_small_sums: N^ceil(l/2) = " + to_string_roundtrip(work) +
                            " exceeds budget " + std::to_string(budget));

    std::vector<std::pair<long double, long double>> ext;
    ext.reserve(pts.size());
    for (auto p : pts) ext.push_back({(long double)p.x, (long double)p.y});

    auto A = randdetail::build_half_sums(pts, la, ext);
    randdetail::HalfSums Bstore;
    if (la != lb) Bstore = randdetail::build_half_sums(pts, lb, ext);
    const randdetail::HalfSums& B = (la != lb) ? Bstore : A;

    const double a2 = alpha * alpha;
    const long double a2l = (long double)alpha * (long double)alpha;
    u64 count = 0;
    for (std::size_t i = 0; i < B.xs.size(); ++i) {
        double tx = -B.xs[i], ty = -B.ys[i];
        auto lo = std::lower_bound(A.xs.begin(), A.xs.end(), tx - alpha) - A.xs.begin();
        for (std::size_t j = std::size_t(lo); j < A.xs.size() && A.xs[j] <= tx + alpha; ++j) {
            double dx = A.xs[j] - tx, dy = A.ys[j] - ty;
            double d2 = dx * dx + dy * dy;
            if (d2 <= a2 - 1e-12) { ++count; continue; }
            if (d2 > a2 + 1e-12) continue;
            long double lx = A.xl[j] + B.xl[i], ly = A.yl[j] + B.yl[i];
            if (lx * lx + ly * ly <= a2l) ++count;
        }
    }
    return count;
}

// ---------------------------------------------------------------------------
// Monte-Carlo small-ball probability P(|sum of l iid uniform unit vectors| <=
// alpha) with binomial standard error; trial streams are counter-based.
// ---------------------------------------------------------------------------

struct Estimate {
    double value = 0.0;
    double se = 0.0;
};

inline Estimate small_sum_probability(int l, double alpha, u64 trials, u64 seed) {
    if (l < 2) throw std::invalid_argument("small_sum_probability: l must be >= 2");
    if (trials < 1) throw std::invalid_argument("small_sum_probability: trials must be >= 1");
    const u64 kChunk = 16384;
    u64 chunks = (trials + kChunk - 1) / kChunk;
    std::vector<u64> hits(chunks, 0);
    parallel_for(chunks, [&](std::size_t c) {
        RngStream rng(seed, c);
        u64 begin = u64(c) * kChunk;
        u64 end = std::min(trials, begin + kChunk);
        u64 h = 0;
        for (u64 t = begin; t < end; ++t) {
            double sx = 0.0, sy = 0.0;
            for (int j = 0; j < l; ++j) {
                double a = kTwoPi * rng.next_double();
                sx += std::cos(a);
                sy += std::sin(a);
            }
            if (sx * sx + sy * sy <= alpha * alpha) ++h;
        }
        hits[c] = h;
    });
    u64 total = 0;
    for (u64 h : hits) total += h;
    double p = double(total) / double(trials);
    return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / double(trials))};
}

// ---------------------------------------------------------------------------
// Rank of random sign matrices: exact fraction-free elimination; full
// enumeration when 2^(l*omega) <= 2^24, Monte Carlo otherwise.
// ---------------------------------------------------------------------------

namespace randdetail {

inline int bareiss_rank(std::vector<std::vector<i64>> a) {
    const std::size_t rows = a.size();
    if (rows == 0) return 0;
    const std::size_t cols = a[0].size();
    std::size_t rank = 0;
    i64 prev = 1;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(a[pivot], a[rank]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            for (std::size_t c = col + 1; c < cols; ++c)
                a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) / prev;
            a[r][col] = 0;
        }
        prev = a[rank][col];
        ++rank;
    }
    return int(rank);
}

} // namespace randdetail

inline Estimate rank_statistics(int l, int omega, u64 trials, u64 seed) {
    if (l < 1 || omega < 1)
        throw std::invalid_argument("rank_statistics: l and omega must be >= 1");
    const u64 bits = u64(l) * u64(omega);
    if (bits <= 24) {
        // exact enumeration over every sign matrix
        u64 full = 0, total = u64(1) << bits;
        for (u64 mask = 0; mask < total; ++mask) {
            std::vector<std::vector<i64>> m(static_cast<std::size_t>(l),
                    std::vector<i64>(static_cast<std::size_t>(omega)));
            for (int r = 0; r < l; ++r)
                for (int c = 0; c < omega; ++c)
                    m[std::size_t(r)][std::size_t(c)] =
                        (mask >> (r * omega + c)) & 1 ? 1 : -1;
            if (randdetail::bareiss_rank(std::move(m)) == l) ++full;
        }
        return {double(full) / double(total), 0.0};
    }
    if (trials < 1) throw std::invalid_argument("rank_statistics: trials must be >= 1");
    const u64 kChunk = 4096;
    u64 chunks = (trials + kChunk - 1) / kChunk;
    std::vector<u64> hits(chunks, 0);
    parallel_for(chunks, [&](std::size_t c) {
        RngStream rng(seed, c);
        u64 begin = u64(c) * kChunk;
        u64 end = std::min(trials, begin + kChunk);
        u64 h = 0;
        for (u64 t = begin; t < end; ++t) {
            std::vector<std::vector<i64>> m(static_cast<std::size_t>(l),
                    std::vector<i64>(static_cast<std::size_t>(omega)));
            for (auto& row : m)
                for (auto& v : row) v = rng.next_bit() ? 1 : -1;
            if (randdetail::bareiss_rank(std::move(m)) == l) ++h;
        }
        hits[c] = h;
    });
    u64 total = 0;
    for (u64 h : hits) total += h;
    double p = double(total) / double(trials);
    return {p, std::sqrt(std::max(p * (1.0 - p), 0.0) / double(trials))};
}

} // namespace arithwave
