#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "arithwave/core.hpp"
#include "arithwave/gaussint.hpp"
#include "arithwave/parallel.hpp"

namespace arithwave {

// ---------------------------------------------------------------------------
// Spectral correlations S(l,n) and quasi-correlations Q(l,n,K), computed
// exactly by meet-in-the-middle over ordered half-tuples: l = ceil(l/2) +
// floor(l/2), partial sums are indexed in an exact integer table, and quasi
// queries scan an axis-aligned box of side 2K around each negated half-sum
// before filtering exactly. Ordered tuples are counted throughout.
// ---------------------------------------------------------------------------

struct CorrelationOptions {
    u64 budget = 100000000;   // max half-tuples enumerated
    std::size_t witness_cap = 8;
};

struct CorrelationReport {
    i128 n = 0;
    int l = 0;
    bool quasi = false;
    double K = 0.0;                 // threshold (quasi mode only)
    u64 count = 0;                  // ordered tuples in the queried set
    u64 min_nonzero_norm_sq = 0;    // min |sum|^2 over nonzero sums
    std::vector<std::vector<LatticePoint>> witnesses; // capped
};

namespace mitm {

struct SumTable {
    std::vector<i64> xs, ys;            // distinct sums, sorted by (x, y)
    std::vector<u64> counts;            // multiplicity of each sum
    std::vector<u64> exemplar;          // offset into `pool` of one achieving tuple
    std::vector<u32> pool;              // point indices, tuple_len per exemplar
    int tuple_len = 0;

    std::size_t size() const { return xs.size(); }

    // index range of the stripe with x == value
    std::pair<std::size_t, std::size_t> stripe(i64 value) const {
        auto lo = std::lower_bound(xs.begin(), xs.end(), value) - xs.begin();
        auto hi = std::upper_bound(xs.begin(), xs.end(), value) - xs.begin();
        return {std::size_t(lo), std::size_t(hi)};
    }

    std::optional<std::size_t> find(i64 x, i64 y) const {
        auto [lo, hi] = stripe(x);
        auto it = std::lower_bound(ys.begin() + long(lo), ys.begin() + long(hi), y);
        if (it != ys.begin() + long(hi) && *it == y)
            return std::size_t(it - ys.begin());
        return std::nullopt;
    }
};

inline u64 pack_xy(i64 x, i64 y) {
    return (u64(u32(i32(x))) << 32) | u64(u32(i32(y)));
}

// Enumerates all ordered k-tuples of `pts` and tabulates their vector sums.
inline SumTable build_sum_table(const std::vector<LatticePoint>& pts, int k,
                                bool keep_exemplars) {
    SumTable t;
    t.tuple_len = k;
    struct Acc { u64 count; u64 first_tuple_rank; };
    std::unordered_map<u64, Acc> acc;
    const std::size_t N = pts.size();
    std::vector<std::size_t> idx(std::size_t(k), 0);
    std::vector<i64> sx(std::size_t(k) + 1, 0), sy(std::size_t(k) + 1, 0);
    u64 rank = 0;
    for (;;) {
        for (int j = 0; j < k; ++j) {
            sx[std::size_t(j) + 1] = sx[std::size_t(j)] + pts[idx[std::size_t(j)]].x;
            sy[std::size_t(j) + 1] = sy[std::size_t(j)] + pts[idx[std::size_t(j)]].y;
        }
        u64 key = pack_xy(sx[std::size_t(k)], sy[std::size_t(k)]);
        auto [it, inserted] = acc.try_emplace(key, Acc{0, rank});
        it->second.count += 1;
        ++rank;
        int j = k - 1;
        while (j >= 0 && ++idx[std::size_t(j)] == N) { idx[std::size_t(j)] = 0; --j; }
        if (j < 0) break;
    }

    std::vector<std::pair<u64, Acc>> entries(acc.begin(), acc.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        i32 ax = i32(u32(a.first >> 32)), bx = i32(u32(b.first >> 32));
        if (ax != bx) return ax < bx;
        return i32(u32(a.first)) < i32(u32(b.first));
    });
    t.xs.reserve(entries.size());
    for (const auto& [key, a] : entries) {
        t.xs.push_back(i64(i32(u32(key >> 32))));
        t.ys.push_back(i64(i32(u32(key))));
        t.counts.push_back(a.count);
        if (keep_exemplars) {
            t.exemplar.push_back(u64(t.pool.size()));
            u64 r = a.first_tuple_rank;
            std::vector<u32> tuple(static_cast<std::size_t>(k), 0u);
            for (int j = k - 1; j >= 0; --j) { tuple[std::size_t(j)] = u32(r % N); r /= N; }
            for (u32 v : tuple) t.pool.push_back(v);
        }
    }
    return t;
}

// nearest nonzero |a - (tx, ty)|^2 over all sums a in the table
inline u128 nearest_nonzero_sq(const SumTable& t, i64 tx, i64 ty) {
    const u128 kInf = ~u128(0);
    u128 best = kInf;
    auto scan_stripe = [&](std::size_t lo, std::size_t hi, u128 dx2) {
        auto begin = t.ys.begin() + long(lo), end = t.ys.begin() + long(hi);
        long center = std::lower_bound(begin, end, ty) - t.ys.begin();
        for (long i = center; i < long(hi); ++i) {          // walk up
            u128 d2 = dx2 + u128(i128(t.ys[std::size_t(i)] - ty) * (t.ys[std::size_t(i)] - ty));
            if (d2 >= best) break;
            if (d2 > 0) best = d2;
        }
        for (long i = center - 1; i >= long(lo); --i) {     // walk down
            u128 d2 = dx2 + u128(i128(t.ys[std::size_t(i)] - ty) * (t.ys[std::size_t(i)] - ty));
            if (d2 >= best) break;
            if (d2 > 0) best = d2;
        }
    };
    // expand stripes outward from tx until dx^2 alone reaches the best found
    long right = std::lower_bound(t.xs.begin(), t.xs.end(), tx) - t.xs.begin();
    long left = right - 1;
    while (right < long(t.xs.size())) {
        i64 x = t.xs[std::size_t(right)];
        u128 dx2 = u128(i128(x - tx) * (x - tx));
        if (dx2 >= best) break;
        auto [lo, hi] = t.stripe(x);
        scan_stripe(lo, hi, dx2);
        right = long(hi);
    }
    while (left >= 0) {
        i64 x = t.xs[std::size_t(left)];
        u128 dx2 = u128(i128(x - tx) * (x - tx));
        if (dx2 >= best) break;
        auto [lo, hi] = t.stripe(x);
        scan_stripe(lo, hi, dx2);
        left = long(lo) - 1;
    }
    return best;
}

} // namespace mitm

namespace detail {

inline void check_correlation_pre(const LatticePointSet& pts, int l,
                                  const CorrelationOptions& opt) {
    if (pts.points.empty())
        throw std::invalid_argument("correlations: empty lattice point set");
    if (l < 2 || l > 8)
        throw std::invalid_argument("correlations: l must be in [2, 8]");
    int half = (l + 1) / 2;
    double work = std::pow(double(pts.count()), double(half));
    if (work > double(opt.budget))
        throw ResourceError("correlations: N^ceil(l/2) = " + to_string_roundtrip(work) +
                            " exceeds budget " + std::to_string(opt.budget));
}

// integer cap for |sum|^2 <= K^2, with the real side rounded outward one ulp
inline u128 quasi_cap(double K) {
    long double k2 = (long double)K * (long double)K;
    k2 = nextafterl(k2, std::numeric_limits<long double>::infinity());
    if (k2 >= 3.4e38L) return u128(-1);
    return u128(floorl(k2));
}

} // namespace detail

namespace detail {

inline u64 narrow_min_gap(u128 v) {
    if (v > u128(UINT64_MAX))
        throw std::out_of_range("min nonzero |sum|^2 exceeds 64 bits");
    return u64(v);
}

} // namespace detail

inline CorrelationReport spectral_correlations(const LatticePointSet& pts, int l,
                                               const CorrelationOptions& opt = {}) {
    detail::check_correlation_pre(pts, l, opt);
    int la = (l + 1) / 2, lb = l / 2;
    auto A = mitm::build_sum_table(pts.points, la, opt.witness_cap > 0);
    mitm::SumTable Bstore;
    if (la != lb) Bstore = mitm::build_sum_table(pts.points, lb, opt.witness_cap > 0);
    const mitm::SumTable& B = (la != lb) ? Bstore : A;

    CorrelationReport rep;
    rep.n = pts.n;
    rep.l = l;
    rep.quasi = false;
    u128 global_min = ~u128(0);
    for (std::size_t i = 0; i < B.size(); ++i) {
        if (auto j = A.find(-B.xs[i], -B.ys[i])) {
            rep.count += A.counts[*j] * B.counts[i];
            if (rep.witnesses.size() < opt.witness_cap) {
                std::vector<LatticePoint> w;
                for (int k = 0; k < la; ++k)
                    w.push_back(pts.points[A.pool[A.exemplar[*j] + std::size_t(k)]]);
                for (int k = 0; k < lb; ++k)
                    w.push_back(pts.points[B.pool[B.exemplar[i] + std::size_t(k)]]);
                rep.witnesses.push_back(std::move(w));
            }
        }
        global_min = std::min(global_min, mitm::nearest_nonzero_sq(A, -B.xs[i], -B.ys[i]));
    }
    rep.min_nonzero_norm_sq = detail::narrow_min_gap(global_min);
    return rep;
}

inline CorrelationReport quasi_correlations(const LatticePointSet& pts, int l, double K,
                                            const CorrelationOptions& opt = {}) {
    detail::check_correlation_pre(pts, l, opt);
    if (!(K > 0.0)) throw std::invalid_argument("quasi_correlations: K must be positive");
    int la = (l + 1) / 2, lb = l / 2;
    auto A = mitm::build_sum_table(pts.points, la, opt.witness_cap > 0);
    mitm::SumTable Bstore;
    if (la != lb) Bstore = mitm::build_sum_table(pts.points, lb, opt.witness_cap > 0);
    const mitm::SumTable& B = (la != lb) ? Bstore : A;

    CorrelationReport rep;
    rep.n = pts.n;
    rep.l = l;
    rep.quasi = true;
    rep.K = K;
    u128 cap = detail::quasi_cap(K);
    i64 w = i64(std::min(4.0e18L, std::ceil(std::sqrt((long double)cap)))) + 1;

    u128 global_min = ~u128(0);
    for (std::size_t i = 0; i < B.size(); ++i) {
        i64 tx = -B.xs[i], ty = -B.ys[i];
        auto lo_it = std::lower_bound(A.xs.begin(), A.xs.end(), tx >= INT64_MIN + w ? tx - w : INT64_MIN);
        for (auto it = lo_it; it != A.xs.end() && *it <= (tx <= INT64_MAX - w ? tx + w : INT64_MAX);) {
            i64 x = *it;
            auto [slo, shi] = A.stripe(x);
            u128 dx2 = u128(i128(x - tx) * (x - tx));
            auto ylo = std::lower_bound(A.ys.begin() + long(slo), A.ys.begin() + long(shi),
                                        ty >= INT64_MIN + w ? ty - w : INT64_MIN);
            auto yhi = std::upper_bound(A.ys.begin() + long(slo), A.ys.begin() + long(shi),
                                        ty <= INT64_MAX - w ? ty + w : INT64_MAX);
            for (auto yit = ylo; yit != yhi; ++yit) {
                std::size_t j = std::size_t(yit - A.ys.begin());
                u128 d2 = dx2 + u128(i128(*yit - ty) * (*yit - ty));
                if (d2 > 0 && d2 <= cap) {
                    rep.count += A.counts[j] * B.counts[i];
                    if (rep.witnesses.size() < opt.witness_cap) {
                        std::vector<LatticePoint> wt;
                        for (int k = 0; k < la; ++k)
                            wt.push_back(pts.points[A.pool[A.exemplar[j] + std::size_t(k)]]);
                        for (int k = 0; k < lb; ++k)
                            wt.push_back(pts.points[B.pool[B.exemplar[i] + std::size_t(k)]]);
                        rep.witnesses.push_back(std::move(wt));
                    }
                }
            }
            it = A.xs.begin() + long(shi);
        }
        global_min = std::min(global_min, mitm::nearest_nonzero_sq(A, tx, ty));
    }
    rep.min_nonzero_norm_sq = detail::narrow_min_gap(global_min);
    return rep;
}

// min |sum|^2 over nonzero l-tuple sums; never 0
inline u64 min_gap(const LatticePointSet& pts, int l, const CorrelationOptions& opt = {}) {
    detail::check_correlation_pre(pts, l, opt);
    int la = (l + 1) / 2, lb = l / 2;
    auto A = mitm::build_sum_table(pts.points, la, false);
    mitm::SumTable Bstore;
    if (la != lb) Bstore = mitm::build_sum_table(pts.points, lb, false);
    const mitm::SumTable& B = (la != lb) ? Bstore : A;
    u128 best = ~u128(0);
    for (std::size_t i = 0; i < B.size(); ++i)
        best = std::min(best, mitm::nearest_nonzero_sq(A, -B.xs[i], -B.ys[i]));
    return detail::narrow_min_gap(best);
}

// ---------------------------------------------------------------------------
// Exponent recursion c(l, eps): c(2) = log 2 + eps, c(3) = (3/2) log 2 + eps,
// c(l) = (l/2) log 2 + c(floor(l/2)) + eps. Natural logarithm.
// ---------------------------------------------------------------------------

inline double c_exponent(int l, double epsilon) {
    if (l < 2) throw std::invalid_argument("c_exponent: l must be >= 2");
    if (epsilon < 0) throw std::invalid_argument("c_exponent: epsilon must be >= 0");
    const double log2 = std::log(2.0);
    if (l == 2) return log2 + epsilon;
    if (l == 3) return 1.5 * log2 + epsilon;
    return 0.5 * double(l) * log2 + c_exponent(l / 2, epsilon) + epsilon;
}

// ---------------------------------------------------------------------------
// Census over n in S' up to X.
// ---------------------------------------------------------------------------

struct ThresholdExplicit { double K; };
struct ThresholdTheorem1 { double epsilon; };       // K = sqrt(n) / (log n)^c(l,eps)
struct ThresholdFraction { double fraction; };      // K = fraction * sqrt(n)
using ThresholdRule = std::variant<ThresholdExplicit, ThresholdTheorem1, ThresholdFraction>;

struct CensusRow {
    u64 n = 0;
    u64 N = 0;
    int l = 0;
    double K = 0.0;
    u64 min_gap_sq = 0;
    u64 count = 0;
    bool nonempty = false;
    std::string flag;   // nonempty when the row hit a resource error
};

struct CensusOptions {
    bool include_one = false; // n = 1 satisfies the S' condition vacuously
    CorrelationOptions corr;
};

inline double census_threshold(u64 n, int l, const ThresholdRule& rule) {
    double sq = std::sqrt(double(n));
    if (std::holds_alternative<ThresholdExplicit>(rule))
        return std::get<ThresholdExplicit>(rule).K;
    if (std::holds_alternative<ThresholdFraction>(rule))
        return std::get<ThresholdFraction>(rule).fraction * sq;
    double c = c_exponent(l, std::get<ThresholdTheorem1>(rule).epsilon);
    double ln = std::log(double(n));
    if (ln <= 0.0) return std::numeric_limits<double>::infinity();
    return sq / std::pow(ln, c);
}

inline std::vector<CensusRow> census(u64 X, int l, const ThresholdRule& rule,
                                     const CensusOptions& opt = {}) {
    auto sp = enumerate_S_prime(X);
    std::vector<u64> ns;
    for (u64 n : sp.values) {
        if (n == 1 && !opt.include_one) continue;
        ns.push_back(n);
    }
    std::vector<CensusRow> rows(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) {
        u64 n = ns[i];
        CensusRow row;
        row.n = n;
        row.l = l;
        row.K = census_threshold(n, l, rule);
        try {
            auto pts = lattice_points(n);
            row.N = pts.count();
            CorrelationOptions c = opt.corr;
            c.witness_cap = 0;
            auto rep = quasi_correlations(pts, l, row.K, c);
            row.min_gap_sq = rep.min_nonzero_norm_sq;
            row.count = rep.count;
            row.nonempty = rep.count > 0;
        } catch (const ResourceError& e) {
            row.flag = e.what();
        }
        rows[i] = row;
    });
    return rows;
}

inline std::string census_csv(const std::vector<CensusRow>& rows) {
    std::string out = "n,N,l,K,min_gap_sq,count,nonempty\n";
    for (const auto& r : rows) {
        out += std::to_string(r.n) + "," + std::to_string(r.N) + "," + std::to_string(r.l) +
               "," + to_string_roundtrip(r.K) + "," + std::to_string(r.min_gap_sq) + "," +
               std::to_string(r.count) + "," + (r.nonempty ? "1" : "0");
        if (!r.flag.empty()) out += ",flag=" + r.flag;
        out += "\n";
    }
    return out;
}

} // namespace arithwave
