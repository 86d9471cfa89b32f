#pragma once

// Independent brute-force reference implementations used only by tests.
// These deliberately avoid the library's enumeration paths so that the two
// routes cross-check each other.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using std::int64_t;
using std::uint64_t;

struct Pt {
    int64_t x, y;
};

// all (x, y) with x^2 + y^2 = n by direct scan
inline std::vector<Pt> lattice_points_brute(uint64_t n) {
    std::vector<Pt> pts;
    int64_t r = int64_t(std::sqrt(double(n)));
    while (uint64_t(r) * r > n) --r;
    while (uint64_t(r + 1) * (r + 1) <= n) ++r;
    for (int64_t x = -r; x <= r; ++x) {
        int64_t y2 = int64_t(n) - x * x;
        int64_t y = int64_t(std::sqrt(double(y2)));
        while (y * y > y2) --y;
        while ((y + 1) * (y + 1) <= y2) ++y;
        if (y * y == y2) {
            pts.push_back({x, y});
            if (y != 0) pts.push_back({x, -y});
        }
    }
    return pts;
}

// r2(n) via the divisor identity r2 = 4 (d_{1 mod 4} - d_{3 mod 4})
inline int64_t r2_divisor_oracle(uint64_t n) {
    int64_t v = 0;
    for (uint64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        uint64_t e = n / d;
        if (d % 4 == 1) v += 4;
        else if (d % 4 == 3) v -= 4;
        if (e != d) {
            if (e % 4 == 1) v += 4;
            else if (e % 4 == 3) v -= 4;
        }
    }
    return v;
}

// visits every ordered l-tuple of indices into pts
inline void for_each_tuple(std::size_t n, int l,
                           const std::function<void(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> idx(std::size_t(l), 0);
    for (;;) {
        visit(idx);
        int k = l - 1;
        while (k >= 0 && ++idx[std::size_t(k)] == n) {
            idx[std::size_t(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
}

// exact count of ordered l-tuples with zero sum
inline uint64_t spectral_corr_brute(const std::vector<Pt>& pts, int l) {
    uint64_t count = 0;
    for_each_tuple(pts.size(), l, [&](const std::vector<std::size_t>& idx) {
        int64_t sx = 0, sy = 0;
        for (auto i : idx) { sx += pts[i].x; sy += pts[i].y; }
        if (sx == 0 && sy == 0) ++count;
    });
    return count;
}

// exact count of ordered l-tuples with 0 < |sum|^2 <= cap
inline uint64_t quasi_corr_brute(const std::vector<Pt>& pts, int l, uint64_t cap) {
    uint64_t count = 0;
    for_each_tuple(pts.size(), l, [&](const std::vector<std::size_t>& idx) {
        int64_t sx = 0, sy = 0;
        for (auto i : idx) { sx += pts[i].x; sy += pts[i].y; }
        uint64_t n2 = uint64_t(sx * sx + sy * sy);
        if (n2 > 0 && n2 <= cap) ++count;
    });
    return count;
}

// min |sum|^2 over nonzero sums of ordered l-tuples
inline uint64_t min_gap_brute(const std::vector<Pt>& pts, int l) {
    uint64_t best = UINT64_MAX;
    for_each_tuple(pts.size(), l, [&](const std::vector<std::size_t>& idx) {
        int64_t sx = 0, sy = 0;
        for (auto i : idx) { sx += pts[i].x; sy += pts[i].y; }
        uint64_t n2 = uint64_t(sx * sx + sy * sy);
        if (n2 > 0 && n2 < best) best = n2;
    });
    return best;
}

// trial-division factorization (pairs p^e, ascending p)
inline std::vector<std::pair<uint64_t, int>> factor_brute(uint64_t n) {
    std::vector<std::pair<uint64_t, int>> out;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

inline bool in_S_prime_brute(uint64_t n) {
    for (auto [p, e] : factor_brute(n))
        if (p % 4 != 1) return false;
    return true;
}

} // namespace oracle
