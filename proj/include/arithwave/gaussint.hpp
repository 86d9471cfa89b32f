#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "arithwave/core.hpp"

namespace arithwave {

// ---------------------------------------------------------------------------
// Gaussian integers z = re + im*i with overflow-checked arithmetic.
//
// Coordinates are 64-bit; norms are tracked in 128-bit so that constructed
// integers up to ~1e20 (coordinates up to ~1e10) stay exact. kNormBound is
// the configured width bound: operations whose result would exceed it throw.
// ---------------------------------------------------------------------------

inline constexpr i128 kNormBound = i128(1000000000000000000LL) * 1000; // 1e21

struct GaussianInt {
    i64 re = 0;
    i64 im = 0;

    i128 norm() const { return i128(re) * re + i128(im) * im; }

    GaussianInt conj() const { return {re, -im}; }
    GaussianInt operator-() const { return {-re, -im}; }

    GaussianInt operator*(const GaussianInt& o) const {
        i128 r = i128(re) * o.re - i128(im) * o.im;
        i128 m = i128(re) * o.im + i128(im) * o.re;
        GaussianInt out{check_fit(r), check_fit(m)};
        if (out.norm() > kNormBound)
            throw std::out_of_range("gaussian product norm exceeds width bound");
        return out;
    }

    // multiplication by i^k
    GaussianInt rotated(int k) const {
        switch (((k % 4) + 4) % 4) {
            case 0: return *this;
            case 1: return {-im, re};
            case 2: return {-re, -im};
            default: return {im, -re};
        }
    }

    bool operator==(const GaussianInt&) const = default;

private:
    static i64 check_fit(i128 v) {
        if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
            throw std::out_of_range("gaussian coordinate overflow");
        return i64(v);
    }
};

// ---------------------------------------------------------------------------
// 64-bit primality (deterministic Miller-Rabin) and Pollard rho (Brent).
// ---------------------------------------------------------------------------

namespace detail {

inline u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

inline u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline bool miller_rabin(u64 n, u64 a) {
    if (n % a == 0) return n == a;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace detail

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    // deterministic base set for 64-bit integers
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (!detail::miller_rabin(n, a)) return false;
    }
    return true;
}

namespace detail {

// Brent's cycle variant; the constant sequence c = 1, 2, 3, ... makes the
// outcome a pure function of n.
inline u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 saved_x = x;
        int power = 1, lam = 0;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        while (d == 1) {
            if (lam == power) { saved_x = y; power *= 2; lam = 0; }
            y = f(y);
            ++lam;
            u64 diff = saved_x > y ? saved_x - y : y - saved_x;
            if (diff == 0) break;
            d = std::gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

inline void factor_u64(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) { out.push_back(n); return; }
    u64 d = pollard_rho(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

} // namespace detail

// ---------------------------------------------------------------------------
// split_prime: the unique (a, b) with a^2 + b^2 = p and a > b > 0 for a prime
// p = 1 (mod 4). A square root of -1 mod p is found from the smallest
// quadratic non-residue, then reduced by the Hermite-Serret descent.
// ---------------------------------------------------------------------------

inline GaussianInt split_prime(u64 p) {
    if (p % 4 != 1 || !is_prime(p))
        throw std::invalid_argument("split_prime requires a prime p = 1 (mod 4)");
    // smallest quadratic non-residue d; x = d^((p-1)/4) satisfies x^2 = -1
    u64 x = 0;
    for (u64 d = 2;; ++d) {
        if (detail::powmod(d, (p - 1) / 2, p) == p - 1) {
            x = detail::powmod(d, (p - 1) / 4, p);
            break;
        }
    }
    if (x > p - x) x = p - x;
    // descend the Euclidean remainder sequence until below sqrt(p)
    u64 a = p, b = x;
    u64 sq = u64(std::sqrt(double(p)));
    while (sq * sq > p) --sq;
    while ((sq + 1) * (sq + 1) <= p) ++sq;
    while (b * b > p) {
        u64 r = a % b;
        a = b;
        b = r;
    }
    u64 s = b, t = a % b;
    if (s < t) std::swap(s, t);
    if (s * s + t * t != p)
        throw std::logic_error("two-square descent failed");
    return GaussianInt{i64(s), i64(t)};
}

// ---------------------------------------------------------------------------
// SplitFactorization: n = 2^alpha2 * prod p^alpha * prod q^beta over Z[i],
// with the canonical norm-p Gaussian prime for every split p.
// ---------------------------------------------------------------------------

struct SplitEntry {
    u64 p = 0;       // prime = 1 (mod 4)
    int alpha = 0;   // exponent
    GaussianInt prime; // canonical: re > im > 0, norm = p
};

struct InertEntry {
    u64 q = 0;       // prime = 3 (mod 4)
    int beta = 0;    // exponent
};

struct SplitFactorization {
    i128 n = 1;
    int alpha2 = 0;
    std::vector<SplitEntry> split;  // ascending p
    std::vector<InertEntry> inert;  // ascending q

    bool in_S() const {
        for (const auto& e : inert)
            if (e.beta % 2 != 0) return false;
        return true;
    }
    bool in_S_prime() const { return alpha2 == 0 && inert.empty() && n >= 1; }

    u64 point_count() const {
        if (!in_S()) return 0;
        u64 c = 4;
        for (const auto& e : split) c *= u64(e.alpha + 1);
        return c;
    }
};

inline constexpr u64 kFactorizeBound = u64(1) << 62;

inline SplitFactorization factorize(u64 n) {
    if (n < 1 || n >= kFactorizeBound)
        throw std::out_of_range("factorize: n outside [1, 2^62)");
    SplitFactorization f;
    f.n = i128(n);
    u64 m = n;
    while (m % 2 == 0) { ++f.alpha2; m /= 2; }
    // trial division below 1e6, Pollard rho beyond
    std::vector<u64> primes;
    for (u64 d = 3; d * d <= m && d < 1000000; d += 2) {
        while (m % d == 0) { primes.push_back(d); m /= d; }
    }
    if (m > 1) detail::factor_u64(m, primes);
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size();) {
        std::size_t j = i;
        while (j < primes.size() && primes[j] == primes[i]) ++j;
        u64 p = primes[i];
        int e = int(j - i);
        if (p % 4 == 1)
            f.split.push_back({p, e, split_prime(p)});
        else
            f.inert.push_back({p, e});
        i = j;
    }
    return f;
}

// Builds the factorization of n = prod p^e for given split primes, without
// factorizing; used for constructed integers beyond the 64-bit range.
inline SplitFactorization make_split_factorization(const std::vector<std::pair<u64, int>>& pe) {
    SplitFactorization f;
    for (auto [p, e] : pe) {
        if (e < 1) throw std::invalid_argument("make_split_factorization: exponent must be positive");
        f.split.push_back({p, e, split_prime(p)});
        for (int i = 0; i < e; ++i) {
            f.n *= i128(p);
            if (f.n > kNormBound)
                throw std::out_of_range("constructed n exceeds width bound");
        }
    }
    std::sort(f.split.begin(), f.split.end(),
              [](const SplitEntry& a, const SplitEntry& b) { return a.p < b.p; });
    for (std::size_t i = 1; i < f.split.size(); ++i)
        if (f.split[i].p == f.split[i - 1].p)
            throw std::invalid_argument("make_split_factorization: repeated prime");
    return f;
}

// ---------------------------------------------------------------------------
// Lattice points: all (x, y) with x^2 + y^2 = n, sorted by angle in [0,1).
// ---------------------------------------------------------------------------

struct LatticePoint {
    i64 x = 0;
    i64 y = 0;
    bool operator==(const LatticePoint&) const = default;
};

struct LatticePointSet {
    i128 n = 0;
    std::vector<LatticePoint> points; // sorted by angle, matching `angles`
    std::vector<double> angles;       // theta in [0,1), ascending

    u64 count() const { return points.size(); }
};

inline double point_angle(i64 x, i64 y) {
    double t = std::atan2(double(y), double(x)) / kTwoPi;
    if (t < 0) t += 1.0;
    if (t >= 1.0) t = 0.0;
    return t;
}

inline LatticePointSet lattice_points(const SplitFactorization& f) {
    LatticePointSet set;
    set.n = f.n;
    if (!f.in_S()) return set;

    // common factor Z^alpha2 * prod Q^(beta/2): rotates every representation
    GaussianInt common{1, 0};
    for (int i = 0; i < f.alpha2; ++i) common = common * GaussianInt{1, 1};
    for (const auto& e : f.inert) {
        GaussianInt q{i64(e.q), 0};
        for (int i = 0; i < e.beta / 2; ++i) common = common * q;
    }

    std::vector<GaussianInt> reps{common};
    for (const auto& e : f.split) {
        std::vector<GaussianInt> next;
        next.reserve(reps.size() * (e.alpha + 1));
        for (int g = 0; g <= e.alpha; ++g) {
            GaussianInt w{1, 0};
            for (int i = 0; i < g; ++i) w = w * e.prime;
            for (int i = g; i < e.alpha; ++i) w = w * e.prime.conj();
            for (const auto& r : reps) next.push_back(r * w);
        }
        reps = std::move(next);
    }

    set.points.reserve(reps.size() * 4);
    for (const auto& r : reps)
        for (int k = 0; k < 4; ++k) {
            GaussianInt z = r.rotated(k);
            set.points.push_back({z.re, z.im});
        }

    set.angles.resize(set.points.size());
    std::vector<std::size_t> order(set.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<double> raw(set.points.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i] = point_angle(set.points[i].x, set.points[i].y);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return raw[a] < raw[b];
    });
    std::vector<LatticePoint> sorted(set.points.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        sorted[i] = set.points[order[i]];
        set.angles[i] = raw[order[i]];
    }
    set.points = std::move(sorted);
    return set;
}

inline LatticePointSet lattice_points(u64 n) { return lattice_points(factorize(n)); }

inline u64 r2_count(u64 n) { return factorize(n).point_count(); }

// ---------------------------------------------------------------------------
// S' = {n : p | n implies p = 1 (mod 4)}, enumerated by sieve. n = 1 satisfies
// the condition vacuously; it is included and flagged so consumers can drop it.
// ---------------------------------------------------------------------------

struct SPrimeList {
    std::vector<u64> values;  // ascending; values[0] == 1 when includes_one
    bool includes_one = false;
};

inline SPrimeList enumerate_S_prime(u64 X) {
    if (X < 1) throw std::out_of_range("enumerate_S_prime: X must be >= 1");
    if (X > 100000000ULL) throw ResourceError("enumerate_S_prime: sieve budget is 1e8");
    SPrimeList out;
    out.includes_one = true;
    out.values.push_back(1);
    // n is in S' iff n is odd and no prime q = 3 (mod 4) divides it
    std::vector<bool> composite(X + 1, false);
    std::vector<bool> good(X + 1, true);
    for (u64 m = 2; m <= X; m += 2) good[m] = false;
    for (u64 p = 2; p <= X; ++p) {
        if (composite[p]) continue;
        if (p * p <= X)
            for (u64 m = p * p; m <= X; m += p) composite[m] = true;
        if (p % 4 == 3)
            for (u64 m = p; m <= X; m += p) good[m] = false;
    }
    for (u64 nn = 2; nn <= X; ++nn)
        if (good[nn]) out.values.push_back(nn);
    return out;
}

} // namespace arithwave
