#pragma once

#include <cstdint>
#include <cmath>
#include <string>
#include <stdexcept>
#include <charconv>
#include <array>

namespace arithwave {

using i32 = std::int32_t;
using u32 = std::uint32_t;
using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

// Thrown when a computation would exceed its configured work budget.
// The message names the bound that was hit.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by searches that exhaust their range; carries the best candidate seen.
class SearchExhausted : public std::runtime_error {
public:
    SearchExhausted(const std::string& what, double best_achieved)
        : std::runtime_error(what), best(best_achieved) {}
    double best;
};

inline std::string to_string(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 x = neg ? u128(-(v + 1)) + 1 : u128(v);
    char buf[48];
    int i = 48;
    while (x > 0) { buf[--i] = char('0' + int(x % 10)); x /= 10; }
    std::string s = neg ? "-" : "";
    s.append(buf + i, 48 - i);
    return s;
}

// Shortest round-trip decimal representation of a double.
inline std::string to_string_roundtrip(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Vec2 {
    double x = 0.0, y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double t) const { return {x * t, y * t}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm_sq() const { return x * x + y * y; }
    double norm() const { return std::hypot(x, y); }
};

// Symmetric 2x2 matrix stored as [a b; b c].
struct Sym2 {
    double a = 0.0, b = 0.0, c = 0.0;

    double trace() const { return a + c; }
    Sym2 operator+(const Sym2& o) const { return {a + o.a, b + o.b, c + o.c}; }
    Sym2 operator*(double t) const { return {a * t, b * t, c * t}; }
    // product of two symmetric matrices is not symmetric in general;
    // we only ever need traces of products, see below.
};

// tr(AB) for symmetric A, B.
inline double trace_prod(const Sym2& A, const Sym2& B) {
    return A.a * B.a + 2.0 * A.b * B.b + A.c * B.c;
}
// A*A as a symmetric matrix (square of symmetric is symmetric).
inline Sym2 square(const Sym2& A) {
    return {A.a * A.a + A.b * A.b, A.b * (A.a + A.c), A.b * A.b + A.c * A.c};
}

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

} // namespace arithwave
