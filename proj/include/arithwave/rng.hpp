#pragma once

#include <cstdint>
#include <cmath>

#include "arithwave/core.hpp"

namespace arithwave {

// Counter-based random streams: a stream is addressed by (seed, index) and is
// independent of how work is split across threads, so Monte-Carlo runs are
// reproducible for a fixed seed regardless of the pool size.
//
// Each stream is a splitmix64-initialised xoshiro256++ generator; the stream
// key is mixed through splitmix64 so that nearby (seed, index) pairs give
// unrelated states.

inline u64 splitmix64_next(u64& state) {
    u64 z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// child seed for sub-experiment `index` of a run seeded with `seed`
inline u64 splitmix_key(u64 seed, u64 index) {
    u64 st = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64_next(st);
}

class RngStream {
public:
    RngStream(u64 seed, u64 index) {
        u64 st = seed ^ (0xd1342543de82ef95ULL * (index + 1));
        for (auto& w : s_) w = splitmix64_next(st);
    }

    u64 next_u64() {
        const u64 result = rotl(s_[0] + s_[3], 23) + s_[0];
        const u64 t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double next_double() {
        return double(next_u64() >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; a spare is cached
    double next_normal() {
        if (has_spare_) { has_spare_ = false; return spare_; }
        double u1, u2;
        do { u1 = next_double(); } while (u1 <= 0.0);
        u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = kTwoPi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    bool next_bit() { return (next_u64() >> 63) != 0; }

private:
    static u64 rotl(u64 x, int k) { return (x << k) | (x >> (64 - k)); }
    u64 s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace arithwave
