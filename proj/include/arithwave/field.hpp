#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "arithwave/core.hpp"
#include "arithwave/gaussint.hpp"
#include "arithwave/rng.hpp"

namespace arithwave {

// ---------------------------------------------------------------------------
// Gaussian harmonic fields f(x) = sum_k A_k cos(2 pi <w_k, x>) + B_k sin(...).
// Both field families reduce to this form:
//
//   ARW  f_n(x) = (1/sqrt N) sum_xi a_xi e(<xi, x>),  conj(a_xi) = a_{-xi}
//        over one representative per antipodal pair with a = (u + iv)/sqrt 2:
//        f = sqrt(2/N) sum_half (u cos - v sin), unit pointwise variance.
//
//   BRW  M equispaced unit directions (the M-th roots of unity) with 2M
//        standard normal coefficients and normalisation 1/sqrt(M), so the
//        covariance tends to J0(2 pi |x-y|) as M grows.
// ---------------------------------------------------------------------------

struct FieldJet {
    double value = 0.0;
    Vec2 grad;
    Sym2 hess;
};

struct HarmonicField {
    std::vector<Vec2> waves;  // w_k
    std::vector<double> A, B;

    double value(Vec2 x) const {
        double f = 0.0;
        for (std::size_t k = 0; k < waves.size(); ++k) {
            double phase = kTwoPi * waves[k].dot(x);
            f += A[k] * std::cos(phase) + B[k] * std::sin(phase);
        }
        return f;
    }

    FieldJet jet(Vec2 x) const {
        FieldJet j;
        for (std::size_t k = 0; k < waves.size(); ++k) {
            double phase = kTwoPi * waves[k].dot(x);
            double c = std::cos(phase), s = std::sin(phase);
            double f = A[k] * c + B[k] * s;
            double d = -A[k] * s + B[k] * c; // d f / d phase
            j.value += f;
            j.grad.x += kTwoPi * waves[k].x * d;
            j.grad.y += kTwoPi * waves[k].y * d;
            double q = -kTwoPi * kTwoPi * f;
            j.hess.a += q * waves[k].x * waves[k].x;
            j.hess.b += q * waves[k].x * waves[k].y;
            j.hess.c += q * waves[k].y * waves[k].y;
        }
        return j;
    }

    // values on the grid x = x0 + i h, y = y0 + j h, row-major [j][i]
    std::vector<double> grid(Vec2 origin, double h, std::size_t nx, std::size_t ny) const {
        std::vector<double> out(nx * ny, 0.0);
        std::vector<double> wr(nx), wi(nx), zr(ny), zi(ny);
        for (std::size_t k = 0; k < waves.size(); ++k) {
            // split the phase into row and column parts; C = A - iB gives
            // A cos + B sin = Re(C e^{i phase})
            double cr = A[k], ci = -B[k];
            for (std::size_t i = 0; i < nx; ++i) {
                double p = kTwoPi * waves[k].x * (origin.x + double(i) * h);
                double c = std::cos(p), s = std::sin(p);
                wr[i] = cr * c - ci * s;
                wi[i] = cr * s + ci * c;
            }
            for (std::size_t j = 0; j < ny; ++j) {
                double p = kTwoPi * waves[k].y * (origin.y + double(j) * h);
                zr[j] = std::cos(p);
                zi[j] = std::sin(p);
            }
            for (std::size_t j = 0; j < ny; ++j) {
                double a = zr[j], b = zi[j];
                double* row = out.data() + j * nx;
                for (std::size_t i = 0; i < nx; ++i)
                    row[i] += wr[i] * a - wi[i] * b;
            }
        }
        return out;
    }

    // rescale the argument: g(x) = f(c x)
    HarmonicField scaled_argument(double c) const {
        HarmonicField g = *this;
        for (auto& w : g.waves) w = w * c;
        return g;
    }
};

struct FieldSpec {
    enum class Kind { ARW, BRW };
    Kind kind = Kind::ARW;
    i128 n = 0;    // ARW eigenvalue
    int M = 0;     // BRW direction count
    u64 seed = 0;
    HarmonicField field;
};

// one representative per antipodal pair: y > 0, or y == 0 and x > 0
inline std::vector<LatticePoint> half_point_set(const LatticePointSet& pts) {
    std::vector<LatticePoint> half;
    for (auto p : pts.points)
        if (p.y > 0 || (p.y == 0 && p.x > 0)) half.push_back(p);
    return half;
}

inline FieldSpec sample_arw(const LatticePointSet& pts, u64 seed) {
    if (pts.points.empty())
        throw std::invalid_argument("sample_arw: n is not a sum of two squares");
    FieldSpec spec;
    spec.kind = FieldSpec::Kind::ARW;
    spec.n = pts.n;
    spec.seed = seed;
    auto half = half_point_set(pts);
    double scale = std::sqrt(2.0 / double(pts.count()));
    RngStream rng(seed, 0);
    for (auto p : half) {
        double u = rng.next_normal(), v = rng.next_normal();
        spec.field.waves.push_back({double(p.x), double(p.y)});
        spec.field.A.push_back(scale * u);
        spec.field.B.push_back(-scale * v);
    }
    return spec;
}

inline FieldSpec sample_arw(u64 n, u64 seed) { return sample_arw(lattice_points(n), seed); }

inline FieldSpec sample_brw(int M, u64 seed) {
    if (M < 16) throw std::invalid_argument("sample_brw: M must be >= 16");
    FieldSpec spec;
    spec.kind = FieldSpec::Kind::BRW;
    spec.M = M;
    spec.seed = seed;
    double scale = std::sqrt(1.0 / double(M));
    RngStream rng(seed, 0);
    for (int j = 0; j < M; ++j) {
        double a = kTwoPi * double(j) / double(M);
        spec.field.waves.push_back({std::cos(a), std::sin(a)});
        spec.field.A.push_back(scale * rng.next_normal());
        spec.field.B.push_back(scale * rng.next_normal());
    }
    return spec;
}

} // namespace arithwave
