#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "arithwave/core.hpp"

namespace arithwave {

// ---------------------------------------------------------------------------
// Marching squares over node grids. Zero crossings are located by linear
// interpolation along cell edges; ambiguous saddle cells are resolved by the
// sign of the cell-centre average. Node values that are exactly zero are
// perturbed by +1e-12 so that no vertex sits on the contour.
// ---------------------------------------------------------------------------

namespace marching {

inline double clip_to_disk(Vec2 p, Vec2 q, Vec2 center, double radius) {
    Vec2 d = q - p, u = p - center;
    double a = d.norm_sq();
    double len = std::sqrt(a);
    if (a == 0.0) return 0.0;
    double b = u.dot(d), c = u.norm_sq() - radius * radius;
    double disc = b * b - a * c;
    if (disc <= 0.0) return 0.0; // no real crossing: entirely outside (or tangent)
    double sq = std::sqrt(disc);
    double t0 = (-b - sq) / a, t1 = (-b + sq) / a;
    double lo = std::max(0.0, t0), hi = std::min(1.0, t1);
    return hi > lo ? (hi - lo) * len : 0.0;
}

inline double segment_length(Vec2 p, Vec2 q) { return (q - p).norm(); }

struct CellGeometry {
    Vec2 bottom, right, top, left; // crossing points (valid only when the edge is cut)
};

// Emits the 0, 1 or 2 contour segments of a cell with corner values
// v0 = (x,y), v1 = (x+h,y), v2 = (x+h,y+h), v3 = (x,y+h).
template <typename Emit>
inline void cell_segments(double v0, double v1, double v2, double v3,
                          double x, double y, double h, Emit&& emit) {
    if (v0 == 0.0) v0 = 1e-12;
    if (v1 == 0.0) v1 = 1e-12;
    if (v2 == 0.0) v2 = 1e-12;
    if (v3 == 0.0) v3 = 1e-12;
    int idx = (v0 > 0) | ((v1 > 0) << 1) | ((v2 > 0) << 2) | ((v3 > 0) << 3);
    if (idx == 0 || idx == 15) return;

    Vec2 bottom{x + h * (v0 / (v0 - v1)), y};
    Vec2 right{x + h, y + h * (v1 / (v1 - v2))};
    Vec2 top{x + h * (v3 / (v3 - v2)), y + h};
    Vec2 left{x, y + h * (v0 / (v0 - v3))};

    switch (idx) {
        case 1: case 14: emit(left, bottom); break;
        case 2: case 13: emit(bottom, right); break;
        case 3: case 12: emit(left, right); break;
        case 4: case 11: emit(right, top); break;
        case 6: case 9:  emit(bottom, top); break;
        case 7: case 8:  emit(left, top); break;
        case 5:
            if (v0 + v1 + v2 + v3 > 0) { emit(bottom, right); emit(left, top); }
            else { emit(left, bottom); emit(right, top); }
            break;
        case 10:
            if (v0 + v1 + v2 + v3 > 0) { emit(left, bottom); emit(right, top); }
            else { emit(bottom, right); emit(left, top); }
            break;
        default: break;
    }
}

} // namespace marching

// Total contour length inside the disk |p - center| <= radius. `values` holds
// nx * ny node samples at origin + (i, j) h, row-major in j.
inline double contour_length_disk(const std::vector<double>& values, std::size_t nx,
                                  std::size_t ny, Vec2 origin, double h, Vec2 center,
                                  double radius) {
    double total = 0.0;
    const double reach = radius + h * 1.5;
    for (std::size_t j = 0; j + 1 < ny; ++j) {
        double y = origin.y + double(j) * h;
        for (std::size_t i = 0; i + 1 < nx; ++i) {
            double x = origin.x + double(i) * h;
            double cx = x + 0.5 * h - center.x, cy = y + 0.5 * h - center.y;
            if (cx * cx + cy * cy > reach * reach) continue;
            marching::cell_segments(
                values[j * nx + i], values[j * nx + i + 1],
                values[(j + 1) * nx + i + 1], values[(j + 1) * nx + i],
                x, y, h, [&](Vec2 p, Vec2 q) {
                    total += marching::clip_to_disk(p, q, center, radius);
                });
        }
    }
    return total;
}

// Contour length over the whole unit torus: values is a G x G node grid with
// spacing 1/G and periodic wraparound.
inline double contour_length_torus(const std::vector<double>& values, std::size_t G) {
    double total = 0.0;
    const double h = 1.0 / double(G);
    for (std::size_t j = 0; j < G; ++j) {
        std::size_t jn = (j + 1) % G;
        for (std::size_t i = 0; i < G; ++i) {
            std::size_t in = (i + 1) % G;
            marching::cell_segments(
                values[j * G + i], values[j * G + in],
                values[jn * G + in], values[jn * G + i],
                double(i) * h, double(j) * h, h,
                [&](Vec2 p, Vec2 q) { total += marching::segment_length(p, q); });
        }
    }
    return total;
}

} // namespace arithwave
