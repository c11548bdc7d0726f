#ifndef STBILL_RANDOM_HPP
#define STBILL_RANDOM_HPP

// Seeded generators for random sunbursts, weaves and polygons.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "stbill/exact.hpp"
#include "stbill/tilings.hpp"
#include "stbill/weave.hpp"

namespace stbill {

using Rng = std::mt19937_64;

/// Sorted angles whose consecutive gaps lie in [min_gap, max_gap].
inline std::vector<double> random_gaps_angles(Rng& rng, std::size_t n, double min_gap, double max_gap) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::exponential_distribution<double> E(1.0);
    for (;;) {
        std::vector<double> g(n);
        double sum = 0.0;
        for (auto& x : g) sum += (x = E(rng) + 0.3);
        bool ok = true;
        for (auto& x : g) {
            x *= two_pi / sum;
            ok = ok && x >= min_gap && x <= max_gap;
        }
        if (!ok) continue;
        std::vector<double> ang(n);
        double a = two_pi * U(rng);
        for (std::size_t k = 0; k < n; ++k) {
            ang[k] = a;
            a += g[k];
        }
        return ang;
    }
}

inline Sunburst<double> random_sunburst(Rng& rng, std::size_t n) {
    double step = two_pi / double(n);
    return sunburst_from_angles(random_gaps_angles(rng, n, 0.15 * step, std::min(0.9 * M_PI, 2.5 * step)));
}

/// Unit directions summing to zero, counterclockwise: the edge directions
/// of a random convex unit-equilateral polygon.
inline std::vector<double> random_balanced_angles(Rng& rng, std::size_t n) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    const double step = two_pi / double(n);
    for (;;) {
        double phase = two_pi * U01(rng);
        std::vector<double> ang(n);
        for (std::size_t k = 0; k < n; ++k) ang[k] = phase + step * double(k) + 0.42 * step * U(rng);
        // Gauss-Newton with minimum-norm steps onto sum(cos, sin) = 0.
        for (int it = 0; it < 60; ++it) {
            double sx = 0, sy = 0, jxx = 0, jxy = 0, jyy = 0;
            for (double a : ang) {
                sx += std::cos(a);
                sy += std::sin(a);
                double dx = -std::sin(a), dy = std::cos(a);
                jxx += dx * dx;
                jxy += dx * dy;
                jyy += dy * dy;
            }
            if (std::hypot(sx, sy) < 1e-15) break;
            double det = jxx * jyy - jxy * jxy;
            double ux = (jyy * sx - jxy * sy) / det;
            double uy = (jxx * sy - jxy * sx) / det;
            for (double& a : ang) a -= -std::sin(a) * ux + std::cos(a) * uy;
        }
        double sx = 0, sy = 0;
        for (double a : ang) {
            sx += std::cos(a);
            sy += std::sin(a);
        }
        if (std::hypot(sx, sy) > 1e-14) continue;
        bool ok = true;
        for (std::size_t k = 0; k < n; ++k) {
            double gap = ang[(k + 1) % n] - ang[k] + (k + 1 == n ? two_pi : 0.0);
            ok = ok && gap > 0.1 * step && gap < M_PI - 0.05;
        }
        if (ok) return ang;
    }
}

inline Sunburst<double> random_balanced_sunburst(Rng& rng, std::size_t n) {
    return sunburst_from_angles(random_balanced_angles(rng, n));
}

/// Random pair with B rotated to a phase inside the weave interval, kept
/// away from the endpoints by `margin` of its length.
inline SunburstPair random_oriented_weave(Rng& rng, std::size_t n, double margin = 0.05) {
    std::uniform_real_distribution<double> U(margin, 1.0 - margin);
    for (;;) {
        auto A = random_sunburst(rng, n);
        auto B = random_sunburst(rng, n);
        auto I = weave_interval_or_empty(A, B);
        if (I.empty() || I.length() < 1e-3) continue;
        SunburstPair p(A, B, I.lo + U(rng) * I.length());
        if (is_oriented_weave(p)) return p;
    }
}

/// Vertices of a random convex counterclockwise unit-equilateral polygon.
inline std::vector<Vec2d> random_equilateral_vertices(Rng& rng, std::size_t n) {
    auto ang = random_balanced_angles(rng, n);
    std::vector<Vec2d> v(n);
    Vec2d p{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        v[k] = p;
        p += unit_from_angle(ang[k]);
    }
    return v;
}

}  // namespace stbill

#endif
