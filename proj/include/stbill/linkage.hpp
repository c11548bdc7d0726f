#ifndef STBILL_LINKAGE_HPP
#define STBILL_LINKAGE_HPP

// Convex equilateral polygons to convex equiangular polygons through the
// sunburst of edge directions and the closing phase of a regular sunburst.

#include <cmath>
#include <vector>

#include "stbill/error.hpp"
#include "stbill/exact.hpp"
#include "stbill/tilings.hpp"
#include "stbill/weave.hpp"

namespace stbill {

struct Polygon {
    std::vector<Vec2d> vertices;

    std::size_t size() const { return vertices.size(); }
    const Vec2d& vertex(std::size_t k) const { return vertices[k % vertices.size()]; }
    Vec2d edge(std::size_t k) const { return vertex(k + 1) - vertex(k); }
};

inline double signed_area(const Polygon& P) {
    double a = 0.0;
    for (std::size_t k = 0; k < P.size(); ++k) a += cross(P.vertex(k), P.vertex(k + 1));
    return 0.5 * a;
}

/// Strictly convex and counterclockwise: every turn is a left turn and the
/// edges wind once.
inline bool is_convex(const Polygon& P) {
    const std::size_t n = P.size();
    if (n < 3) return false;
    double turning = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        Vec2d e = P.edge(k), f = P.edge(k + 1);
        if (!(cross(e, f) > 0.0)) return false;
        turning += std::atan2(cross(e, f), dot(e, f));
    }
    return std::abs(turning - two_pi) < 1e-6;
}

inline bool is_equilateral(const Polygon& P, double tol = 1e-12) {
    for (std::size_t k = 0; k < P.size(); ++k)
        if (std::abs(norm(P.edge(k)) - 1.0) > tol) return false;
    return true;
}

/// Interior angle at vertex k.
inline double interior_angle(const Polygon& P, std::size_t k) {
    Vec2d e = P.edge(k + P.size() - 1), f = P.edge(k);
    return M_PI - std::atan2(cross(e, f), dot(e, f));
}

inline void require_convex_equilateral(const Polygon& P) {
    if (!is_convex(P)) throw Error(ErrorKind::not_convex, "polygon is not strictly convex and counterclockwise");
    if (!is_equilateral(P)) throw Error(ErrorKind::not_equilateral, "polygon edges are not all of unit length");
}

/// Sunburst generated by the edge directions V_k = v_{k+1} - v_k.
inline Sunburst<double> directions_to_sunburst(const Polygon& P) {
    require_convex_equilateral(P);
    std::vector<Vec2d> rays(P.size());
    for (std::size_t k = 0; k < P.size(); ++k) rays[k] = P.edge(k);
    return Sunburst<double>(std::move(rays));
}

struct EquiangularResult {
    Polygon polygon;          // closed orbit, vertex k on ray k of the direction sunburst
    double phase = 0.0;       // rotation applied to the regular sunburst
    double log_h = 0.0;
    double closure_residual = 0.0;
};

/// The equiangular polygon inscribed in the direction sunburst of P, with
/// its first vertex at distance r0 along the first ray.
inline EquiangularResult equilateral_to_equiangular(const Polygon& P, double r0 = 1.0, double tol = 1e-12) {
    auto A = directions_to_sunburst(P);
    auto B = regular_sunburst(P.size());
    auto sol = solve_phase_detailed(A, B, tol);
    SunburstPair pair(A, B, sol.theta);
    auto pts = orbit_sunburst(pair, r0, P.size());
    EquiangularResult out;
    out.phase = sol.theta;
    out.log_h = sol.log_h;
    out.closure_residual = norm(pts.back() - pts.front());
    pts.pop_back();
    out.polygon.vertices = std::move(pts);
    return out;
}

}  // namespace stbill

#endif
