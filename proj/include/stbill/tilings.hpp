#ifndef STBILL_TILINGS_HPP
#define STBILL_TILINGS_HPP

// The two tiling families: lattice (square) grids and sunbursts.
//
// A tiling exposes
//   scalar_type, edge_type
//   edge_direction(edge)          direction vector of an edge
//   edge_directions()             the finite set of edge directions
//   first_hit(start, travel, from) first edge met by the open ray
//   contains(point, edge)         incidence test
//   reduce(particle)              lattice reduction used by drift detection

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "stbill/error.hpp"
#include "stbill/exact.hpp"

namespace stbill {

enum class HitStatus { hit, vertex, escaped };

inline const char* to_string(HitStatus s) {
    switch (s) {
        case HitStatus::hit: return "hit";
        case HitStatus::vertex: return "vertex";
        case HitStatus::escaped: return "escaped";
    }
    return "?";
}

template <class T, class Edge>
struct Hit {
    HitStatus status = HitStatus::escaped;
    Vec2<T> point{};
    Edge edge{};
};

/// A point on the interior of an edge together with a transverse
/// direction selecting one of the two adjacent tiles.
template <class T, class Edge>
struct Particle {
    Vec2<T> point;
    Edge edge;
    Vec2<T> direction;

    friend bool operator==(const Particle& a, const Particle& b) {
        return a.edge == b.edge && a.point == b.point && a.direction == b.direction;
    }
};

// ---------------------------------------------------------------------------
// Lattice grids

enum class GridAxis : std::uint8_t { H, V };

/// Unit segment of the integer grid, in grid-local coordinates.
/// V: local x == line, local y in (cell, cell + 1).
/// H: local y == line, local x in (cell, cell + 1).
struct GridEdge {
    GridAxis axis = GridAxis::V;
    std::int64_t line = 0;
    std::int64_t cell = 0;

    friend bool operator==(const GridEdge&, const GridEdge&) = default;
};

/// Integer-translation offset of a grid particle: (cell, line) or
/// (line, cell) in local coordinates depending on the axis.
struct LatticeOffset {
    std::int64_t i = 0;
    std::int64_t j = 0;
    friend bool operator==(const LatticeOffset&, const LatticeOffset&) = default;
    friend LatticeOffset operator-(LatticeOffset a, LatticeOffset b) { return {a.i - b.i, a.j - b.j}; }
    bool is_zero() const { return i == 0 && j == 0; }
};

/// Image of the integer grid under the linear map sending the standard
/// basis to (e1, e2). A rotated square grid has e1 = u, e2 = perp(u).
template <class T>
class SquareGrid {
public:
    using scalar_type = T;
    using edge_type = GridEdge;
    using traits = scalar_traits<T>;

    SquareGrid() : SquareGrid(Vec2<T>(T(1), T(0))) {}

    /// Standard grid multiplied by the unit complex number `rotation`.
    explicit SquareGrid(const Vec2<T>& rotation) : SquareGrid(rotation, perp(rotation)) {}

    SquareGrid(const Vec2<T>& e1, const Vec2<T>& e2) : e1_(e1), e2_(e2), det_(cross(e1, e2)) {
        if (traits::sign(det_) == 0) throw Error(ErrorKind::invalid_input, "degenerate grid frame");
    }

    static SquareGrid standard() { return SquareGrid(); }

    const Vec2<T>& e1() const { return e1_; }
    const Vec2<T>& e2() const { return e2_; }

    /// Image of this grid under the linear map with columns (c1, c2).
    SquareGrid transformed(const Vec2<T>& c1, const Vec2<T>& c2) const {
        auto apply = [&](const Vec2<T>& v) { return v.x * c1 + v.y * c2; };
        return SquareGrid(apply(e1_), apply(e2_));
    }

    Vec2<T> to_local(const Vec2<T>& p) const { return {cross(p, e2_) / det_, cross(e1_, p) / det_}; }
    Vec2<T> to_world(const Vec2<T>& q) const { return q.x * e1_ + q.y * e2_; }

    Vec2<T> edge_direction(const GridEdge& e) const { return e.axis == GridAxis::V ? e2_ : e1_; }
    std::vector<Vec2<T>> edge_directions() const { return {e1_, e2_}; }

    /// World point at local parameter `along` in (0,1) of an edge.
    Vec2<T> point_on(const GridEdge& e, const T& along) const {
        if (e.axis == GridAxis::V) return to_world({T(e.line), T(e.cell) + along});
        return to_world({T(e.cell) + along, T(e.line)});
    }

    bool contains(const Vec2<T>& p, const GridEdge& e) const {
        Vec2<T> q = to_local(p);
        const T& across = e.axis == GridAxis::V ? q.x : q.y;
        const T& along = e.axis == GridAxis::V ? q.y : q.x;
        if (!traits::near(across, T(e.line))) return false;
        if constexpr (traits::exact) {
            return along > T(e.cell) && along < T(e.cell + 1);
        } else {
            return along > double(e.cell) + traits::eps && along < double(e.cell + 1) - traits::eps;
        }
    }

    /// First grid edge met by {start + s*travel : s > 0}. Stepping happens
    /// in local coordinates, so the edge set is the integer grid. When
    /// `from` is given, the start is taken to lie exactly on that edge.
    Hit<T, GridEdge> first_hit(const Vec2<T>& start, const Vec2<T>& travel, const GridEdge* from = nullptr) const {
        Vec2<T> p = to_local(start);
        Vec2<T> v = to_local(travel);
        int sx = traits::sign(v.x);
        int sy = traits::sign(v.y);
        if (sx == 0 && sy == 0) throw Error(ErrorKind::invalid_input, "first_hit: zero travel vector");
        if (from) {
            if (from->axis == GridAxis::V) p.x = T(from->line);
            else p.y = T(from->line);
        }

        auto next_line = [&](const T& coord, int dir, bool on_line, std::int64_t line) -> std::int64_t {
            if (on_line) return line + dir;
            return dir > 0 ? traits::floor(coord) + 1 : traits::ceil(coord) - 1;
        };

        std::optional<T> tx, ty;
        std::int64_t X = 0, Y = 0;
        if (sx != 0) {
            bool on = from && from->axis == GridAxis::V;
            X = next_line(p.x, sx, on, on ? from->line : 0);
            tx = (T(X) - p.x) / v.x;
        }
        if (sy != 0) {
            bool on = from && from->axis == GridAxis::H;
            Y = next_line(p.y, sy, on, on ? from->line : 0);
            ty = (T(Y) - p.y) / v.y;
        }

        Hit<T, GridEdge> hit;
        bool cross_x = tx && (!ty || *tx <= *ty);
        Vec2<T> q;
        T along;
        if (cross_x) {
            q = {T(X), p.y + *tx * v.y};
            along = q.y;
            hit.edge = {GridAxis::V, X, 0};
        } else {
            q = {p.x + *ty * v.x, T(Y)};
            along = q.x;
            hit.edge = {GridAxis::H, Y, 0};
        }
        hit.point = to_world(q);
        std::int64_t cell = traits::floor(along);
        bool at_vertex;
        if constexpr (traits::exact) {
            at_vertex = along == T(cell);
        } else {
            double frac = along - double(cell);
            at_vertex = frac <= traits::eps || frac >= 1.0 - traits::eps;
        }
        if (at_vertex) {
            hit.status = HitStatus::vertex;
            return hit;
        }
        hit.edge.cell = cell;
        hit.status = HitStatus::hit;
        return hit;
    }

    /// Translate a particle back to the edge through the lattice origin.
    /// Returns the integer offset removed, in local coordinates.
    template <class Edge>
    LatticeOffset reduce(Particle<T, Edge>& p) const {
        LatticeOffset off = p.edge.axis == GridAxis::V ? LatticeOffset{p.edge.line, p.edge.cell}
                                                       : LatticeOffset{p.edge.cell, p.edge.line};
        p.point = p.point - to_world({T(off.i), T(off.j)});
        p.edge.line = 0;
        p.edge.cell = 0;
        return off;
    }

    /// Position of the particle inside its edge, in (0,1).
    T local_parameter(const Vec2<T>& point, const GridEdge& e) const {
        Vec2<T> q = to_local(point);
        return (e.axis == GridAxis::V ? q.y : q.x) - T(e.cell);
    }

private:
    Vec2<T> e1_, e2_;
    T det_;
};

// ---------------------------------------------------------------------------
// Sunbursts

struct RayEdge {
    std::size_t index = 0;
    friend bool operator==(const RayEdge&, const RayEdge&) = default;
};

namespace detail {
// 0 for directions in [0, pi), 1 for [pi, 2pi).
template <class T>
int half_plane(const Vec2<T>& v) {
    using tr = scalar_traits<T>;
    return (tr::sign(v.y) > 0 || (tr::sign(v.y) == 0 && tr::sign(v.x) > 0)) ? 0 : 1;
}
template <class T>
bool angle_less(const Vec2<T>& a, const Vec2<T>& b) {
    int ha = half_plane(a), hb = half_plane(b);
    if (ha != hb) return ha < hb;
    return scalar_traits<T>::sign(cross(a, b)) > 0;
}
}  // namespace detail

/// N >= 3 rays from the origin, counterclockwise, each consecutive pair
/// turning by less than pi, winding exactly once.
template <class T>
class Sunburst {
public:
    using scalar_type = T;
    using edge_type = RayEdge;
    using traits = scalar_traits<T>;

    explicit Sunburst(std::vector<Vec2<T>> rays) : rays_(std::move(rays)) {
        if (auto why = invalid_reason(rays_)) throw Error(ErrorKind::invalid_input, "sunburst: " + *why);
    }

    static std::optional<std::string> invalid_reason(const std::vector<Vec2<T>>& rays) {
        const std::size_t n = rays.size();
        if (n < 3) return "needs at least 3 rays";
        std::size_t wraps = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = rays[i];
            const auto& b = rays[(i + 1) % n];
            if (traits::sign(a.x) == 0 && traits::sign(a.y) == 0) return "zero ray";
            T c = cross(a, b);
            bool positive;
            if constexpr (traits::exact) positive = c.sign() > 0;
            else positive = c > 1e-14 * norm(a) * norm(b);
            if (!positive) return "consecutive rays must turn counterclockwise by less than pi";
            if (!detail::angle_less(a, b)) ++wraps;
        }
        if (wraps != 1) return "rays must wind around the origin exactly once";
        return std::nullopt;
    }

    static bool is_valid(const std::vector<Vec2<T>>& rays) { return !invalid_reason(rays); }

    std::size_t size() const { return rays_.size(); }
    const std::vector<Vec2<T>>& rays() const { return rays_; }
    const Vec2<T>& ray(std::size_t k) const { return rays_[k % rays_.size()]; }

    Vec2<T> edge_direction(const RayEdge& e) const { return rays_[e.index]; }
    std::vector<Vec2<T>> edge_directions() const { return rays_; }

    bool contains(const Vec2<T>& p, const RayEdge& e) const {
        const auto& r = rays_[e.index];
        if (traits::sign(dot(p, r)) <= 0) return false;
        if constexpr (traits::exact) return cross(r, p) == T(0);
        else return std::abs(cross(r, p)) <= traits::eps * norm(r) * std::max(1.0, norm(p));
    }

    /// Candidate scan over every ray: smallest s > 0 with start + s*travel
    /// on an open ray. Passing through the origin is a vertex hit.
    Hit<T, RayEdge> first_hit(const Vec2<T>& start, const Vec2<T>& travel, const RayEdge* from = nullptr) const {
        if (traits::sign(travel.x) == 0 && traits::sign(travel.y) == 0)
            throw Error(ErrorKind::invalid_input, "first_hit: zero travel vector");
        Hit<T, RayEdge> best;
        std::optional<T> best_s;
        bool best_vertex = false;
        for (std::size_t k = 0; k < rays_.size(); ++k) {
            if (from && from->index == k) continue;
            const auto& r = rays_[k];
            T den = cross(travel, r);
            if (traits::sign(den) == 0) continue;
            T s = -cross(start, r) / den;
            T radius = cross(start, travel) / cross(r, travel);
            bool forward, vertex;
            if constexpr (traits::exact) {
                forward = s.sign() > 0;
                vertex = radius.sign() == 0;
            } else {
                forward = s > traits::eps * 1e-3;
                vertex = std::abs(radius) * norm(r) <= traits::eps * std::max(1.0, norm(start));
            }
            if (!forward || (!vertex && traits::sign(radius) < 0)) continue;
            if (!best_s || s < *best_s) {
                best_s = s;
                best.point = start + s * travel;
                best.edge = {k};
                best_vertex = vertex;
            }
        }
        if (!best_s) {
            best.status = HitStatus::escaped;
        } else {
            best.status = best_vertex ? HitStatus::vertex : HitStatus::hit;
        }
        return best;
    }

    template <class Edge>
    LatticeOffset reduce(Particle<T, Edge>&) const { return {}; }

    /// Distance along the ray in units of the ray vector.
    T local_parameter(const Vec2<T>& point, const RayEdge& e) const {
        return dot(point, rays_[e.index]) / norm2(rays_[e.index]);
    }

private:
    std::vector<Vec2<T>> rays_;
};

/// Sunburst from ray angles in radians.
inline Sunburst<double> sunburst_from_angles(const std::vector<double>& angles) {
    std::vector<Vec2d> rays;
    rays.reserve(angles.size());
    for (double a : angles) rays.push_back(unit_from_angle(a));
    return Sunburst<double>(std::move(rays));
}

/// Regular N-sunburst whose first ray has angle `phase`.
inline Sunburst<double> regular_sunburst(std::size_t n, double phase = 0.0) {
    std::vector<double> angles(n);
    for (std::size_t k = 0; k < n; ++k) angles[k] = phase + 2.0 * M_PI * double(k) / double(n);
    return sunburst_from_angles(angles);
}

inline Sunburst<double> rotated(const Sunburst<double>& s, double theta) {
    Vec2d u = unit_from_angle(theta);
    std::vector<Vec2d> rays;
    rays.reserve(s.size());
    for (const auto& r : s.rays()) rays.push_back(rotate(r, u));
    return Sunburst<double>(std::move(rays));
}

// ---------------------------------------------------------------------------

template <class T>
bool parallel(const Vec2<T>& a, const Vec2<T>& b) {
    T c = cross(a, b);
    if constexpr (scalar_traits<T>::exact) return c.sign() == 0;
    else return std::abs(c) <= scalar_traits<T>::eps * norm(a) * norm(b);
}

/// No edge direction of `a` is parallel to an edge direction of `b`.
template <class TilingA, class TilingB>
bool is_transverse(const TilingA& a, const TilingB& b) {
    for (const auto& da : a.edge_directions())
        for (const auto& db : b.edge_directions())
            if (parallel(da, db)) return false;
    return true;
}

}  // namespace stbill

#endif
