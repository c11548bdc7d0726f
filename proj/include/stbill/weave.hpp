#ifndef STBILL_WEAVE_HPP
#define STBILL_WEAVE_HPP

// Pairs of sunbursts: the oriented-weave predicate, spiral orbits, the
// holonomy, the interval of weaving phases and the closing-phase solver.
//
// Indexing is zero-based: A[j] plays the role of A_{2j+1} and B[j] of
// B_{2j+2}. An a-step moves from ray A[j] parallel to B[j] onto A[j+1];
// the matching b-step moves from ray B[j] parallel to A[j+1] onto B[j+1].

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "stbill/error.hpp"
#include "stbill/exact.hpp"
#include "stbill/tilings.hpp"

namespace stbill {

constexpr double two_pi = 2.0 * M_PI;

/// Angle reduced to [0, 2pi).
inline double wrap_angle(double a) {
    a = std::fmod(a, two_pi);
    if (a < 0) a += two_pi;
    if (a >= two_pi) a = 0.0;
    return a;
}

/// Counterclockwise angle from u to v, in [0, 2pi).
inline double ccw_angle(const Vec2d& u, const Vec2d& v) { return wrap_angle(std::atan2(cross(u, v), dot(u, v))); }

struct SunburstPair {
    Sunburst<double> A;
    Sunburst<double> B;
    double phase = 0.0;

    SunburstPair(Sunburst<double> a, Sunburst<double> b, double ph = 0.0) : A(std::move(a)), B(std::move(b)), phase(ph) {
        if (A.size() != B.size()) throw Error(ErrorKind::invalid_input, "sunburst pair: different orders");
    }

    std::size_t size() const { return A.size(); }
    Vec2d a(std::size_t j) const { return A.ray(j); }
    Vec2d b(std::size_t j) const { return rotate(B.ray(j), unit_from_angle(phase)); }
    Sunburst<double> rotated_b() const { return rotated(B, phase); }
};

inline bool is_oriented_weave(const SunburstPair& p) {
    const std::size_t n = p.size();
    for (std::size_t j = 0; j < n; ++j) {
        Vec2d b = p.b(j);
        if (!(cross(p.a(j), b) > 0.0 && cross(p.a(j + 1), b) > 0.0)) return false;
    }
    return true;
}

/// Cyclic relabeling of B (B[j] <- B[j + shift]) that makes the pair an
/// oriented weave, when one exists.
inline std::optional<SunburstPair> align_labels(const SunburstPair& p) {
    const std::size_t n = p.size();
    for (std::size_t shift = 0; shift < n; ++shift) {
        std::vector<Vec2d> rays(n);
        for (std::size_t j = 0; j < n; ++j) rays[j] = p.B.ray(j + shift);
        SunburstPair q(p.A, Sunburst<double>(std::move(rays)), p.phase);
        if (is_oriented_weave(q)) return q;
    }
    return std::nullopt;
}

namespace detail {
inline void require_weave(const SunburstPair& p) {
    if (!is_oriented_weave(p)) throw Error(ErrorKind::degenerate_step, "pair is not an oriented weave");
}

// One spiral step: from `from` parallel to `travel` onto the open ray
// `dst`. The hit is placed by its coefficient along `dst`, which avoids the
// cancellation of from + t * travel.
inline Vec2d spiral_step(const Vec2d& from, const Vec2d& travel, const Vec2d& dst) {
    const double den = cross(dst, travel);
    if (den == 0.0) throw Error(ErrorKind::degenerate_step, "step direction parallel to target ray");
    const double s = cross(from, travel) / den;
    if (!(s > 0.0)) throw Error(ErrorKind::degenerate_step, "step lands off the target ray");
    return s * dst;
}
}  // namespace detail

/// a-projection of the orbit starting at distance r0 along A[0]: points
/// a_0 .. a_steps, with a_k on ray A[k mod N].
inline std::vector<Vec2d> orbit_sunburst(const SunburstPair& p, double r0, std::size_t steps) {
    if (!(r0 > 0.0)) throw Error(ErrorKind::invalid_input, "orbit start radius must be positive");
    detail::require_weave(p);
    std::vector<Vec2d> pts;
    pts.reserve(steps + 1);
    Vec2d a0 = p.a(0);
    pts.push_back((r0 / norm(a0)) * a0);
    for (std::size_t k = 0; k < steps; ++k) pts.push_back(detail::spiral_step(pts.back(), p.b(k), p.a(k + 1)));
    return pts;
}

/// b-projection: the role-swapped orbit starting at distance r0 along B[0].
inline std::vector<Vec2d> orbit_sunburst_b(const SunburstPair& p, double r0, std::size_t steps) {
    if (!(r0 > 0.0)) throw Error(ErrorKind::invalid_input, "orbit start radius must be positive");
    detail::require_weave(p);
    std::vector<Vec2d> pts;
    pts.reserve(steps + 1);
    Vec2d b0 = p.b(0);
    pts.push_back((r0 / norm(b0)) * b0);
    for (std::size_t k = 0; k < steps; ++k) pts.push_back(detail::spiral_step(pts.back(), p.a(k + 1), p.b(k + 1)));
    return pts;
}

enum class HolonomyMethod { product, iteration };

struct HolonomyReport {
    double h = 1.0;
    std::vector<double> step_factors;
    HolonomyMethod method = HolonomyMethod::product;
};

inline HolonomyReport holonomy(const SunburstPair& p, HolonomyMethod method = HolonomyMethod::product) {
    detail::require_weave(p);
    const std::size_t n = p.size();
    HolonomyReport rep;
    rep.method = method;
    rep.step_factors.resize(n);
    if (method == HolonomyMethod::product) {
        // Radial factor |a_{j+1}| / |a_j| in units of the ray lengths; the
        // ray lengths cancel around the full loop.
        double h = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            Vec2d b = p.b(j);
            double lam = std::abs(cross(p.a(j), b)) / std::abs(cross(p.a(j + 1), b)) * norm(p.a(j + 1)) / norm(p.a(j));
            rep.step_factors[j] = lam;
            h *= lam;
        }
        rep.h = h;
    } else {
        auto pts = orbit_sunburst(p, 1.0, n);
        for (std::size_t j = 0; j < n; ++j) rep.step_factors[j] = norm(pts[j + 1]) / norm(pts[j]);
        rep.h = norm(pts[n]) / norm(pts[0]);
    }
    return rep;
}

/// Holonomy of the role-swapped (b-projection) orbit.
inline HolonomyReport right_holonomy(const SunburstPair& p, HolonomyMethod method = HolonomyMethod::product) {
    detail::require_weave(p);
    const std::size_t n = p.size();
    HolonomyReport rep;
    rep.method = method;
    rep.step_factors.resize(n);
    if (method == HolonomyMethod::product) {
        double h = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            Vec2d a = p.a(j + 1);
            double mu = std::abs(cross(p.b(j), a)) / std::abs(cross(p.b(j + 1), a)) * norm(p.b(j + 1)) / norm(p.b(j));
            rep.step_factors[j] = mu;
            h *= mu;
        }
        rep.h = h;
    } else {
        auto pts = orbit_sunburst_b(p, 1.0, n);
        for (std::size_t j = 0; j < n; ++j) rep.step_factors[j] = norm(pts[j + 1]) / norm(pts[j]);
        rep.h = norm(pts[n]) / norm(pts[0]);
    }
    return rep;
}

inline double left_times_right_holonomy(const SunburstPair& p) { return holonomy(p).h * right_holonomy(p).h; }

struct PhaseArc {
    double lo = 0.0;  // in [0, 2pi)
    double length = 0.0;
    double hi() const { return lo + length; }
    bool contains(double theta) const {
        double d = wrap_angle(theta - lo);
        return d > 0.0 && d < length;
    }
};

/// Open interval (lo, hi) of phases applied to B; hi - lo is the length
/// and lo lies in [0, 2pi).
struct PhaseInterval {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<PhaseArc> arcs;

    double length() const { return hi - lo; }
    bool empty() const { return !(hi > lo); }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double theta) const {
        double d = wrap_angle(theta - lo);
        return d > 0.0 && d < length();
    }
};

inline std::vector<PhaseArc> weave_arcs(const Sunburst<double>& A, const Sunburst<double>& B) {
    if (A.size() != B.size()) throw Error(ErrorKind::invalid_input, "weave_interval: different orders");
    const std::size_t n = A.size();
    std::vector<PhaseArc> arcs(n);
    for (std::size_t j = 0; j < n; ++j) {
        // rot(B[j]) strictly between A[j+1] and -A[j] (counterclockwise).
        arcs[j].lo = wrap_angle(angle_of(A.ray(j + 1)) - angle_of(B.ray(j)));
        arcs[j].length = ccw_angle(A.ray(j + 1), -A.ray(j));
    }
    return arcs;
}

inline PhaseInterval weave_interval(const Sunburst<double>& A, const Sunburst<double>& B) {
    PhaseInterval out;
    out.arcs = weave_arcs(A, B);
    const auto& arcs = out.arcs;
    double best = 0.0;
    std::optional<double> best_lo;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        double c = arcs[i].lo;
        double room = arcs[i].length;
        for (std::size_t k = 0; k < arcs.size() && room > 0.0; ++k) {
            if (k == i) continue;
            double d = wrap_angle(c - arcs[k].lo);
            if (d > two_pi - 1e-15) d = 0.0;
            room = d < arcs[k].length ? std::min(room, arcs[k].length - d) : 0.0;
        }
        if (room > best) {
            best = room;
            best_lo = c;
        }
    }
    if (!best_lo) {
        out.lo = out.hi = 0.0;
        throw Error(ErrorKind::empty_interval, "no phase makes the pair an oriented weave");
    }
    out.lo = *best_lo;
    out.hi = *best_lo + best;
    return out;
}

/// Same as weave_interval but reports emptiness instead of throwing.
inline PhaseInterval weave_interval_or_empty(const Sunburst<double>& A, const Sunburst<double>& B) {
    try {
        return weave_interval(A, B);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::empty_interval) throw;
        PhaseInterval out;
        out.arcs = weave_arcs(A, B);
        return out;
    }
}

/// log h at phase I.lo + x, using angles so that the endpoints stay
/// well conditioned.
inline double log_holonomy_at(const Sunburst<double>& A, const Sunburst<double>& B, const PhaseInterval& I, double x) {
    const std::size_t n = A.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double base = wrap_angle(angle_of(B.ray(j)) + I.lo);
        double p = wrap_angle(base - angle_of(A.ray(j)));
        double q = wrap_angle(base - angle_of(A.ray(j + 1)));
        if (q > M_PI) q -= two_pi;  // q is 0 at the left end of arc j
        sum += std::log(std::sin(p + x)) - std::log(std::sin(q + x));
    }
    return sum;
}

struct PhaseSolution {
    double theta = 0.0;
    double log_h = 0.0;
    int iterations = 0;
    PhaseInterval interval;
};

/// Phase at which the holonomy is 1. log h decreases from +inf at the
/// clockwise end of the interval to -inf at the counterclockwise end.
inline PhaseSolution solve_phase_detailed(const Sunburst<double>& A, const Sunburst<double>& B, double tol = 1e-12,
                                          int max_iter = 60) {
    PhaseSolution sol;
    sol.interval = weave_interval(A, B);
    const auto& I = sol.interval;
    double lo = 0.0, hi = I.length();
    double x = 0.5 * (lo + hi);
    double f = log_holonomy_at(A, B, I, x);
    double best_x = x, best_f = f;
    int it = 0;
    while (std::abs(f) > tol && it < max_iter) {
        if (f > 0) lo = x;
        else hi = x;
        x = 0.5 * (lo + hi);
        f = log_holonomy_at(A, B, I, x);
        if (std::abs(f) < std::abs(best_f)) {
            best_x = x;
            best_f = f;
        }
        ++it;
    }
    sol.theta = I.lo + best_x;
    sol.log_h = best_f;
    sol.iterations = it;
    return sol;
}

inline double solve_phase(const Sunburst<double>& A, const Sunburst<double>& B, double tol = 1e-12) {
    return solve_phase_detailed(A, B, tol).theta;
}

inline bool is_balanced(const Sunburst<double>& S, double tol = 1e-12) {
    Vec2d sum{0.0, 0.0};
    for (const auto& r : S.rays()) sum += (1.0 / norm(r)) * r;
    return norm(sum) <= tol;
}

inline bool is_regular(const Sunburst<double>& S, double tol = 1e-12) {
    const std::size_t n = S.size();
    const double step = two_pi / double(n);
    for (std::size_t j = 0; j < n; ++j) {
        double a = ccw_angle(S.ray(j), S.ray(j + 1));
        if (std::abs(a - step) > tol) return false;
    }
    return true;
}

/// sin(pi t) - t / (1 - t); positive on (0, 1/2).
inline double sine_margin(double t) { return std::sin(M_PI * t) - t / (1.0 - t); }

/// sin(pi (j-1)/N) - (j-1)/(N-j+1); positive for 2 <= j, j - 1 < N/2.
inline double discrete_sine_margin(long n, long j) {
    return std::sin(M_PI * double(j - 1) / double(n)) - double(j - 1) / double(n - j + 1);
}

}  // namespace stbill

#endif
