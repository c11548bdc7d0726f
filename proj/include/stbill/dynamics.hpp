#ifndef STBILL_DYNAMICS_HPP
#define STBILL_DYNAMICS_HPP

// The symplectic tiling billiards map on a pair of tilings, orbit
// iteration with exact periodicity / drift detection, and orbit
// classification.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "stbill/error.hpp"
#include "stbill/exact.hpp"
#include "stbill/tilings.hpp"

namespace stbill {

template <class TilingA, class TilingB>
struct PairState {
    using scalar_type = typename TilingA::scalar_type;
    using ParticleA = Particle<scalar_type, typename TilingA::edge_type>;
    using ParticleB = Particle<scalar_type, typename TilingB::edge_type>;

    ParticleA a;
    ParticleB b;

    friend bool operator==(const PairState& x, const PairState& y) { return x.a == y.a && x.b == y.b; }
};

template <class TilingA, class TilingB>
struct StepResult {
    HitStatus status = HitStatus::hit;
    char factor = 0;  // 'a' or 'b' when status != hit
    Vec2<typename TilingA::scalar_type> where{};
    PairState<TilingA, TilingB> state;
};

namespace detail {

// Sign of `candidate` chosen so it points into the same tile adjacent to
// `edge` as `reference` does.
template <class T>
Vec2<T> orient_like(const Vec2<T>& edge, const Vec2<T>& reference, Vec2<T> candidate) {
    using tr = scalar_traits<T>;
    int ref = tr::sign(cross(edge, reference));
    int cand = tr::sign(cross(edge, candidate));
    if constexpr (!tr::exact) {
        double scale = norm(edge) * norm(candidate);
        if (std::abs(cross(edge, candidate)) <= 1e-12 * scale) cand = 0;
    }
    if (ref == 0 || cand == 0)
        throw Error(ErrorKind::non_transverse_edges, "travel direction is parallel to the current edge");
    return ref == cand ? candidate : -candidate;
}

}  // namespace detail

/// One move (a1, b2) -> (a3, b4). The a-particle travels parallel to the
/// edge of B holding b2, staying on the side its direction selects; then b
/// travels parallel to the edge of A now holding a3.
template <class TilingA, class TilingB>
StepResult<TilingA, TilingB> step(const TilingA& A, const TilingB& B, const PairState<TilingA, TilingB>& s) {
    StepResult<TilingA, TilingB> out;
    out.state = s;

    auto da = detail::orient_like(A.edge_direction(s.a.edge), s.a.direction, B.edge_direction(s.b.edge));
    auto ha = A.first_hit(s.a.point, da, &s.a.edge);
    if (ha.status != HitStatus::hit) {
        out.status = ha.status;
        out.factor = 'a';
        out.where = ha.point;
        return out;
    }
    out.state.a = {ha.point, ha.edge, da};

    auto db = detail::orient_like(B.edge_direction(s.b.edge), s.b.direction, A.edge_direction(ha.edge));
    auto hb = B.first_hit(s.b.point, db, &s.b.edge);
    if (hb.status != HitStatus::hit) {
        out.status = hb.status;
        out.factor = 'b';
        out.where = hb.point;
        return out;
    }
    out.state.b = {hb.point, hb.edge, db};
    return out;
}

enum class Termination { max_steps, periodic, translation_periodic, vertex_hit, escaped };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::max_steps: return "MaxSteps";
        case Termination::periodic: return "Periodic";
        case Termination::translation_periodic: return "TranslationPeriodic";
        case Termination::vertex_hit: return "VertexHit";
        case Termination::escaped: return "Escaped";
    }
    return "?";
}

struct BBox {
    double xmin = std::numeric_limits<double>::infinity();
    double ymin = std::numeric_limits<double>::infinity();
    double xmax = -std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();

    void add(const Vec2d& p) {
        xmin = std::min(xmin, p.x);
        ymin = std::min(ymin, p.y);
        xmax = std::max(xmax, p.x);
        ymax = std::max(ymax, p.y);
    }
    bool empty() const { return xmin > xmax; }
    double diameter() const { return empty() ? 0.0 : std::hypot(xmax - xmin, ymax - ymin); }
};

template <class TilingA, class TilingB>
struct OrbitRecord {
    using State = PairState<TilingA, TilingB>;

    std::vector<State> states;
    Termination termination = Termination::max_steps;
    std::size_t period = 0;
    /// Integer drift per period, in each grid's local coordinates.
    LatticeOffset drift_a{}, drift_b{};
    /// Step at which a singular or escaping move was attempted.
    std::size_t failed_step = 0;
    char failed_factor = 0;
    Vec2d failed_point{};
    /// Largest coordinate bit length of each state (53 in float mode).
    std::vector<std::size_t> bit_lengths;
    /// Largest deviation between the matched states (0 in exact mode).
    double closure_residual = 0.0;
    BBox bbox_a, bbox_b;
    /// Stopped by the deadline before max_steps.
    bool interrupted = false;
};

namespace detail {

inline std::size_t hash_mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

inline std::size_t edge_hash(const GridEdge& e) {
    return hash_mix(hash_mix(std::size_t(e.axis), std::size_t(e.line)), std::size_t(e.cell));
}
inline std::size_t edge_hash(const RayEdge& e) { return e.index; }

/// Which of the two tiles adjacent to the particle's edge its direction
/// points into (+1 or -1).
template <class Tiling, class T, class Edge>
int side(const Tiling& tiling, const Particle<T, Edge>& p) {
    return scalar_traits<T>::sign(cross(tiling.edge_direction(p.edge), p.direction));
}

template <class Tiling, class T, class Edge>
std::size_t particle_hash(const Tiling& tiling, const Particle<T, Edge>& p) {
    using tr = scalar_traits<T>;
    std::size_t h = hash_mix(edge_hash(p.edge), std::size_t(side(tiling, p) + 1));
    if constexpr (tr::exact) {
        h = hash_mix(h, tr::hash(p.point.x));
        h = hash_mix(h, tr::hash(p.point.y));
    }
    return h;
}

/// Same particle: same edge, same point (to tolerance in float mode) and a
/// direction into the same tile.
template <class Tiling, class T, class Edge>
bool particle_near(const Tiling& tiling, const Particle<T, Edge>& p, const Particle<T, Edge>& q, double& residual) {
    if (!(p.edge == q.edge)) return false;
    if (side(tiling, p) != side(tiling, q)) return false;
    if (!near(p.point, q.point)) return false;
    if constexpr (!scalar_traits<T>::exact) {
        residual = std::max({residual, std::abs(p.point.x - q.point.x), std::abs(p.point.y - q.point.y)});
    }
    return true;
}

/// Float mode only: bin of the position along the edge, wide enough that
/// matching particles fall in the same or an adjacent bin.
template <class Tiling, class T, class Edge>
std::int64_t position_bin(const Tiling& tiling, const Particle<T, Edge>& p) {
    return static_cast<std::int64_t>(std::floor(tiling.local_parameter(p.point, p.edge) / (16.0 * scalar_traits<T>::eps)));
}

template <class T, class Edge>
std::size_t particle_bits(const Particle<T, Edge>& p) {
    return std::max(bit_length(p.point), bit_length(p.direction));
}

}  // namespace detail

/// Iterates `step` until max_steps, a vertex hit, escape, exact repetition
/// (Periodic), or repetition up to a lattice translation of each factor
/// (TranslationPeriodic).
template <class TilingA, class TilingB>
OrbitRecord<TilingA, TilingB> run_orbit(const TilingA& A, const TilingB& B, const PairState<TilingA, TilingB>& s0,
                                        std::size_t max_steps,
                                        std::chrono::steady_clock::time_point deadline =
                                            std::chrono::steady_clock::time_point::max()) {
    using State = PairState<TilingA, TilingB>;
    OrbitRecord<TilingA, TilingB> rec;
    constexpr bool exact = scalar_traits<typename TilingA::scalar_type>::exact;

    struct Reduced {
        State state;
        LatticeOffset off_a, off_b;
    };
    std::vector<Reduced> reduced;
    std::unordered_multimap<std::size_t, std::size_t> seen;

    auto admit = [&](const State& s) -> bool {
        rec.states.push_back(s);
        rec.bit_lengths.push_back(std::max(detail::particle_bits(s.a), detail::particle_bits(s.b)));
        rec.bbox_a.add(to_double(s.a.point));
        rec.bbox_b.add(to_double(s.b.point));

        Reduced r{s, {}, {}};
        r.off_a = A.reduce(r.state.a);
        r.off_b = B.reduce(r.state.b);
        const std::size_t base = detail::hash_mix(detail::particle_hash(A, r.state.a), detail::particle_hash(B, r.state.b));
        std::int64_t bin = 0;
        if constexpr (!exact) bin = detail::position_bin(A, r.state.a);
        auto key = [&](std::int64_t b) { return exact ? base : detail::hash_mix(base, static_cast<std::size_t>(b)); };
        const std::size_t index = reduced.size();
        for (std::int64_t b = exact ? bin : bin - 1; b <= (exact ? bin : bin + 1); ++b) {
            auto [lo, hi] = seen.equal_range(key(b));
            for (auto it = lo; it != hi; ++it) {
                const Reduced& prev = reduced[it->second];
                double residual = 0.0;
                if (!detail::particle_near(A, prev.state.a, r.state.a, residual)) continue;
                if (!detail::particle_near(B, prev.state.b, r.state.b, residual)) continue;
                rec.period = index - it->second;
                rec.drift_a = r.off_a - prev.off_a;
                rec.drift_b = r.off_b - prev.off_b;
                rec.closure_residual = residual;
                rec.termination = (rec.drift_a.is_zero() && rec.drift_b.is_zero()) ? Termination::periodic
                                                                                    : Termination::translation_periodic;
                return false;
            }
        }
        seen.emplace(key(bin), index);
        reduced.push_back(std::move(r));
        return true;
    };

    admit(s0);
    State cur = s0;
    for (std::size_t n = 0; n < max_steps; ++n) {
        auto res = step(A, B, cur);
        if (res.status != HitStatus::hit) {
            rec.termination = res.status == HitStatus::vertex ? Termination::vertex_hit : Termination::escaped;
            rec.failed_step = n + 1;
            rec.failed_factor = res.factor;
            rec.failed_point = to_double(res.where);
            return rec;
        }
        cur = std::move(res.state);
        if (!admit(cur)) return rec;
        if ((n & 31) == 31 && std::chrono::steady_clock::now() > deadline) {
            rec.interrupted = true;
            break;
        }
    }
    rec.termination = Termination::max_steps;
    return rec;
}

/// Checks that consecutive states satisfy the step relation.
template <class TilingA, class TilingB>
bool replay(const TilingA& A, const TilingB& B, const OrbitRecord<TilingA, TilingB>& rec) {
    for (std::size_t i = 0; i + 1 < rec.states.size(); ++i) {
        auto res = step(A, B, rec.states[i]);
        if (res.status != HitStatus::hit) return false;
        double residual = 0.0;
        if (!detail::particle_near(A, res.state.a, rec.states[i + 1].a, residual)) return false;
        if (!detail::particle_near(B, res.state.b, rec.states[i + 1].b, residual)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Classification

enum class Verdict { periodic, unbounded_drift, bounded_attracted, singular, inconclusive };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::periodic: return "Periodic";
        case Verdict::unbounded_drift: return "UnboundedDrift";
        case Verdict::bounded_attracted: return "BoundedAttracted";
        case Verdict::singular: return "Singular";
        case Verdict::inconclusive: return "Inconclusive";
    }
    return "?";
}

struct Classification {
    Verdict verdict = Verdict::inconclusive;
    std::string evidence;
    std::size_t period = 0;
    LatticeOffset drift_a{}, drift_b{};
    double bit_growth = 0.0;       // bits(end) / bits(midpoint)
    double diameter_change = 0.0;  // relative, second half of the orbit
};

/// Heuristic thresholds for the BoundedAttracted verdict.
struct ClassifyOptions {
    double min_bit_growth = 2.0;
    double max_diameter_change = 0.01;
    std::size_t min_states = 16;
};

template <class TilingA, class TilingB>
Classification classify(const OrbitRecord<TilingA, TilingB>& rec, const ClassifyOptions& opt = {}) {
    Classification c;
    c.period = rec.period;
    c.drift_a = rec.drift_a;
    c.drift_b = rec.drift_b;
    std::ostringstream ev;
    switch (rec.termination) {
        case Termination::periodic:
            c.verdict = Verdict::periodic;
            ev << "exact repetition with period " << rec.period;
            if (rec.closure_residual > 0) ev << " (closure residual " << rec.closure_residual << ")";
            c.evidence = ev.str();
            return c;
        case Termination::translation_periodic:
            c.verdict = Verdict::unbounded_drift;
            ev << "repeats up to translation every " << rec.period << " steps; drift a=(" << rec.drift_a.i << ","
               << rec.drift_a.j << ") b=(" << rec.drift_b.i << "," << rec.drift_b.j << ")";
            c.evidence = ev.str();
            return c;
        case Termination::vertex_hit:
            c.verdict = Verdict::singular;
            ev << "vertex hit at step " << rec.failed_step << " in factor " << rec.failed_factor;
            c.evidence = ev.str();
            return c;
        case Termination::escaped:
            c.verdict = Verdict::singular;
            ev << "escaped to infinity at step " << rec.failed_step << " in factor " << rec.failed_factor;
            c.evidence = ev.str();
            return c;
        case Termination::max_steps:
            break;
    }

    const std::size_t n = rec.states.size();
    if (n < opt.min_states) {
        c.evidence = "orbit too short to classify";
        return c;
    }
    const std::size_t mid = n / 2;
    BBox first_a, first_b;
    for (std::size_t i = 0; i < mid; ++i) {
        first_a.add(to_double(rec.states[i].a.point));
        first_b.add(to_double(rec.states[i].b.point));
    }
    auto change = [](const BBox& early, const BBox& all) {
        double d = all.diameter();
        return d > 0 ? (d - early.diameter()) / d : 0.0;
    };
    c.diameter_change = std::max(change(first_a, rec.bbox_a), change(first_b, rec.bbox_b));
    const double bits_mid = double(std::max<std::size_t>(1, rec.bit_lengths[mid - 1]));
    const double bits_end = double(rec.bit_lengths.back());
    c.bit_growth = bits_end / bits_mid;
    ev << "bounding-box diameter change " << c.diameter_change << " over second half; bit length " << bits_mid
       << " -> " << bits_end << " (x" << c.bit_growth << ")";
    c.evidence = ev.str();
    if (c.diameter_change < opt.max_diameter_change && c.bit_growth >= opt.min_bit_growth)
        c.verdict = Verdict::bounded_attracted;
    return c;
}

// ---------------------------------------------------------------------------
// Phase portrait

/// Verdict raster over (position along edge_a) x (position along edge_b),
/// sampled at cell centers (i + 1/2)/w, (j + 1/2)/h. Row-major, h rows.
struct PhasePortrait {
    std::size_t width = 0, height = 0;
    std::vector<Verdict> cells;
    Verdict at(std::size_t i, std::size_t j) const { return cells[j * width + i]; }
};

/// Start state on grid edges: a at parameter `pa` of edge_a pointing into
/// the tile on the positive local side, likewise b.
template <class T>
PairState<SquareGrid<T>, SquareGrid<T>> grid_start(const SquareGrid<T>& A, const SquareGrid<T>& B,
                                                    const GridEdge& edge_a, const GridEdge& edge_b, const T& pa,
                                                    const T& pb) {
    auto side = [](const SquareGrid<T>& g, const GridEdge& e) { return e.axis == GridAxis::V ? g.e1() : g.e2(); };
    PairState<SquareGrid<T>, SquareGrid<T>> s;
    s.a = {A.point_on(edge_a, pa), edge_a, side(A, edge_a)};
    s.b = {B.point_on(edge_b, pb), edge_b, side(B, edge_b)};
    if (parallel(A.edge_direction(edge_a), B.edge_direction(edge_b)))
        throw Error(ErrorKind::non_transverse_edges, "start edges are parallel");
    return s;
}

template <class T>
PhasePortrait phase_portrait(const SquareGrid<T>& A, const SquareGrid<T>& B, const GridEdge& edge_a,
                             const GridEdge& edge_b, std::size_t width, std::size_t height, std::size_t max_steps,
                             const ClassifyOptions& opt = {}) {
    if (width == 0 || height == 0) throw Error(ErrorKind::invalid_input, "empty portrait resolution");
    PhasePortrait img{width, height, std::vector<Verdict>(width * height, Verdict::inconclusive)};
    using tr = scalar_traits<T>;
    // Cells are independent; each writes only its own slot.
#pragma omp parallel for schedule(dynamic) collapse(2)
    for (std::size_t j = 0; j < height; ++j) {
        for (std::size_t i = 0; i < width; ++i) {
            T pa = tr::ratio(long(2 * i + 1), long(2 * width));
            T pb = tr::ratio(long(2 * j + 1), long(2 * height));
            auto s0 = grid_start(A, B, edge_a, edge_b, pa, pb);
            img.cells[j * width + i] = classify(run_orbit(A, B, s0, max_steps), opt).verdict;
        }
    }
    return img;
}

}  // namespace stbill

#endif
