// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "stbill/dynamics.hpp"
#include "stbill/pipeline.hpp"
#include "stbill/random.hpp"
#include "stbill/weave.hpp"

using namespace stbill;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// Random small-denominator start on the unit edges at the origin, with
// random start edges and direction signs.
template <class Rng>
PairState<SquareGrid<Rational>, SquareGrid<Rational>> random_grid_start(Rng& rng, const SquareGrid<Rational>& A,
                                                                         const SquareGrid<Rational>& B) {
    long qa = 2 + long(rng() % 200), qb = 2 + long(rng() % 200);
    Rational pa(1 + long(rng() % std::uint64_t(qa - 1)), qa), pb(1 + long(rng() % std::uint64_t(qb - 1)), qb);
    GridEdge ea{(rng() & 1) ? GridAxis::V : GridAxis::H, 0, 0}, eb{(rng() & 1) ? GridAxis::V : GridAxis::H, 0, 0};
    auto s = grid_start(A, B, ea, eb, pa, pb);
    if (rng() & 1) s.a.direction = -s.a.direction;
    if (rng() & 1) s.b.direction = -s.b.direction;
    return s;
}

Outcome circle_point_exactness() {
    bool ok = rational_circle_point(Rational(1, 3)) == Vec2q(Rational(4, 5), Rational(3, 5));
    return {ok, "rational_circle_point(1/3) = " + rational_circle_point(Rational(1, 3)).x.str() + ", " +
                    rational_circle_point(Rational(1, 3)).y.str()};
}

Outcome quarter_turn_eighth_squares() {
    SquareGrid<double> A, B(unit_from_angle(M_PI / 4));
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(0.001, 0.999);
    int good = 0;
    double worst_closure = 0, worst_cos = 0;
    const int starts = 40;
    for (int i = 0; i < starts; ++i) {
        GridEdge ea{(rng() & 1) ? GridAxis::V : GridAxis::H, 0, 0}, eb{(rng() & 1) ? GridAxis::V : GridAxis::H, 0, 0};
        auto rec = run_orbit(A, B, grid_start(A, B, ea, eb, U(rng), U(rng)), 1000);
        if (rec.termination != Termination::periodic) continue;
        worst_closure = std::max(worst_closure, rec.closure_residual);
        bool square = rec.period == 4;
        for (int f = 0; f < 2 && square; ++f) {
            auto pt = [&](std::size_t k) { return f ? rec.states[k % 4].b.point : rec.states[k % 4].a.point; };
            for (std::size_t k = 0; k < 4; ++k) {
                Vec2d e0 = pt(k + 1) - pt(k), e1 = pt(k + 2) - pt(k + 1);
                if (norm(e0) < 1e-9) square = false;
                else worst_cos = std::max(worst_cos, std::abs(dot(e0, e1)) / (norm(e0) * norm(e1)));
            }
        }
        if (square && rec.closure_residual <= 1e-9) ++good;
    }
    return {good == starts && worst_cos <= 1e-9,
            fmt("%.0f/%.0f periodic squares, worst closure %.2e, worst |cos| %.2e", good, starts, worst_closure, worst_cos)};
}

Outcome seven_elevenths_drift() {
    SquareGrid<Rational> A, B(rational_circle_point(Rational(7, 11)));
    std::mt19937_64 rng(711);
    const auto budget_end = Clock::now() + std::chrono::seconds(28);
    int tried = 0, drifting = 0, southeast = 0, bounded = 0;
    std::size_t steps = 0;
    while (Clock::now() < budget_end) {
        auto s0 = random_grid_start(rng, A, B);
        auto slice = std::min(budget_end, Clock::now() + std::chrono::seconds(3));
        auto rec = run_orbit(A, B, s0, 100000, slice);
        ++tried;
        steps += rec.states.size() - 1;
        if (rec.termination == Termination::translation_periodic) {
            ++drifting;
            // A is the standard grid, so its local drift is the world drift
            // in the y-up frame; southeast means a negative y component.
            if (rec.drift_a.j < 0) ++southeast;
        }
        if (rec.termination == Termination::periodic) ++bounded;
    }
    return {southeast >= 5, fmt("%.0f starts, %.0f exact steps: %.0f TranslationPeriodic (%.0f heading south)", tried,
                                double(steps), drifting, southeast) +
                                fmt(", %.0f Periodic", bounded)};
}

Outcome one_third_bounded() {
    SquareGrid<Rational> A, B(rational_circle_point(Rational(1, 3)));
    std::mt19937_64 rng(13);
    const auto end = Clock::now() + std::chrono::seconds(55);
    int tried = 0, found = 0;
    double min_growth = 1e9;
    while (found < 5 && Clock::now() < end) {
        auto rec = run_orbit(A, B, random_grid_start(rng, A, B), 3000, end);
        ++tried;
        if (rec.interrupted) break;
        auto c = classify(rec);
        if (c.verdict == Verdict::bounded_attracted) {
            ++found;
            min_growth = std::min(min_growth, c.bit_growth);
        }
    }
    return {found >= 5, fmt("%.0f BoundedAttracted of %.0f starts (3000 steps), smallest bit growth x%.2f", found, tried,
                            found ? min_growth : 0.0)};
}

Outcome holonomy_oracles() {
    Rng rng(5);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
        auto p = random_oriented_weave(rng, 3 + std::size_t(i % 10));
        double a = holonomy(p).h, b = holonomy(p, HolonomyMethod::iteration).h;
        worst = std::max(worst, std::abs(a - b) / b);
    }
    return {worst <= 1e-12, fmt("1000 weaves, worst relative difference %.2e", worst)};
}

Outcome closing_phase() {
    Rng rng(6);
    double worst_log = 0, worst_close = 0;
    int convex = 0, single = 0;
    const int pairs = 500;
    for (int i = 0; i < pairs; ++i) {
        std::size_t n = 3 + std::size_t(i % 10);
        auto A = random_balanced_sunburst(rng, n);
        auto B = regular_sunburst(n, 0.37 * i);
        auto sol = solve_phase_detailed(A, B);
        worst_log = std::max(worst_log, std::abs(sol.log_h));
        SunburstPair p(A, B, sol.theta);
        auto pts = orbit_sunburst(p, 1.0, n);
        worst_close = std::max(worst_close, norm(pts.back() - pts.front()));
        pts.pop_back();
        bool cv = true;
        for (std::size_t k = 0; k < n; ++k)
            cv = cv && cross(pts[(k + 1) % n] - pts[k], pts[(k + 2) % n] - pts[(k + 1) % n]) > 0.0;
        convex += cv;
        int changes = 0;
        double prev = 0;
        for (int s = 0; s < 100; ++s) {
            double theta = sol.interval.lo + (s + 0.5) / 100.0 * sol.interval.length();
            double lh = std::log(holonomy(SunburstPair(A, B, theta)).h);
            if (s > 0 && ((prev > 0) != (lh > 0))) ++changes;
            prev = lh;
        }
        single += changes == 1;
    }
    return {worst_log <= 1e-12 && worst_close <= 1e-9 && convex == pairs && single == pairs,
            fmt("max |log h| %.2e, max closure %.2e, convex %.0f, single sign change %.0f", worst_log, worst_close, convex,
                single)};
}

Outcome weave_existence() {
    Rng rng(7);
    int nonempty = 0;
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = 3 + std::size_t(i % 10);
        nonempty += !weave_interval_or_empty(regular_sunburst(n, 0.1 * i), random_balanced_sunburst(rng, n)).empty();
    }
    double worst = 0;
    for (std::size_t n = 3; n <= 12; ++n) {
        auto I = weave_interval(regular_sunburst(n), regular_sunburst(n, 0.5));
        worst = std::max(worst, std::abs(I.length() - (M_PI - 2 * M_PI / double(n))));
    }
    return {nonempty == 1000 && worst <= 1e-12,
            fmt("%.0f/1000 nonempty; regular length error %.2e", nonempty, worst)};
}

Outcome left_right() {
    Rng rng(8);
    double worst = 0;
    for (int i = 0; i < 200; ++i)
        worst = std::max(worst, std::abs(left_times_right_holonomy(random_oriented_weave(rng, 3 + std::size_t(i % 10))) - 1));
    return {worst <= 1e-10, fmt("200 weaves, max |left*right - 1| %.2e", worst)};
}

Outcome calculus() {
    int bad = 0;
    for (int i = 0; i < 10000; ++i) bad += !(sine_margin(0.001 + 0.498 * i / 9999.0) > 0.0);
    int cases = 0;
    for (long n = 3; n <= 200; ++n)
        for (long j = 2; 2 * (j - 1) < n; ++j, ++cases) bad += !(discrete_sine_margin(n, j) > 0.0);
    return {bad == 0, fmt("10000 samples and %.0f discrete cases, %.0f violations", cases, bad)};
}

Outcome moduli_suite() {
    bool ok = true;
    auto F5 = area_form(5);
    ok = ok && F5.positive == 1 && F5.negative == 2;
    double iso = 0, inv = 0, orth = 0, comm = 0, ang = 0;
    int radical_bad = 0, refl_bad = 0;
    for (std::size_t n = 4; n <= 10; ++n) {
        auto F = area_form(n);
        radical_bad += F.radical_dim != 2;
        if (n < 5) continue;
        std::vector<Eigen::MatrixXd> M(n);
        for (std::size_t k = 0; k < n; ++k) {
            M[k] = butterfly_matrix(n, k);
            const auto N = Eigen::Index(n);
            inv = std::max(inv, (M[k] * M[k] - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff());
            iso = std::max(iso, (M[k].transpose() * F.gram * M[k] - F.gram).cwiseAbs().maxCoeff());
            refl_bad += numerical_rank(quotient_matrix(M[k]) - Eigen::MatrixXd::Identity(N - 2, N - 2)) != 1;
        }
        auto walls = butterfly_walls(F);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                std::size_t gap = (b + n - a) % n;
                if (gap == 0 || gap == 1 || gap == n - 1) continue;
                comm = std::max(comm, (M[a] * M[b] - M[b] * M[a]).cwiseAbs().maxCoeff());
                orth = std::max(orth, std::abs(F.q(walls[a].normal, walls[b].normal)));
            }
    }
    auto WP = wall_pentagon(F5);
    bool compact = true;
    for (std::size_t i = 0; i < 5; ++i) {
        ang = std::max(ang, std::abs(WP.angles[i] - M_PI / 2));
        compact = compact && WP.vertex_margins[i] > 0;
    }
    ok = ok && radical_bad == 0 && refl_bad == 0 && inv <= 1e-12 && iso <= 1e-12 && comm <= 1e-9 && orth <= 1e-9 &&
         ang <= 1e-9 && compact;
    return {ok, fmt("signature (%.0f,%.0f); involution %.1e, isometry %.1e, ", F5.positive, F5.negative, inv, iso) +
                    fmt("commutator %.1e, wall Q %.1e, angle error %.1e", comm, orth, ang)};
}

Outcome pipeline_suite() {
    auto F = area_form(5);
    auto walls = butterfly_walls(F);
    Polygon reg;
    Vec2d cur{0, 0};
    for (int k = 0; k < 5; ++k) {
        reg.vertices.push_back(cur);
        cur += unit_from_angle(2 * M_PI * k / 5 + 0.3);
    }
    double center = hyperbolic_distance(F, equilateral_to_hyperbolic(F, reg), hyperbolic_center(F));
    Rng rng(11);
    std::uniform_real_distribution<double> U(-3, 3);
    int inside = 0;
    double iso = 0, dil = 0;
    for (int i = 0; i < 100; ++i) {
        Polygon P{random_equilateral_vertices(rng, 5)};
        auto p = equilateral_to_hyperbolic(F, P);
        inside += wall_margin(F, walls, p) > 0;
        Polygon Q = P;
        Vec2d rot = unit_from_angle(U(rng)), shift{U(rng), U(rng)};
        for (auto& v : Q.vertices) v = rotate(v, rot) + shift;
        iso = std::max(iso, hyperbolic_distance(F, p, equilateral_to_hyperbolic(F, Q)));
        dil = std::max(dil, hyperbolic_distance(F, p, equilateral_to_hyperbolic(F, P, 0.01 + 5 * std::abs(U(rng)))));
    }
    return {center <= 1e-9 && inside == 100 && iso <= 1e-9 && dil <= 1e-10,
            fmt("center distance %.1e, inside %.0f/100, isometry %.1e, dilation %.1e", center, inside, iso, dil)};
}

Outcome affine_naturality() {
    SquareGrid<Rational> A, B(rational_circle_point(Rational(1, 3)));
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
    int equal = 0, maps = 0;
    std::size_t steps = 0;
    while (maps < 20) {
        auto s0 = random_grid_start(rng, A, B);
        Vec2q c1(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
        Vec2q c2(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
        if (cross(c1, c2).sign() == 0) continue;
        auto rec = run_orbit(A, B, s0, 1000);
        if (rec.states.size() < 1001) continue;  // singular start; draw again
        ++maps;
        auto T = [&](const Vec2q& v) { return v.x * c1 + v.y * c2; };
        PairState<SquareGrid<Rational>, SquareGrid<Rational>> t0{{T(s0.a.point), s0.a.edge, T(s0.a.direction)},
                                                                 {T(s0.b.point), s0.b.edge, T(s0.b.direction)}};
        auto trec = run_orbit(A.transformed(c1, c2), B.transformed(c1, c2), t0, 1000);
        bool same = trec.states.size() == rec.states.size() && trec.termination == rec.termination;
        for (std::size_t k = 0; same && k < rec.states.size(); ++k)
            same = T(rec.states[k].a.point) == trec.states[k].a.point && T(rec.states[k].b.point) == trec.states[k].b.point &&
                   rec.states[k].a.edge == trec.states[k].a.edge && rec.states[k].b.edge == trec.states[k].b.edge;
        equal += same;
        steps += rec.states.size() - 1;
    }
    return {equal == 20, fmt("%.0f/20 maps give exactly equal orbits (%.0f steps each side)", equal, double(steps))};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"circle point 1/3 exact", 1, circle_point_exactness},
        {"pi/4 grids: periodic squares", 1, quarter_turn_eighth_squares},
        {"(A, A_7/11) southeast drift", 30, seven_elevenths_drift},
        {"(A, A_1/3) bounded attraction", 60, one_third_bounded},
        {"holonomy product = iteration", 5, holonomy_oracles},
        {"unique closing phase", 10, closing_phase},
        {"weave interval existence and length", 5, weave_existence},
        {"left x right holonomy = 1", 2, left_right},
        {"calculus inequalities", 1, calculus},
        {"moduli: signature, butterflies, walls", 2, moduli_suite},
        {"pipeline into the wall pentagon", 10, pipeline_suite},
        {"affine naturality", 10, affine_naturality},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        bool pass = o.pass && secs < c.limit_s;
        failed += !pass;
        std::printf("AC%-2zu %s  %s: %s [%.2fs, limit %.0fs]\n", i + 1, pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs,
                    c.limit_s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
