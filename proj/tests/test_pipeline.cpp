#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "polygons.hpp"
#include "stbill/pipeline.hpp"
#include "stbill/random.hpp"

using namespace stbill;
using stbill::testing::regular_polygon;
using stbill::testing::transform;

namespace {

Polygon mirrored(const Polygon& P) {
    // Reflect in the y-axis and reverse the order to stay counterclockwise.
    Polygon Q = P;
    for (auto& v : Q.vertices) v.x = -v.x;
    std::reverse(Q.vertices.begin(), Q.vertices.end());
    return Q;
}

}  // namespace

TEST(Pipeline, RegularPentagonIsCenter) {
    auto F = area_form(5);
    for (double phase : {0.0, 0.4, 2.0}) {
        auto p = equilateral_to_hyperbolic(F, regular_polygon(5, phase));
        EXPECT_LE(hyperbolic_distance(F, p, hyperbolic_center(F)), 1e-9);
    }
}

TEST(Pipeline, AlignedPolygonIsEquiangularInFamilies) {
    auto F = area_form(6);
    Rng rng(79);
    for (int i = 0; i < 20; ++i) {
        auto r = equilateral_to_hyperbolic_detailed(F, Polygon{random_equilateral_vertices(rng, 6)});
        auto L = edge_lengths(r.offsets);
        for (double l : L) EXPECT_GT(l, 0.0);
        auto back = polygon_from_offsets(r.offsets);
        for (std::size_t k = 0; k < 6; ++k) EXPECT_LE(norm(back.vertex(k) - r.aligned.vertex(k)), 1e-9);
        for (std::size_t k = 0; k < 6; ++k) {
            Vec2d e = r.aligned.vertex(k) - r.aligned.vertex(k + 5);
            EXPECT_LE(std::abs(cross(e, family_direction(6, k))), 1e-9 * norm(e));
            EXPECT_GT(dot(e, family_direction(6, k)), 0.0);
        }
    }
}

TEST(Pipeline, PlaneIsometriesGiveSamePoint) {
    auto F = area_form(5);
    Rng rng(83);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int i = 0; i < 30; ++i) {
        Polygon P{random_equilateral_vertices(rng, 5)};
        auto p = equilateral_to_hyperbolic(F, P);
        auto q = equilateral_to_hyperbolic(F, transform(P, unit_from_angle(U(rng)), {U(rng), U(rng)}));
        EXPECT_LE(hyperbolic_distance(F, p, q), 1e-9);
    }
}

TEST(Pipeline, ReflectionActsIsometrically) {
    auto F = area_form(5);
    Rng rng(89);
    for (int i = 0; i < 30; ++i) {
        Polygon P{random_equilateral_vertices(rng, 5)}, Q{random_equilateral_vertices(rng, 5)};
        double d = hyperbolic_distance(F, equilateral_to_hyperbolic(F, P), equilateral_to_hyperbolic(F, Q));
        double dm = hyperbolic_distance(F, equilateral_to_hyperbolic(F, mirrored(P)), equilateral_to_hyperbolic(F, mirrored(Q)));
        EXPECT_NEAR(d, dm, 1e-9);
    }
}

TEST(Pipeline, DilationCancels) {
    auto F = area_form(7);
    Rng rng(97);
    for (int i = 0; i < 20; ++i) {
        Polygon P{random_equilateral_vertices(rng, 7)};
        EXPECT_LE(hyperbolic_distance(F, equilateral_to_hyperbolic(F, P, 1.0), equilateral_to_hyperbolic(F, P, 3.7)), 1e-10);
    }
}

TEST(Pipeline, ImagesInsideWallPentagon) {
    auto F = area_form(5);
    auto walls = butterfly_walls(F);
    Rng rng(101);
    for (int i = 0; i < 100; ++i)
        EXPECT_GT(wall_margin(F, walls, equilateral_to_hyperbolic(F, Polygon{random_equilateral_vertices(rng, 5)})), 0.0);
}

TEST(Pipeline, OrderMismatchRejected) {
    EXPECT_THROW(equilateral_to_hyperbolic(area_form(5), regular_polygon(6)), Error);
}

TEST(Relabel, RegularIsFixed) {
    auto F = area_form(5);
    auto r = cyclic_relabel(F, regular_polygon(5, 0.1), 1);
    EXPECT_LE(r.discrepancy, 1e-9);
    EXPECT_LE(hyperbolic_distance(F, r.original, r.relabeled), 1e-9);
}

TEST(Relabel, MatchesInducedIsometry) {
    auto F = area_form(5);
    Rng rng(103);
    for (int i = 0; i < 50; ++i) {
        Polygon P{random_equilateral_vertices(rng, 5)};
        for (long m : {1L, 2L, -1L}) EXPECT_LE(cyclic_relabel(F, P, m).discrepancy, 1e-9);
        auto full = cyclic_relabel(F, P, 5);
        EXPECT_LE(hyperbolic_distance(F, full.original, full.relabeled), 1e-9);
    }
}

TEST(Relabel, PreservesDistances) {
    auto F = area_form(5);
    Rng rng(107);
    for (int i = 0; i < 50; ++i) {
        Polygon P{random_equilateral_vertices(rng, 5)}, Q{random_equilateral_vertices(rng, 5)};
        auto a = cyclic_relabel(F, P, 1), b = cyclic_relabel(F, Q, 1);
        EXPECT_NEAR(hyperbolic_distance(F, a.original, b.original), hyperbolic_distance(F, a.relabeled, b.relabeled), 1e-9);
    }
}
