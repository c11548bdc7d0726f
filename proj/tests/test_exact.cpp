#include <random>

#include <gtest/gtest.h>

#include "stbill/exact.hpp"

using namespace stbill;

namespace {

// Circle point from integer arithmetic on t = p/q:
// ((q^2 - p^2) / (q^2 + p^2), 2pq / (q^2 + p^2)).
Vec2q circle_point_by_integers(long p, long q) {
    mpz_class P(p), Q(q);
    mpz_class den = Q * Q + P * P;
    return {Rational(mpq_class(Q * Q - P * P, den)), Rational(mpq_class(2 * P * Q, den))};
}

}  // namespace

TEST(Rational, CanonicalForm) {
    Rational r(6, -4);
    EXPECT_EQ(r.numerator(), -3);
    EXPECT_EQ(r.denominator(), 2);
    EXPECT_EQ(Rational::parse("10/4"), Rational(5, 2));
    EXPECT_EQ(Rational::parse("-0.25"), Rational(-1, 4));
    EXPECT_EQ(Rational::parse("7"), Rational(7));
    EXPECT_EQ(Rational(3, 9).str(), "1/3");
}

TEST(Rational, RejectsBadInput) {
    EXPECT_THROW(Rational(1, 0), Error);
    EXPECT_THROW(Rational::parse("1/0"), Error);
    EXPECT_THROW(Rational::parse("abc"), Error);
    EXPECT_THROW(Rational::parse(""), Error);
    try {
        (void)(Rational(1) / Rational(0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degenerate);
    }
}

TEST(Rational, BitLength) {
    EXPECT_EQ(Rational(0).bit_length(), 0u);
    EXPECT_EQ(Rational(1).bit_length(), 1u);
    EXPECT_EQ(Rational(255, 2).bit_length(), 8u);
    EXPECT_EQ(Rational(3, 256).bit_length(), 9u);
    // Canonicalization never increases it.
    EXPECT_LE(Rational(512, 1024).bit_length(), 2u);
}

TEST(Rational, FloorCeil) {
    EXPECT_EQ(Rational(7, 2).floor(), 3);
    EXPECT_EQ(Rational(7, 2).ceil(), 4);
    EXPECT_EQ(Rational(-7, 2).floor(), -4);
    EXPECT_EQ(Rational(-7, 2).ceil(), -3);
    EXPECT_EQ(Rational(4).floor(), 4);
    EXPECT_EQ(Rational(4).ceil(), 4);
}

TEST(CirclePoint, OneThird) {
    EXPECT_EQ(rational_circle_point(Rational(1, 3)), Vec2q(Rational(4, 5), Rational(3, 5)));
}

TEST(CirclePoint, Zero) { EXPECT_EQ(rational_circle_point(Rational(0)), Vec2q(Rational(1), Rational(0))); }

TEST(CirclePoint, SevenElevenths) {
    EXPECT_EQ(circle_point_by_integers(7, 11), Vec2q(Rational(36, 85), Rational(77, 85)));
    EXPECT_EQ(rational_circle_point(Rational(7, 11)), Vec2q(Rational(36, 85), Rational(77, 85)));
}

TEST(CirclePoint, RandomRationalsAgreeAndAreUnit) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> num(-5000, 5000), den(1, 5000);
    for (int i = 0; i < 1000; ++i) {
        long p = num(rng), q = den(rng);
        Vec2q z = rational_circle_point(Rational(p, q));
        EXPECT_EQ(z, circle_point_by_integers(p, q));
        EXPECT_EQ(norm2(z), Rational(1));
    }
}

TEST(Rotate, Examples) {
    Vec2q u(Rational(4, 5), Rational(3, 5));
    EXPECT_EQ(rotate(Vec2q(Rational(1), Rational(0)), u), u);
    EXPECT_EQ(rotate(Vec2q(Rational(0), Rational(1)), u), Vec2q(Rational(-3, 5), Rational(4, 5)));
}

TEST(Rotate, InverseIsExact) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> d(-1000, 1000), q(1, 1000);
    for (int i = 0; i < 200; ++i) {
        Vec2q u = rational_circle_point(Rational(d(rng), q(rng)));
        Vec2q v(Rational(d(rng), q(rng)), Rational(d(rng), q(rng)));
        EXPECT_EQ(rotate(rotate(v, u), conj(u)), v);
        EXPECT_EQ(norm2(rotate(v, u)), norm2(v));
    }
}

TEST(Cross, AntisymmetricAndBilinear) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> d(-50, 50), q(1, 50);
    auto rv = [&] { return Vec2q(Rational(d(rng), q(rng)), Rational(d(rng), q(rng))); };
    for (int i = 0; i < 200; ++i) {
        Vec2q u = rv(), v = rv(), w = rv();
        Rational a(d(rng), q(rng));
        EXPECT_EQ(cross(u, v), -cross(v, u));
        EXPECT_EQ(cross(u + a * w, v), cross(u, v) + a * cross(w, v));
    }
}

TEST(Lines, Intersections) {
    Line<Rational> xaxis({Rational(0), Rational(0)}, {Rational(1), Rational(0)});
    Line<Rational> yaxis({Rational(0), Rational(0)}, {Rational(0), Rational(1)});
    EXPECT_EQ(intersect_lines(xaxis, yaxis), Vec2q(Rational(0), Rational(0)));
    Line<Rational> l1({Rational(0), Rational(1)}, {Rational(1), Rational(0)});
    Line<Rational> l2({Rational(0), Rational(0)}, {Rational(1), Rational(1)});
    EXPECT_EQ(intersect_lines(l1, l2), Vec2q(Rational(1), Rational(1)));
}

TEST(Lines, ParallelIsAnError) {
    Line<Rational> l1({Rational(0), Rational(0)}, {Rational(2), Rational(3)});
    Line<Rational> l2({Rational(1), Rational(0)}, {Rational(-4), Rational(-6)});
    try {
        intersect_lines(l1, l2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::parallel_lines);
    }
    EXPECT_THROW(Line<Rational>({Rational(0), Rational(0)}, {Rational(0), Rational(0)}), Error);
}

TEST(Lines, RepresentationIndependentEquality) {
    Line<Rational> a({Rational(0), Rational(1)}, {Rational(1), Rational(2)});
    Line<Rational> b({Rational(2), Rational(5)}, {Rational(-3), Rational(-6)});
    Line<Rational> c({Rational(2), Rational(4)}, {Rational(1), Rational(2)});
    EXPECT_TRUE(a == b);
    EXPECT_FALSE(a == c);
}

TEST(Lines, IntersectionIsIncidentExactly) {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long> d(-30, 30), q(1, 30);
    auto rv = [&] { return Vec2q(Rational(d(rng), q(rng)), Rational(d(rng), q(rng))); };
    for (int i = 0; i < 200; ++i) {
        Vec2q d1 = rv(), d2 = rv();
        if (cross(d1, d2).sign() == 0) continue;
        Line<Rational> l1(rv(), d1), l2(rv(), d2);
        Vec2q p = intersect_lines(l1, l2);
        EXPECT_TRUE(l1.contains(p));
        EXPECT_TRUE(l2.contains(p));
    }
}
