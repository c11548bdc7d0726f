#ifndef STBILL_EXACT_HPP
#define STBILL_EXACT_HPP

// Exact rational scalars, planar vectors over any scalar kind, and the
// line primitives the tilings are built from.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "stbill/error.hpp"

namespace stbill {

/// Arbitrary-precision rational in canonical form (reduced, positive
/// denominator). Every arithmetic result is canonicalized.
class Rational {
public:
    Rational() = default;
    Rational(long n) : q_(n) {}  // NOLINT(google-explicit-constructor)
    Rational(long n, long d) : q_(n, d) {
        if (d == 0) throw Error(ErrorKind::invalid_input, "rational with zero denominator");
        q_.canonicalize();
    }
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    /// Parses "p", "p/q" or a terminating decimal such as "0.25".
    static Rational parse(std::string_view text) {
        std::string s(text);
        if (s.empty()) throw Error(ErrorKind::invalid_input, "empty rational");
        auto dot = s.find('.');
        if (dot != std::string::npos && s.find('/') == std::string::npos) {
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::size_t frac = s.size() - dot - 1;
            mpz_class num;
            if (num.set_str(digits, 10) != 0)
                throw Error(ErrorKind::invalid_input, "malformed rational '" + s + "'");
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
            return Rational(mpq_class(num, den));
        }
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw Error(ErrorKind::invalid_input, "malformed rational '" + s + "'");
        if (q.get_den() == 0)
            throw Error(ErrorKind::invalid_input, "rational with zero denominator");
        return Rational(std::move(q));
    }

    const mpq_class& value() const { return q_; }
    mpz_class numerator() const { return q_.get_num(); }
    mpz_class denominator() const { return q_.get_den(); }

    /// max(bits(|num|), bits(den)); zero has bit length 0.
    std::size_t bit_length() const {
        if (sgn(q_) == 0) return 0;
        return std::max(mpz_sizeinbase(q_.get_num_mpz_t(), 2), mpz_sizeinbase(q_.get_den_mpz_t(), 2));
    }

    int sign() const { return sgn(q_); }
    double to_double() const { return q_.get_d(); }

    /// Largest integer <= value.
    std::int64_t floor() const {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        if (!r.fits_slong_p()) throw Error(ErrorKind::overflow, "grid index exceeds 64 bits");
        return r.get_si();
    }
    std::int64_t ceil() const {
        mpz_class r;
        mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        if (!r.fits_slong_p()) throw Error(ErrorKind::overflow, "grid index exceeds 64 bits");
        return r.get_si();
    }

    std::string str() const { return q_.get_str(); }

    std::size_t hash() const {
        std::size_t h = std::hash<long>{}(mpz_get_si(q_.get_num_mpz_t()));
        h ^= std::hash<long>{}(mpz_get_si(q_.get_den_mpz_t())) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= mpz_size(q_.get_num_mpz_t()) * 0x100000001b3ULL;
        return h;
    }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.sign() == 0) throw Error(ErrorKind::degenerate, "division by zero");
        q_ /= o.q_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class q_;
};

using ExactScalar = Rational;

// Scalar-kind customization. Exact scalars compare literally; floating
// scalars use an absolute tolerance where a geometric coincidence matters.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational ratio(long p, long q) { return Rational(p, q); }
    static std::int64_t floor(const Rational& x) { return x.floor(); }
    static std::int64_t ceil(const Rational& x) { return x.ceil(); }
    static int sign(const Rational& x) { return x.sign(); }
    static double to_double(const Rational& x) { return x.to_double(); }
    static std::size_t bit_length(const Rational& x) { return x.bit_length(); }
    static bool near(const Rational& a, const Rational& b) { return a == b; }
    static std::string str(const Rational& x) { return x.str(); }
    static std::size_t hash(const Rational& x) { return x.hash(); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    // Coincidence tolerance for vertex hits, closure and state matching.
    static constexpr double eps = 1e-9;
    static double ratio(long p, long q) { return double(p) / double(q); }
    static std::int64_t floor(double x) { return static_cast<std::int64_t>(std::floor(x)); }
    static std::int64_t ceil(double x) { return static_cast<std::int64_t>(std::ceil(x)); }
    static int sign(double x) { return (x > 0) - (x < 0); }
    static double to_double(double x) { return x; }
    static std::size_t bit_length(double) { return 53; }
    static bool near(double a, double b) { return std::abs(a - b) <= eps; }
    static std::string str(double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return buf;
    }
    static std::size_t hash(double x) { return std::hash<double>{}(x); }
};

template <class T>
struct Vec2 {
    T x{};
    T y{};

    Vec2() = default;
    Vec2(T x_, T y_) : x(std::move(x_)), y(std::move(y_)) {}

    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
    friend Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
    friend Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
    friend Vec2 operator*(const T& s, const Vec2& v) { return {s * v.x, s * v.y}; }
    friend Vec2 operator*(const Vec2& v, const T& s) { return {v.x * s, v.y * s}; }
    friend Vec2 operator/(const Vec2& v, const T& s) { return {v.x / s, v.y / s}; }
    friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
    friend bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }
    friend std::ostream& operator<<(std::ostream& os, const Vec2& v) { return os << '(' << v.x << ", " << v.y << ')'; }
};

using Vec2q = Vec2<Rational>;
using Vec2d = Vec2<double>;

template <class T>
T cross(const Vec2<T>& u, const Vec2<T>& v) { return u.x * v.y - u.y * v.x; }

template <class T>
T dot(const Vec2<T>& u, const Vec2<T>& v) { return u.x * v.x + u.y * v.y; }

template <class T>
T norm2(const Vec2<T>& v) { return dot(v, v); }

inline double norm(const Vec2d& v) { return std::hypot(v.x, v.y); }

/// Counterclockwise quarter turn.
template <class T>
Vec2<T> perp(const Vec2<T>& v) { return {-v.y, v.x}; }

template <class T>
Vec2<T> conj(const Vec2<T>& v) { return {v.x, -v.y}; }

template <class T>
Vec2d to_double(const Vec2<T>& v) {
    return {scalar_traits<T>::to_double(v.x), scalar_traits<T>::to_double(v.y)};
}

template <class T>
std::size_t bit_length(const Vec2<T>& v) {
    return std::max(scalar_traits<T>::bit_length(v.x), scalar_traits<T>::bit_length(v.y));
}

template <class T>
bool near(const Vec2<T>& a, const Vec2<T>& b) {
    return scalar_traits<T>::near(a.x, b.x) && scalar_traits<T>::near(a.y, b.y);
}

/// Point of the unit circle ((1-t^2)/(1+t^2), 2t/(1+t^2)); exact over Q.
inline Vec2q rational_circle_point(const Rational& t) {
    Rational t2 = t * t;
    Rational den = Rational(1) + t2;
    return {(Rational(1) - t2) / den, (Rational(2) * t) / den};
}

/// Complex multiplication v * u; a rotation when |u| = 1.
template <class T>
Vec2<T> rotate(const Vec2<T>& v, const Vec2<T>& u) {
    return {v.x * u.x - v.y * u.y, v.x * u.y + v.y * u.x};
}

inline Vec2d unit_from_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline double angle_of(const Vec2d& v) { return std::atan2(v.y, v.x); }

template <class T>
struct Line {
    Vec2<T> point;
    Vec2<T> direction;

    Line(Vec2<T> p, Vec2<T> d) : point(std::move(p)), direction(std::move(d)) {
        if (scalar_traits<T>::sign(direction.x) == 0 && scalar_traits<T>::sign(direction.y) == 0)
            throw Error(ErrorKind::invalid_input, "line with zero direction");
    }

    bool contains(const Vec2<T>& p) const {
        T c = cross(direction, p - point);
        if constexpr (scalar_traits<T>::exact) {
            return c == T(0);
        } else {
            return std::abs(c) <= scalar_traits<T>::eps * std::max(1.0, norm(direction));
        }
    }

    /// Same point set, regardless of representation.
    friend bool operator==(const Line& a, const Line& b) {
        return a.contains(b.point) && a.contains(b.point + b.direction) && b.contains(a.point);
    }
};

/// Unique common point of two non-parallel lines.
template <class T>
Vec2<T> intersect_lines(const Line<T>& l1, const Line<T>& l2) {
    T den = cross(l1.direction, l2.direction);
    if (scalar_traits<T>::sign(den) == 0)
        throw Error(ErrorKind::parallel_lines, "intersect_lines: parallel lines");
    T s = cross(l2.point - l1.point, l2.direction) / den;
    return l1.point + s * l1.direction;
}

}  // namespace stbill

template <>
struct std::hash<stbill::Rational> {
    std::size_t operator()(const stbill::Rational& r) const { return r.hash(); }
};

#endif
