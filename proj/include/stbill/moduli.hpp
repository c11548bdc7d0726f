#ifndef STBILL_MODULI_HPP
#define STBILL_MODULI_HPP

// Equiangular N-gons as offsets of lines from N root-of-unity families,
// the signed-area form on offset space, butterfly reflections and the
// hyperboloid model of unit-area polygons.
//
// Family k has direction d_k = (cos 2pi k/N, sin 2pi k/N) and left normal
// n_k; its chosen line is l_k = {x : n_k . x = s_k}. Vertex k is
// l_k meet l_{k+1}, so the edge on l_k runs from vertex k-1 to vertex k.
// Translations act on offsets by s_k += n_k . v; the gauge s_0 = s_1 = 0
// picks one representative, and quotient coordinates are (s_2..s_{N-1}).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "stbill/error.hpp"
#include "stbill/exact.hpp"
#include "stbill/linkage.hpp"

namespace stbill {

using OffsetVector = Eigen::VectorXd;

inline Vec2d family_direction(std::size_t n, std::size_t k) {
    return unit_from_angle(two_pi * double(k % n) / double(n));
}
inline Vec2d family_normal(std::size_t n, std::size_t k) { return perp(family_direction(n, k)); }

inline Line<double> family_line(std::size_t n, std::size_t k, double s) {
    return Line<double>(s * family_normal(n, k), family_direction(n, k));
}

inline Polygon polygon_from_offsets(const OffsetVector& s) {
    const std::size_t n = std::size_t(s.size());
    if (n < 3) throw Error(ErrorKind::invalid_input, "offsets: need at least 3 families");
    Polygon P;
    P.vertices.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        P.vertices[k] = intersect_lines(family_line(n, k, s[k]), family_line(n, k + 1, s[(k + 1) % n]));
    return P;
}

inline double signed_area(const OffsetVector& s) { return signed_area(polygon_from_offsets(s)); }

/// Signed length L_k of the edge on l_k, measured along d_k.
inline std::vector<double> edge_lengths(const OffsetVector& s) {
    const std::size_t n = std::size_t(s.size());
    Polygon P = polygon_from_offsets(s);
    std::vector<double> L(n);
    for (std::size_t k = 0; k < n; ++k) L[k] = dot(family_direction(n, k), P.vertex(k) - P.vertex(k + n - 1));
    return L;
}

/// Offsets of an equiangular polygon whose edge from vertex k-1 to vertex k
/// is parallel to d_k.
inline OffsetVector offsets_from_polygon(const Polygon& P) {
    const std::size_t n = P.size();
    OffsetVector s(n);
    for (std::size_t k = 0; k < n; ++k) {
        Vec2d nk = family_normal(n, k);
        s[k] = 0.5 * (dot(nk, P.vertex(k)) + dot(nk, P.vertex(k + n - 1)));
    }
    return s;
}

inline OffsetVector translation_offsets(std::size_t n, const Vec2d& v) {
    OffsetVector t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = dot(family_normal(n, k), v);
    return t;
}

/// Offsets of the regular polygon with inradius r (counterclockwise).
inline OffsetVector regular_offsets(std::size_t n, double r = 1.0) { return OffsetVector::Constant(Eigen::Index(n), -r); }

/// Translate so that s_0 = s_1 = 0.
inline OffsetVector canonical_gauge(const OffsetVector& s) {
    const std::size_t n = std::size_t(s.size());
    Vec2d v = intersect_lines(family_line(n, 0, s[0]), family_line(n, 1, s[1]));
    OffsetVector out = s - translation_offsets(n, v);
    out[0] = out[1] = 0.0;
    return out;
}

inline Eigen::VectorXd to_quotient(const OffsetVector& s) { return canonical_gauge(s).tail(s.size() - 2); }

inline OffsetVector from_quotient(const Eigen::VectorXd& x) {
    OffsetVector s = OffsetVector::Zero(x.size() + 2);
    s.tail(x.size()) = x;
    return s;
}

struct AreaForm {
    std::size_t n = 0;
    Eigen::MatrixXd gram;           // N x N, area(s) = s^T G s
    Eigen::MatrixXd radical_basis;  // N x 2, translations by e_1 and e_2
    Eigen::MatrixXd quotient_gram;  // (N-2) x (N-2) in the s_0 = s_1 = 0 gauge
    Eigen::VectorXd quotient_eigenvalues;
    int positive = 0;
    int negative = 0;
    int radical_dim = 0;

    double q(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const { return x.dot(quotient_gram * y); }
};

inline int numerical_rank(const Eigen::MatrixXd& M, double tol = 1e-9) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    double scale = sv.size() ? std::max(1.0, sv[0]) : 1.0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv[i] > tol * scale;
    return r;
}

inline AreaForm area_form(std::size_t n) {
    if (n < 4) throw Error(ErrorKind::invalid_input, "area_form: N must be at least 4");
    AreaForm F;
    F.n = n;
    const auto N = Eigen::Index(n);
    Eigen::VectorXd diag(N);
    for (Eigen::Index i = 0; i < N; ++i) diag[i] = signed_area(OffsetVector(OffsetVector::Unit(N, i)));
    F.gram.resize(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        F.gram(i, i) = diag[i];
        for (Eigen::Index j = i + 1; j < N; ++j) {
            OffsetVector e = OffsetVector::Unit(N, i) + OffsetVector::Unit(N, j);
            F.gram(i, j) = F.gram(j, i) = 0.5 * (signed_area(e) - diag[i] - diag[j]);
        }
    }

    F.radical_basis.resize(N, 2);
    F.radical_basis.col(0) = translation_offsets(n, {1.0, 0.0});
    F.radical_basis.col(1) = translation_offsets(n, {0.0, 1.0});
    F.radical_dim = int(n) - numerical_rank(F.gram);
    if (F.radical_dim != 2 || (F.gram * F.radical_basis).norm() > 1e-9)
        throw Error(ErrorKind::signature_mismatch, "area form radical is not the translation plane");

    F.quotient_gram = F.gram.bottomRightCorner(N - 2, N - 2);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F.quotient_gram);
    F.quotient_eigenvalues = es.eigenvalues();
    double scale = F.quotient_eigenvalues.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < F.quotient_eigenvalues.size(); ++i) {
        if (F.quotient_eigenvalues[i] > 1e-9 * scale) ++F.positive;
        if (F.quotient_eigenvalues[i] < -1e-9 * scale) ++F.negative;
    }
    if (F.positive != 1 || F.negative != int(n) - 3)
        throw Error(ErrorKind::signature_mismatch,
                    "quotient signature (" + std::to_string(F.positive) + "," + std::to_string(F.negative) + ")");
    return F;
}

/// Reflect l_k through the point l_{k-1} meet l_{k+1}.
inline OffsetVector butterfly(const OffsetVector& s, std::size_t k) {
    const std::size_t n = std::size_t(s.size());
    k %= n;
    std::size_t km = (k + n - 1) % n, kp = (k + 1) % n;
    if (std::abs(cross(family_direction(n, km), family_direction(n, kp))) < 1e-12)
        throw Error(ErrorKind::parallel_witness_lines, "butterfly: neighbouring lines are parallel");
    Vec2d p = intersect_lines(family_line(n, km, s[km]), family_line(n, kp, s[kp]));
    OffsetVector out = s;
    out[k] = 2.0 * dot(family_normal(n, k), p) - s[k];
    return out;
}

inline Eigen::MatrixXd butterfly_matrix(std::size_t n, std::size_t k) {
    const auto N = Eigen::Index(n);
    Eigen::MatrixXd M(N, N);
    for (Eigen::Index i = 0; i < N; ++i) M.col(i) = butterfly(OffsetVector(OffsetVector::Unit(N, i)), k);
    return M;
}

/// Linear map on quotient coordinates induced by a translation-equivariant
/// linear map on offsets.
inline Eigen::MatrixXd quotient_matrix(const Eigen::MatrixXd& M) {
    const Eigen::Index d = M.rows() - 2;
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index i = 0; i < d; ++i) out.col(i) = to_quotient(M * from_quotient(Eigen::VectorXd::Unit(d, i)));
    return out;
}

/// Relabeling (R^m s)_{k+m} = s_k: the offsets of the polygon rotated by
/// 2 pi m / N, with family k renamed k + m.
inline Eigen::MatrixXd cyclic_relabel_matrix(std::size_t n, long m) {
    const auto N = Eigen::Index(n);
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(N, N);
    long nn = long(n);
    for (long k = 0; k < nn; ++k) R(((k + m) % nn + nn) % nn, k) = 1.0;
    return R;
}

struct HyperbolicPoint {
    Eigen::VectorXd x;  // quotient coordinates with Q(x, x) = 1
};

/// Image of the regular polygon: the point fixed by cyclic relabeling.
inline HyperbolicPoint hyperbolic_center(const AreaForm& F) {
    Eigen::VectorXd x = to_quotient(regular_offsets(F.n));
    return {x / std::sqrt(F.q(x, x))};
}

inline HyperbolicPoint to_hyperbolic(const AreaForm& F, const OffsetVector& s) {
    if (std::size_t(s.size()) != F.n) throw Error(ErrorKind::invalid_input, "to_hyperbolic: wrong offset count");
    if (F.n < 5) throw Error(ErrorKind::invalid_input, "to_hyperbolic: N must be at least 5");
    double area = signed_area(s);
    if (!(area > 0.0)) throw Error(ErrorKind::non_positive_area, "to_hyperbolic: signed area is not positive");
    Eigen::VectorXd x = to_quotient(s) / std::sqrt(area);
    if (F.q(x, hyperbolic_center(F).x) < 0.0) x = -x;
    return {x};
}

/// arccosh Q(p, q), evaluated as 2 asinh(sqrt(-Q(p-q, p-q)) / 2), which
/// equals it on the sheet and keeps full precision for nearby points.
inline double hyperbolic_distance(const AreaForm& F, const HyperbolicPoint& p, const HyperbolicPoint& q) {
    Eigen::VectorXd d = p.x - q.x;
    double chord2 = -F.q(d, d);
    if (!(chord2 > 0.0)) return 0.0;
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
}

struct Wall {
    std::size_t index = 0;
    Eigen::VectorXd normal;  // Q(normal, normal) = -1, Q(center, normal) > 0
};

/// Fixed hyperplanes of the butterflies, by their Q-normals. The -1
/// eigenvector of B_k is the k-th basis offset.
inline std::vector<Wall> butterfly_walls(const AreaForm& F) {
    std::vector<Wall> walls(F.n);
    auto c = hyperbolic_center(F);
    for (std::size_t k = 0; k < F.n; ++k) {
        Eigen::VectorXd w = to_quotient(OffsetVector::Unit(Eigen::Index(F.n), Eigen::Index(k)));
        double qq = F.q(w, w);
        if (!(qq < 0.0)) throw Error(ErrorKind::signature_mismatch, "butterfly wall normal is not spacelike");
        w /= std::sqrt(-qq);
        if (F.q(c.x, w) < 0.0) w = -w;
        walls[k] = {k, w};
    }
    return walls;
}

inline std::vector<Wall> pentagon_walls() { return butterfly_walls(area_form(5)); }

/// Smallest Q(x, w) over the walls; positive exactly inside all of them.
inline double wall_margin(const AreaForm& F, const std::vector<Wall>& walls, const HyperbolicPoint& p) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& w : walls) m = std::min(m, F.q(p.x, w.normal));
    return m;
}

struct WallPentagon {
    std::array<std::size_t, 5> order{0, 2, 4, 1, 3};
    std::array<HyperbolicPoint, 5> vertices;  // vertex i lies on walls order[i], order[i+1]
    std::array<double, 5> angles{};
    std::array<double, 5> vertex_margins{};   // Q(vertex, other walls); positive when compact
};

inline WallPentagon wall_pentagon(const AreaForm& F) {
    if (F.n != 5) throw Error(ErrorKind::invalid_input, "wall_pentagon: N must be 5");
    auto walls = butterfly_walls(F);
    auto c = hyperbolic_center(F);
    WallPentagon P;
    for (std::size_t i = 0; i < 5; ++i) {
        const auto& wa = walls[P.order[i]];
        const auto& wb = walls[P.order[(i + 1) % 5]];
        Eigen::Vector3d ga = F.quotient_gram * wa.normal, gb = F.quotient_gram * wb.normal;
        Eigen::VectorXd x = ga.cross(gb);
        double qq = F.q(x, x);
        if (!(qq > 0.0)) throw Error(ErrorKind::degenerate, "wall pentagon vertex is not timelike");
        x /= std::sqrt(qq);
        if (F.q(x, c.x) < 0.0) x = -x;
        P.vertices[i] = {x};
        P.angles[i] = std::acos(std::clamp(F.q(wa.normal, wb.normal), -1.0, 1.0));
        double m = std::numeric_limits<double>::infinity();
        for (const auto& w : walls)
            if (w.index != wa.index && w.index != wb.index) m = std::min(m, F.q(x, w.normal));
        P.vertex_margins[i] = m;
    }
    return P;
}

/// Poincare disk coordinates of a point of the hyperboloid, in a
/// Q-orthonormal frame whose time axis is the center.
inline Eigen::VectorXd poincare_disk(const AreaForm& F, const HyperbolicPoint& p) {
    const auto c = hyperbolic_center(F).x;
    const Eigen::Index d = c.size();
    std::vector<Eigen::VectorXd> frame;
    for (Eigen::Index i = 0; i < d && Eigen::Index(frame.size()) < d - 1; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(d, i);
        v -= F.q(v, c) * c;
        for (const auto& f : frame) v += F.q(v, f) * f;  // Q(f, f) = -1
        double qq = F.q(v, v);
        if (qq > -1e-9) continue;
        frame.push_back(v / std::sqrt(-qq));
    }
    double t = F.q(p.x, c);
    Eigen::VectorXd out(d - 1);
    for (Eigen::Index i = 0; i < d - 1; ++i) out[i] = -F.q(p.x, frame[std::size_t(i)]) / (1.0 + t);
    return out;
}

/// x-coordinate of (l_0 meet l_2) - (l_0 meet l_3) for a pentagon: one
/// translation-invariant linear chart coordinate.
inline double pentagon_chart_c(const OffsetVector& s) {
    Vec2d p = intersect_lines(family_line(5, 0, s[0]), family_line(5, 2, s[2]));
    Vec2d q = intersect_lines(family_line(5, 0, s[0]), family_line(5, 3, s[3]));
    return (p - q).x;
}

}  // namespace stbill

#endif
