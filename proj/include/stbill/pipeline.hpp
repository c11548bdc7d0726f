#ifndef STBILL_PIPELINE_HPP
#define STBILL_PIPELINE_HPP

// Equilateral polygon -> equiangular polygon -> offsets -> hyperbolic point.

#include <cmath>

#include "stbill/linkage.hpp"
#include "stbill/moduli.hpp"

namespace stbill {

struct PipelineResult {
    EquiangularResult equiangular;
    Polygon aligned;        // equiangular polygon rotated so edge k is parallel to d_k
    OffsetVector offsets;
    HyperbolicPoint point;
};

/// Offsets of the solved equiangular polygon. Its edge j runs along the
/// regular sunburst ray j rotated by the solved phase, so undoing that
/// rotation puts edge j in family j.
inline OffsetVector equiangular_offsets(const EquiangularResult& eq, Polygon* aligned = nullptr) {
    const std::size_t n = eq.polygon.size();
    Vec2d undo = unit_from_angle(-eq.phase);
    Polygon Q;
    Q.vertices.resize(n);
    for (std::size_t k = 0; k < n; ++k) Q.vertices[k] = rotate(eq.polygon.vertex(k + 1), undo);
    OffsetVector s = offsets_from_polygon(Q);
    if (aligned) *aligned = std::move(Q);
    return s;
}

inline PipelineResult equilateral_to_hyperbolic_detailed(const AreaForm& F, const Polygon& P, double r0 = 1.0) {
    if (P.size() != F.n) throw Error(ErrorKind::invalid_input, "pipeline: polygon order differs from the area form");
    PipelineResult out;
    out.equiangular = equilateral_to_equiangular(P, r0);
    out.offsets = equiangular_offsets(out.equiangular, &out.aligned);
    out.point = to_hyperbolic(F, out.offsets);
    return out;
}

inline HyperbolicPoint equilateral_to_hyperbolic(const AreaForm& F, const Polygon& P, double r0 = 1.0) {
    return equilateral_to_hyperbolic_detailed(F, P, r0).point;
}

inline Polygon shift_vertices(const Polygon& P, long m) {
    const long n = long(P.size());
    Polygon out;
    out.vertices.resize(P.size());
    for (long k = 0; k < n; ++k) out.vertices[std::size_t(k)] = P.vertex(std::size_t(((k + m) % n + n) % n));
    return out;
}

struct RelabelReport {
    HyperbolicPoint original;
    HyperbolicPoint relabeled;
    HyperbolicPoint predicted;  // original moved by the induced isometry
    double discrepancy = 0.0;   // distance between relabeled and predicted
};

/// Start the vertex labels of P at vertex m. The image moves by the
/// quotient isometry of the offset relabeling s_k -> s_{k+m}.
inline RelabelReport cyclic_relabel(const AreaForm& F, const Polygon& P, long m = 1) {
    RelabelReport r;
    r.original = equilateral_to_hyperbolic(F, P);
    r.relabeled = equilateral_to_hyperbolic(F, shift_vertices(P, m));
    Eigen::MatrixXd Rq = quotient_matrix(cyclic_relabel_matrix(F.n, -m));
    r.predicted = {Rq * r.original.x};
    r.discrepancy = hyperbolic_distance(F, r.relabeled, r.predicted);
    return r;
}

}  // namespace stbill

#endif
