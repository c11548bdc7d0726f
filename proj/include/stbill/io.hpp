#ifndef STBILL_IO_HPP
#define STBILL_IO_HPP

// JSON records, SVG figures and PPM rasters.

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stbill/dynamics.hpp"
#include "stbill/linkage.hpp"
#include "stbill/tilings.hpp"
#include "stbill/weave.hpp"

namespace stbill {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Scalars and vectors. Rationals travel as "p/q" strings.

inline json to_json_scalar(const Rational& x) { return x.str(); }
inline json to_json_scalar(double x) { return x; }

template <class T>
T scalar_from_json(const json& j);

template <>
inline Rational scalar_from_json<Rational>(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (!j.is_string()) throw Error(ErrorKind::invalid_input, "expected a rational string");
    return Rational::parse(j.get<std::string>());
}
template <>
inline double scalar_from_json<double>(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>()).to_double();
    return j.get<double>();
}

template <class T>
json to_json(const Vec2<T>& v) {
    return json::array({to_json_scalar(v.x), to_json_scalar(v.y)});
}
template <class T>
Vec2<T> vec_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::invalid_input, "expected a 2-vector");
    return {scalar_from_json<T>(j[0]), scalar_from_json<T>(j[1])};
}

inline json to_json(const GridEdge& e) {
    return {{"axis", e.axis == GridAxis::V ? "V" : "H"}, {"line", e.line}, {"cell", e.cell}};
}
inline GridEdge grid_edge_from_json(const json& j) {
    GridEdge e;
    std::string ax = j.at("axis").get<std::string>();
    if (ax != "H" && ax != "V") throw Error(ErrorKind::invalid_input, "grid edge axis must be H or V");
    e.axis = ax == "V" ? GridAxis::V : GridAxis::H;
    e.line = j.at("line").get<std::int64_t>();
    e.cell = j.at("cell").get<std::int64_t>();
    return e;
}

template <class T>
json to_json(const Particle<T, GridEdge>& p) {
    return {{"point", to_json(p.point)}, {"edge", to_json(p.edge)}, {"direction", to_json(p.direction)}};
}
template <class T>
Particle<T, GridEdge> grid_particle_from_json(const json& j) {
    return {vec_from_json<T>(j.at("point")), grid_edge_from_json(j.at("edge")), vec_from_json<T>(j.at("direction"))};
}

template <class T>
json to_json(const SquareGrid<T>& g) {
    return {{"e1", to_json(g.e1())}, {"e2", to_json(g.e2())}};
}
template <class T>
SquareGrid<T> grid_from_json(const json& j) {
    return SquareGrid<T>(vec_from_json<T>(j.at("e1")), vec_from_json<T>(j.at("e2")));
}

inline json to_json(const LatticeOffset& o) { return json::array({o.i, o.j}); }
inline LatticeOffset offset_from_json(const json& j) { return {j.at(0).get<std::int64_t>(), j.at(1).get<std::int64_t>()}; }

inline Termination termination_from_string(const std::string& s) {
    for (auto t : {Termination::max_steps, Termination::periodic, Termination::translation_periodic,
                   Termination::vertex_hit, Termination::escaped})
        if (s == to_string(t)) return t;
    throw Error(ErrorKind::invalid_input, "unknown termination '" + s + "'");
}

inline json to_json(const BBox& b) {
    if (b.empty()) return nullptr;
    return {{"min", {b.xmin, b.ymin}}, {"max", {b.xmax, b.ymax}}};
}

inline json to_json(const Classification& c) {
    return {{"verdict", to_string(c.verdict)},
            {"evidence", c.evidence},
            {"period", c.period},
            {"drift_a", to_json(c.drift_a)},
            {"drift_b", to_json(c.drift_b)},
            {"bit_growth", c.bit_growth},
            {"diameter_change", c.diameter_change}};
}

// ---------------------------------------------------------------------------
// Orbit records on a pair of lattice grids.

template <class T>
json to_json(const SquareGrid<T>& A, const SquareGrid<T>& B, const OrbitRecord<SquareGrid<T>, SquareGrid<T>>& rec) {
    json states = json::array();
    for (const auto& s : rec.states) states.push_back({{"a", to_json(s.a)}, {"b", to_json(s.b)}});
    json j = {{"scalar", scalar_traits<T>::exact ? "exact" : "float"},
              {"A", to_json(A)},
              {"B", to_json(B)},
              {"states", std::move(states)},
              {"termination", to_string(rec.termination)},
              {"period", rec.period},
              {"drift_a", to_json(rec.drift_a)},
              {"drift_b", to_json(rec.drift_b)},
              {"bit_lengths", rec.bit_lengths},
              {"closure_residual", rec.closure_residual},
              {"bbox_a", to_json(rec.bbox_a)},
              {"bbox_b", to_json(rec.bbox_b)}};
    if (rec.termination == Termination::vertex_hit || rec.termination == Termination::escaped)
        j["failure"] = {{"step", rec.failed_step},
                        {"factor", std::string(1, rec.failed_factor)},
                        {"point", {rec.failed_point.x, rec.failed_point.y}}};
    return j;
}

template <class T>
struct GridOrbitDocument {
    SquareGrid<T> A;
    SquareGrid<T> B;
    OrbitRecord<SquareGrid<T>, SquareGrid<T>> record;
};

template <class T>
GridOrbitDocument<T> grid_orbit_from_json(const json& j) {
    GridOrbitDocument<T> doc{grid_from_json<T>(j.at("A")), grid_from_json<T>(j.at("B")), {}};
    auto& rec = doc.record;
    for (const auto& s : j.at("states"))
        rec.states.push_back({grid_particle_from_json<T>(s.at("a")), grid_particle_from_json<T>(s.at("b"))});
    rec.termination = termination_from_string(j.at("termination").get<std::string>());
    rec.period = j.at("period").get<std::size_t>();
    rec.drift_a = offset_from_json(j.at("drift_a"));
    rec.drift_b = offset_from_json(j.at("drift_b"));
    rec.bit_lengths = j.at("bit_lengths").get<std::vector<std::size_t>>();
    rec.closure_residual = j.at("closure_residual").get<double>();
    for (const auto& s : rec.states) {
        rec.bbox_a.add(to_double(s.a.point));
        rec.bbox_b.add(to_double(s.b.point));
    }
    if (j.contains("failure")) {
        const auto& f = j["failure"];
        rec.failed_step = f.at("step").get<std::size_t>();
        rec.failed_factor = f.at("factor").get<std::string>().at(0);
        rec.failed_point = {f.at("point").at(0).get<double>(), f.at("point").at(1).get<double>()};
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Sunbursts, weave reports and polygons.

inline json to_json(const Sunburst<double>& s) {
    json angles = json::array();
    for (const auto& r : s.rays()) angles.push_back(angle_of(r));
    return {{"angles", angles}};
}
inline Sunburst<double> sunburst_from_json(const json& j) {
    return sunburst_from_angles(j.at("angles").get<std::vector<double>>());
}

inline json to_json(const HolonomyReport& h) {
    return {{"h", h.h}, {"step_factors", h.step_factors}, {"method", h.method == HolonomyMethod::product ? "Product" : "Iteration"}};
}

inline json to_json(const PhaseInterval& I) {
    json arcs = json::array();
    for (const auto& a : I.arcs) arcs.push_back({a.lo, a.hi()});
    return {{"lo", I.lo}, {"hi", I.hi}, {"length", I.length()}, {"per_index_arcs", arcs}};
}

inline json to_json(const Polygon& P) {
    json v = json::array();
    for (const auto& p : P.vertices) v.push_back({p.x, p.y});
    return {{"vertices", v}};
}
inline Polygon polygon_from_json(const json& j) {
    Polygon P;
    const json& v = j.is_array() ? j : j.at("vertices");
    for (const auto& p : v) P.vertices.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    return P;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::invalid_input, "malformed JSON in '" + path + "': " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path + "'");
    out << text;
    if (!out) throw Error(ErrorKind::io, "write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// SVG in a y-up frame fitted to the content with a 5% margin.

class SvgCanvas {
public:
    void include(const Vec2d& p) { box_.add(p); }

    void polyline(const std::vector<Vec2d>& pts, const std::string& color, double width = 1.0, bool closed = false,
                  const std::string& fill = "none") {
        for (const auto& p : pts) include(p);
        std::ostringstream os;
        os << (closed ? "<polygon" : "<polyline") << " fill=\"" << fill << "\" stroke=\"" << color << "\" stroke-width=\"@W"
           << width << "@\" points=\"";
        for (const auto& p : pts) os << p.x << ',' << -p.y << ' ';
        os << "\"/>";
        items_.push_back(os.str());
    }

    void segment(const Vec2d& a, const Vec2d& b, const std::string& color, double width = 1.0) {
        polyline({a, b}, color, width);
    }

    void dot(const Vec2d& p, const std::string& color, double radius = 2.0) {
        include(p);
        std::ostringstream os;
        os << "<circle cx=\"" << p.x << "\" cy=\"" << -p.y << "\" r=\"@W" << radius << "@\" fill=\"" << color << "\"/>";
        items_.push_back(os.str());
    }

    void label(const Vec2d& p, const std::string& text, const std::string& color = "black") {
        std::ostringstream os;
        os << "<text x=\"" << p.x << "\" y=\"" << -p.y << "\" font-size=\"@W10@\" fill=\"" << color << "\">" << text
           << "</text>";
        items_.push_back(os.str());
    }

    std::string str(int pixels = 800) const {
        BBox b = box_;
        if (b.empty()) b.add({0, 0});
        double w = std::max(b.xmax - b.xmin, 1e-9), h = std::max(b.ymax - b.ymin, 1e-9);
        double m = 0.05 * std::max(w, h);
        double unit = (std::max(w, h) + 2 * m) / pixels;  // user units per pixel
        std::ostringstream os;
        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << pixels << "\" height=\""
           << int(pixels * (h + 2 * m) / (std::max(w, h) + 2 * m)) << "\" viewBox=\"" << b.xmin - m << ' '
           << -(b.ymax + m) << ' ' << w + 2 * m << ' ' << h + 2 * m << "\">\n"
           << "<rect x=\"" << b.xmin - m << "\" y=\"" << -(b.ymax + m) << "\" width=\"" << w + 2 * m << "\" height=\""
           << h + 2 * m << "\" fill=\"white\"/>\n";
        for (const auto& item : items_) os << scale_widths(item, unit) << '\n';
        os << "</svg>\n";
        return os.str();
    }

private:
    // "@W<x>@" marks a length given in pixels.
    static std::string scale_widths(const std::string& s, double unit) {
        std::string out;
        std::size_t pos = 0;
        for (;;) {
            auto a = s.find("@W", pos);
            if (a == std::string::npos) break;
            auto b = s.find('@', a + 2);
            out += s.substr(pos, a - pos);
            out += std::to_string(std::stod(s.substr(a + 2, b - a - 2)) * unit);
            pos = b + 1;
        }
        return out + s.substr(pos);
    }

    BBox box_;
    std::vector<std::string> items_;
};

// ---------------------------------------------------------------------------
// Phase portraits as binary PPM.

struct Rgb {
    std::uint8_t r, g, b;
};

inline Rgb verdict_color(Verdict v) {
    switch (v) {
        case Verdict::periodic: return {0, 170, 0};
        case Verdict::unbounded_drift: return {220, 0, 0};
        case Verdict::bounded_attracted: return {0, 0, 220};
        case Verdict::singular: return {0, 0, 0};
        case Verdict::inconclusive: return {128, 128, 128};
    }
    return {255, 255, 255};
}

/// Row j = 0 of the portrait is the bottom row of the image.
inline std::string to_ppm(const PhasePortrait& img) {
    std::ostringstream os;
    os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    for (std::size_t row = 0; row < img.height; ++row) {
        std::size_t j = img.height - 1 - row;
        for (std::size_t i = 0; i < img.width; ++i) {
            Rgb c = verdict_color(img.at(i, j));
            os.put(char(c.r)).put(char(c.g)).put(char(c.b));
        }
    }
    return os.str();
}

}  // namespace stbill

#endif
