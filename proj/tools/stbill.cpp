// Command-line front end for the tiling-billiard library.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stbill/dynamics.hpp"
#include "stbill/io.hpp"
#include "stbill/linkage.hpp"
#include "stbill/moduli.hpp"
#include "stbill/pipeline.hpp"
#include "stbill/random.hpp"
#include "stbill/weave.hpp"

using namespace stbill;

namespace {

struct Options {
    std::string t = "1/3";
    std::string angle;
    bool use_float = false;
    std::size_t n = 5;
    std::uint64_t seed = 1;
    std::size_t max_steps = 2000;
    double tol = 1e-12;
    std::string out;
    std::string json_path;
    std::string resolution = "64x64";
    std::string edge_a = "V", edge_b = "H";
    std::string pa = "1/3", pb = "2/5";
    std::string a_file, b_file, in_file;
    bool random = false;
    bool balanced = false;
    bool dump_config = false;
};

json options_to_json(const std::string& mode, const Options& o) {
    return {{"mode", mode},         {"t", o.t},           {"angle", o.angle},       {"float", o.use_float},
            {"n", o.n},             {"seed", o.seed},     {"max_steps", o.max_steps}, {"tol", o.tol},
            {"out", o.out},         {"json", o.json_path}, {"resolution", o.resolution}, {"edge_a", o.edge_a},
            {"edge_b", o.edge_b},   {"pa", o.pa},         {"pb", o.pb},             {"a", o.a_file},
            {"b", o.b_file},        {"in", o.in_file},    {"random", o.random},     {"balanced", o.balanced}};
}

// A JSON config becomes the equivalent flag list.
std::vector<std::string> config_to_args(const json& cfg) {
    if (!cfg.contains("mode")) throw Error(ErrorKind::invalid_input, "config needs a \"mode\" entry");
    std::vector<std::string> args{cfg["mode"].get<std::string>()};
    for (const auto& [key, value] : cfg.items()) {
        if (key == "mode") continue;
        std::string flag = "--";
        for (char c : key) flag += c == '_' ? '-' : c;
        if (key == "float") flag = "--float";
        if (key == "json") flag = "--json";
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_string()) {
            if (!value.get<std::string>().empty()) {
                args.push_back(flag);
                args.push_back(value.get<std::string>());
            }
        } else if (value.is_number_unsigned() || value.is_number_integer()) {
            args.push_back(flag);
            args.push_back(std::to_string(value.get<long long>()));
        } else if (value.is_number()) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", value.get<double>());
            args.push_back(flag);
            args.push_back(buf);
        } else {
            throw Error(ErrorKind::invalid_input, "config entry '" + key + "' has an unsupported type");
        }
    }
    return args;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_text_file(path, text);
}

GridEdge edge_flag(const std::string& s) {
    if (s == "V" || s == "v") return {GridAxis::V, 0, 0};
    if (s == "H" || s == "h") return {GridAxis::H, 0, 0};
    throw Error(ErrorKind::invalid_input, "edge must be V or H, got '" + s + "'");
}

// "pi/4", "3pi/8", "-pi/3" or a plain number of radians.
double parse_angle(const std::string& s) {
    auto p = s.find("pi");
    if (p == std::string::npos) return std::stod(s);
    double coef = 1.0;
    std::string head = s.substr(0, p);
    if (head == "-") coef = -1.0;
    else if (!head.empty() && head != "+") coef = std::stod(head);
    double den = 1.0;
    std::string tail = s.substr(p + 2);
    if (!tail.empty()) {
        if (tail[0] != '/') throw Error(ErrorKind::invalid_input, "malformed angle '" + s + "'");
        den = std::stod(tail.substr(1));
    }
    return coef * M_PI / den;
}

std::pair<std::size_t, std::size_t> parse_resolution(const std::string& s) {
    auto x = s.find_first_of("xX");
    if (x == std::string::npos) throw Error(ErrorKind::invalid_input, "resolution must be WxH");
    long w = std::stol(s.substr(0, x)), h = std::stol(s.substr(x + 1));
    if (w <= 0 || h <= 0) throw Error(ErrorKind::invalid_input, "resolution must be positive");
    return {std::size_t(w), std::size_t(h)};
}

template <class T>
SquareGrid<T> rotated_grid(const Options& o);

template <>
SquareGrid<Rational> rotated_grid<Rational>(const Options& o) {
    if (!o.angle.empty()) throw Error(ErrorKind::invalid_input, "--angle needs --float (irrational rotation)");
    return SquareGrid<Rational>(rational_circle_point(Rational::parse(o.t)));
}

template <>
SquareGrid<double> rotated_grid<double>(const Options& o) {
    if (!o.angle.empty()) return SquareGrid<double>(unit_from_angle(parse_angle(o.angle)));
    return SquareGrid<double>(to_double(rational_circle_point(Rational::parse(o.t))));
}

template <class T>
T parse_scalar(const std::string& s) {
    if constexpr (scalar_traits<T>::exact) return Rational::parse(s);
    else return Rational::parse(s).to_double();
}

template <class T>
void draw_grid_panel(SvgCanvas& svg, const SquareGrid<T>& g, const std::vector<Vec2d>& pts, const Vec2d& shift,
                     const std::string& color) {
    BBox box;
    for (const auto& p : pts) box.add(p);
    Vec2d e1 = to_double(g.e1()), e2 = to_double(g.e2());
    double det = cross(e1, e2);
    auto local = [&](const Vec2d& p) { return Vec2d{cross(p, e2) / det, cross(e1, p) / det}; };
    double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
    for (Vec2d c : {Vec2d{box.xmin, box.ymin}, Vec2d{box.xmin, box.ymax}, Vec2d{box.xmax, box.ymin}, Vec2d{box.xmax, box.ymax}}) {
        Vec2d l = local(c);
        umin = std::min(umin, l.x), umax = std::max(umax, l.x);
        vmin = std::min(vmin, l.y), vmax = std::max(vmax, l.y);
    }
    long u0 = long(std::floor(umin)), u1 = long(std::ceil(umax)), v0 = long(std::floor(vmin)), v1 = long(std::ceil(vmax));
    if ((u1 - u0) + (v1 - v0) <= 400) {
        for (long u = u0; u <= u1; ++u)
            svg.segment(shift + double(u) * e1 + double(v0) * e2, shift + double(u) * e1 + double(v1) * e2, "#dddddd", 0.5);
        for (long v = v0; v <= v1; ++v)
            svg.segment(shift + double(u0) * e1 + double(v) * e2, shift + double(u1) * e1 + double(v) * e2, "#dddddd", 0.5);
    }
    std::vector<Vec2d> moved;
    for (const auto& p : pts) moved.push_back(shift + p);
    svg.polyline(moved, color, 1.0);
    if (!moved.empty()) svg.dot(moved.front(), "black", 3.0);
}

template <class T>
int grid_orbit(const Options& o) {
    SquareGrid<T> A;
    SquareGrid<T> B = rotated_grid<T>(o);
    auto s0 = grid_start(A, B, edge_flag(o.edge_a), edge_flag(o.edge_b), parse_scalar<T>(o.pa), parse_scalar<T>(o.pb));
    auto rec = run_orbit(A, B, s0, o.max_steps);
    auto cls = classify(rec);
    json doc = to_json(A, B, rec);
    doc["classification"] = to_json(cls);
    if (!o.json_path.empty()) emit(o.json_path, doc.dump(1) + "\n");
    if (!o.out.empty()) {
        std::vector<Vec2d> pa, pb;
        for (const auto& s : rec.states) {
            pa.push_back(to_double(s.a.point));
            pb.push_back(to_double(s.b.point));
        }
        BBox ba;
        for (const auto& p : pa) ba.add(p);
        BBox bb;
        for (const auto& p : pb) bb.add(p);
        double gap = 1.2 * std::max(1.0, std::max(ba.xmax - ba.xmin, ba.ymax - ba.ymin));
        SvgCanvas svg;
        draw_grid_panel(svg, A, pa, {0.0, 0.0}, "#1f4fbf");
        draw_grid_panel(svg, B, pb, {ba.xmax - bb.xmin + gap * 0.2 + 1.0, 0.0}, "#bf1f3f");
        emit(o.out, svg.str());
    }
    std::cerr << "termination: " << to_string(rec.termination) << "\n"
              << "verdict: " << to_string(cls.verdict) << "\n"
              << "evidence: " << cls.evidence << "\n";
    if (rec.termination == Termination::translation_periodic)
        std::cerr << "drift (world, factor a): (" << to_double(A.to_world({T(rec.drift_a.i), T(rec.drift_a.j)})).x << ", "
                  << to_double(A.to_world({T(rec.drift_a.i), T(rec.drift_a.j)})).y << ")\n";
    return 0;
}

template <class T>
int grid_portrait(const Options& o) {
    SquareGrid<T> A;
    SquareGrid<T> B = rotated_grid<T>(o);
    auto [w, h] = parse_resolution(o.resolution);
    auto img = phase_portrait(A, B, edge_flag(o.edge_a), edge_flag(o.edge_b), w, h, o.max_steps);
    if (o.out.empty()) throw Error(ErrorKind::invalid_input, "grid-portrait needs --out <file.ppm>");
    write_text_file(o.out, to_ppm(img));
    std::map<std::string, std::size_t> tally;
    for (auto v : img.cells) ++tally[to_string(v)];
    for (const auto& [k, v] : tally) std::cerr << k << ": " << v << "\n";
    return 0;
}

std::string ray_color(std::size_t k, std::size_t n) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "hsl(%d,70%%,45%%)", int(360.0 * double(k) / double(n)));
    return buf;
}

int sunburst_solve(const Options& o) {
    Rng rng(o.seed);
    std::optional<Sunburst<double>> A, B;
    if (!o.a_file.empty()) A = sunburst_from_json(read_json_file(o.a_file));
    if (!o.b_file.empty()) B = sunburst_from_json(read_json_file(o.b_file));
    if (!A) A = o.random ? (o.balanced ? random_balanced_sunburst(rng, o.n) : random_sunburst(rng, o.n)) : regular_sunburst(o.n);
    if (!B) B = regular_sunburst(A->size());
    json report = {{"A", to_json(*A)}, {"B", to_json(*B)}};
    auto I = weave_interval_or_empty(*A, *B);
    report["interval"] = to_json(I);
    if (I.empty()) {
        std::cerr << "EmptyInterval: no phase makes the pair an oriented weave\n";
        for (std::size_t k = 0; k < I.arcs.size(); ++k)
            std::cerr << "  arc " << k << ": (" << I.arcs[k].lo << ", " << I.arcs[k].hi() << ")\n";
        if (!o.json_path.empty()) emit(o.json_path, report.dump(1) + "\n");
        return 2;
    }
    auto sol = solve_phase_detailed(*A, *B, o.tol);
    SunburstPair pair(*A, *B, sol.theta);
    auto pts = orbit_sunburst(pair, 1.0, pair.size());
    double closure = norm(pts.back() - pts.front());
    report["theta"] = sol.theta;
    report["log_h"] = sol.log_h;
    report["iterations"] = sol.iterations;
    report["holonomy"] = to_json(holonomy(pair));
    report["closure_residual"] = closure;
    pts.pop_back();
    report["orbit"] = to_json(Polygon{pts});
    std::cout << "theta* = " << sol.theta << "\nlog h = " << sol.log_h << "\nclosure residual = " << closure << "\n";
    if (!o.json_path.empty()) emit(o.json_path, report.dump(1) + "\n");
    if (!o.out.empty()) {
        SvgCanvas svg;
        double R = 0.0;
        for (const auto& p : pts) R = std::max(R, norm(p));
        R *= 1.3;
        const std::size_t n = pair.size();
        for (std::size_t k = 0; k < n; ++k) {
            Vec2d a = pair.a(k), b = pair.b(k);
            svg.segment({0, 0}, (R / norm(a)) * a, ray_color(k, n), 2.0);
            svg.segment({0, 0}, (0.8 * R / norm(b)) * b, ray_color(k, n), 1.0);
        }
        svg.polyline(pts, "black", 1.5, true);
        emit(o.out, svg.str());
    }
    return 0;
}

Polygon input_polygon(const Options& o, Rng& rng) {
    if (!o.in_file.empty()) return polygon_from_json(read_json_file(o.in_file));
    if (o.random) return Polygon{random_equilateral_vertices(rng, o.n)};
    Polygon P;
    Vec2d cur{0.0, 0.0};
    for (std::size_t k = 0; k < o.n; ++k) {
        P.vertices.push_back(cur);
        cur += unit_from_angle(two_pi * double(k) / double(o.n));
    }
    return P;
}

int linkage_convert(const Options& o) {
    Rng rng(o.seed);
    Polygon P = input_polygon(o, rng);
    auto res = equilateral_to_equiangular(P, 1.0, o.tol);
    json report = {{"input", to_json(P)},
                   {"equiangular", to_json(res.polygon)},
                   {"phase", res.phase},
                   {"log_h", res.log_h},
                   {"closure_residual", res.closure_residual}};
    json angles = json::array();
    for (std::size_t k = 0; k < res.polygon.size(); ++k) angles.push_back(interior_angle(res.polygon, k));
    report["interior_angles"] = angles;
    if (!o.json_path.empty()) emit(o.json_path, report.dump(1) + "\n");
    if (!o.out.empty()) {
        SvgCanvas svg;
        Vec2d c{0, 0};
        for (const auto& v : P.vertices) c += v;
        c = (1.0 / double(P.size())) * c;
        std::vector<Vec2d> left;
        for (const auto& v : P.vertices) left.push_back(v - c);
        double shift = 0.0;
        for (const auto& v : left) shift = std::max(shift, norm(v));
        std::vector<Vec2d> right;
        double rmax = 0.0;
        for (const auto& v : res.polygon.vertices) rmax = std::max(rmax, norm(v));
        for (const auto& v : res.polygon.vertices) right.push_back(Vec2d{2.5 * shift, 0.0} + (shift / rmax) * v);
        svg.polyline(left, "#1f4fbf", 1.5, true);
        svg.polyline(right, "#bf1f3f", 1.5, true);
        emit(o.out, svg.str());
    }
    std::cout << "phase = " << res.phase << "\nclosure residual = " << res.closure_residual << "\n";
    return 0;
}

int moduli_embed(const Options& o) {
    Rng rng(o.seed);
    Polygon P = input_polygon(o, rng);
    auto F = area_form(P.size());
    auto res = equilateral_to_hyperbolic_detailed(F, P);
    auto walls = butterfly_walls(F);
    json report = {{"input", to_json(P)},
                   {"equiangular", to_json(res.aligned)},
                   {"offsets", std::vector<double>(res.offsets.data(), res.offsets.data() + res.offsets.size())},
                   {"point", std::vector<double>(res.point.x.data(), res.point.x.data() + res.point.x.size())},
                   {"distance_to_center", hyperbolic_distance(F, res.point, hyperbolic_center(F))},
                   {"wall_margin", wall_margin(F, walls, res.point)}};
    if (F.n == 5) {
        auto d = poincare_disk(F, res.point);
        report["poincare_disk"] = {d[0], d[1]};
    }
    if (!o.json_path.empty()) emit(o.json_path, report.dump(1) + "\n");
    if (!o.out.empty()) {
        if (F.n != 5) throw Error(ErrorKind::invalid_input, "disk figure is drawn for pentagons only");
        SvgCanvas svg;
        std::vector<Vec2d> circle;
        for (int k = 0; k <= 256; ++k) circle.push_back(unit_from_angle(two_pi * k / 256.0));
        svg.polyline(circle, "black", 1.0);
        auto WP = wall_pentagon(F);
        std::vector<Vec2d> corners;
        for (const auto& v : WP.vertices) {
            auto d = poincare_disk(F, v);
            corners.push_back({d[0], d[1]});
        }
        // Geodesic sides sampled along the hyperboloid.
        for (std::size_t i = 0; i < 5; ++i) {
            std::vector<Vec2d> side;
            const auto& p = WP.vertices[i].x;
            const auto& q = WP.vertices[(i + 1) % 5].x;
            for (int s = 0; s <= 32; ++s) {
                Eigen::VectorXd x = p + (q - p) * (s / 32.0);
                x /= std::sqrt(F.q(x, x));
                auto d = poincare_disk(F, {x});
                side.push_back({d[0], d[1]});
            }
            svg.polyline(side, "#1f4fbf", 1.5);
        }
        auto d = poincare_disk(F, res.point);
        svg.dot({d[0], d[1]}, "#bf1f3f", 4.0);
        emit(o.out, svg.str());
    }
    std::cout << "hyperbolic point:";
    for (Eigen::Index i = 0; i < res.point.x.size(); ++i) std::cout << ' ' << res.point.x[i];
    std::cout << "\n";
    return 0;
}

int pentagon_verify(const Options& o) {
    auto F = area_form(5);
    json report;
    bool ok = true;
    auto check = [&](const std::string& name, double residual, double tol) {
        bool pass = residual <= tol;
        ok = ok && pass;
        report["checks"].push_back({{"name", name}, {"residual", residual}, {"tolerance", tol}, {"pass", pass}});
        std::cout << (pass ? "PASS " : "FAIL ") << name << " residual=" << residual << "\n";
    };
    report["signature"] = {F.positive, F.negative};
    check("signature (1,2)", (F.positive == 1 && F.negative == 2) ? 0.0 : 1.0, 0.0);
    double inv = 0, iso = 0, refl = 0;
    std::vector<Eigen::MatrixXd> M(5);
    for (std::size_t k = 0; k < 5; ++k) {
        M[k] = butterfly_matrix(5, k);
        inv = std::max(inv, (M[k] * M[k] - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff());
        iso = std::max(iso, (M[k].transpose() * F.gram * M[k] - F.gram).cwiseAbs().maxCoeff());
        Eigen::MatrixXd Mq = quotient_matrix(M[k]);
        refl = std::max(refl, std::abs(double(numerical_rank(Mq - Eigen::MatrixXd::Identity(3, 3))) - 1.0));
    }
    check("butterfly involution", inv, 1e-12);
    check("butterfly Q-isometry", iso, 1e-12);
    check("butterfly reflection (codimension 1)", refl, 0.0);
    auto walls = butterfly_walls(F);
    double orth = 0, comm = 0;
    for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b) {
            std::size_t gap = (b + 5 - a) % 5;
            if (gap == 0 || gap == 1 || gap == 4) continue;
            orth = std::max(orth, std::abs(F.q(walls[a].normal, walls[b].normal)));
            comm = std::max(comm, (M[a] * M[b] - M[b] * M[a]).cwiseAbs().maxCoeff());
        }
    check("non-consecutive walls orthogonal", orth, 1e-9);
    check("non-consecutive butterflies commute", comm, 1e-12);
    auto WP = wall_pentagon(F);
    double ang = 0, comp = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        ang = std::max(ang, std::abs(WP.angles[i] - M_PI / 2));
        comp = std::max(comp, std::max(0.0, -WP.vertex_margins[i]));
    }
    report["angles"] = WP.angles;
    check("pentagon angles pi/2", ang, 1e-9);
    check("pentagon compact", comp, 0.0);
    report["pass"] = ok;
    if (!o.json_path.empty()) emit(o.json_path, report.dump(1) + "\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        if (args.size() >= 2 && args[0] == "--config") {
            auto extra = std::vector<std::string>(args.begin() + 2, args.end());
            args = config_to_args(read_json_file(args[1]));
            args.insert(args.end(), extra.begin(), extra.end());
        }
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.kind() == ErrorKind::io ? 1 : 2;
    }

    CLI::App app{"Symplectic tiling billiards: orbits, sunburst weaves and polygon moduli"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--tol", o.tol, "solver tolerance on log h");
        sub->add_option("--out", o.out, "figure output (SVG, or PPM for grid-portrait)");
        sub->add_option("--json", o.json_path, "JSON output");
        sub->add_option("--n", o.n, "order N");
        sub->add_flag("--dump-config", o.dump_config, "print the effective configuration as JSON and exit");
    };
    auto grid = [&](CLI::App* sub) {
        sub->add_option("--t", o.t, "rational parameter of the rotated grid");
        sub->add_option("--angle", o.angle, "rotation angle such as pi/4 (needs --float)");
        sub->add_flag("--float", o.use_float, "floating-point mode");
        sub->add_option("--max-steps", o.max_steps, "step budget");
        sub->add_option("--edge-a", o.edge_a, "start edge in the first grid (V or H)");
        sub->add_option("--edge-b", o.edge_b, "start edge in the second grid (V or H)");
    };
    auto* orbit = app.add_subcommand("grid-orbit", "orbit on a grid pair");
    common(orbit);
    grid(orbit);
    orbit->add_option("--pa", o.pa, "start parameter along edge a");
    orbit->add_option("--pb", o.pb, "start parameter along edge b");
    auto* portrait = app.add_subcommand("grid-portrait", "phase portrait raster");
    common(portrait);
    grid(portrait);
    portrait->add_option("--resolution", o.resolution, "WxH");
    auto* solve = app.add_subcommand("sunburst-solve", "closing phase of a sunburst pair");
    common(solve);
    solve->add_option("--a", o.a_file, "first sunburst (JSON angles)");
    solve->add_option("--b", o.b_file, "second sunburst (JSON angles)");
    solve->add_flag("--random", o.random, "random first sunburst");
    solve->add_flag("--balanced", o.balanced, "make the random sunburst balanced");
    auto* convert = app.add_subcommand("linkage-convert", "equilateral to equiangular polygon");
    common(convert);
    convert->add_option("--in", o.in_file, "polygon JSON");
    convert->add_flag("--random", o.random, "random convex equilateral polygon");
    auto* embed = app.add_subcommand("moduli-embed", "hyperbolic point of an equilateral polygon");
    common(embed);
    embed->add_option("--in", o.in_file, "polygon JSON");
    embed->add_flag("--random", o.random, "random convex equilateral polygon");
    auto* verify = app.add_subcommand("pentagon-verify", "check the right-angled pentagon of walls");
    common(verify);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::string mode = app.get_subcommands().front()->get_name();
    if (o.dump_config) {
        std::cout << options_to_json(mode, o).dump(1) << "\n";
        return 0;
    }
    try {
        if (mode == "grid-orbit") return o.use_float ? grid_orbit<double>(o) : grid_orbit<Rational>(o);
        if (mode == "grid-portrait") return o.use_float ? grid_portrait<double>(o) : grid_portrait<Rational>(o);
        if (mode == "sunburst-solve") return sunburst_solve(o);
        if (mode == "linkage-convert") return linkage_convert(o);
        if (mode == "moduli-embed") return moduli_embed(o);
        if (mode == "pentagon-verify") return pentagon_verify(o);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.kind() == ErrorKind::io ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "InvalidInput: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
