#include "cvxeps/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cvxeps/oracle.hpp"
#include "cvxeps/subdiff.hpp"
#include "cvxeps/transforms.hpp"

namespace cvxeps {
namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& msg) { throw SchemaError(msg); }

double parse_ext(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    schema_fail("expected a number or \"inf\"/\"-inf\"");
}

Vec vec_from_json(const json& j) {
    if (!j.is_array() || j.empty() || j.size() > 3)
        schema_fail("expected a coordinate array of length 1..3");
    Vec v(static_cast<int>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<double>();
    return v;
}

XInterval interval_from_json(const json& j) {
    double lo = parse_ext(j.at("lo"));
    double hi = parse_ext(j.at("hi"));
    return XInterval(lo, hi);
}

Grid grid_from_json(const json& j) {
    auto axis = [](const json& a) {
        double lo = a.at("lo").get<double>();
        double hi = a.at("hi").get<double>();
        int cells = a.at("cells").get<int>();
        if (cells < 1) schema_fail("grid cells must be positive");
        return GridAxis{lo, hi, (hi - lo) / cells, cells + 1};
    };
    std::vector<GridAxis> axes;
    if (j.contains("axes")) {
        for (const auto& a : j.at("axes")) axes.push_back(axis(a));
    } else {
        axes.push_back(axis(j));
    }
    return Grid(std::move(axes));
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

ConvexFn fn_from_json(const json& j) {
    std::string kind = j.at("fn").get<std::string>();
    if (kind == "affine") return ConvexFn::affine(vec_from_json(j.at("a")), j.at("b").get<double>());
    if (kind == "quad_diag")
        return ConvexFn::quad_diag(vec_from_json(j.at("q")), vec_from_json(j.at("shift")));
    if (kind == "abs_norm") return ConvexFn::abs_norm(vec_from_json(j.at("w")));
    if (kind == "neg_sqrt") return ConvexFn::neg_sqrt();
    if (kind == "neg_recip") return ConvexFn::neg_recip();
    if (kind == "indicator") return ConvexFn::indicator(set_from_json(j.at("set")));
    if (kind == "sum") return ConvexFn::sum(fn_from_json(j.at("f")), fn_from_json(j.at("g")));
    if (kind == "scale")
        return ConvexFn::scale(j.at("lambda").get<double>(), fn_from_json(j.at("f")));
    if (kind == "separable")
        return ConvexFn::separable(fn_from_json(j.at("f")), fn_from_json(j.at("g")));
    if (kind == "sampled") {
        Grid g = grid_from_json(j.at("grid"));
        std::vector<ExtReal> values;
        if (j.contains("expr")) {
            std::string expr = j.at("expr").get<std::string>();
            const std::size_t n = g.size();
            for (std::size_t i = 0; i < n; ++i) {
                double t = g.point(i)[0];
                if (expr == "exp")
                    values.emplace_back(std::exp(t));
                else
                    schema_fail("unknown sampled expr: " + expr);
            }
        } else {
            for (const auto& v : j.at("values")) values.emplace_back(parse_ext(v));
        }
        return ConvexFn::sampled(std::move(g), std::move(values));
    }
    schema_fail("unknown fn kind: " + kind);
}

ConvexSetDesc set_from_json(const json& j) {
    std::string kind = j.at("set").get<std::string>();
    if (kind == "interval") return ConvexSetDesc::interval(interval_from_json(j));
    if (kind == "box") {
        std::vector<XInterval> axes;
        for (const auto& a : j.at("axes")) axes.push_back(interval_from_json(a));
        return ConvexSetDesc::box(std::move(axes));
    }
    if (kind == "ball")
        return ConvexSetDesc::ball(vec_from_json(j.at("center")), j.at("radius").get<double>());
    if (kind == "halfspaces") {
        std::vector<std::pair<Vec, double>> rows;
        for (const auto& r : j.at("rows"))
            rows.emplace_back(vec_from_json(r.at("a")), r.at("b").get<double>());
        return ConvexSetDesc::halfspaces(j.at("dim").get<int>(), std::move(rows));
    }
    if (kind == "cone") {
        std::vector<Vec> normals;
        for (const auto& r : j.at("normals")) normals.push_back(vec_from_json(r));
        return ConvexSetDesc::cone(j.at("dim").get<int>(), std::move(normals));
    }
    if (kind == "singleton") return ConvexSetDesc::singleton(vec_from_json(j.at("p")));
    if (kind == "full_space") return ConvexSetDesc::full_space(j.at("dim").get<int>());
    if (kind == "product")
        return ConvexSetDesc::product(set_from_json(j.at("a")), set_from_json(j.at("b")));
    if (kind == "translate")
        return ConvexSetDesc::translate(set_from_json(j.at("inner")), vec_from_json(j.at("v")));
    if (kind == "intersection") {
        std::vector<ConvexSetDesc> parts;
        for (const auto& p : j.at("parts")) parts.push_back(set_from_json(p));
        return ConvexSetDesc::intersection(std::move(parts));
    }
    if (kind == "epigraph") return ConvexSetDesc::epigraph_of(fn_from_json(j.at("f")));
    if (kind == "graph")
        return ConvexSetDesc::graph_of(set_from_json(j.at("inner")), j.at("m").get<int>(),
                                       j.at("k").get<int>());
    schema_fail("unknown set kind: " + kind);
}

ParametricProblem problem_from_json(const json& j) {
    ParametricProblem p{fn_from_json(j.at("phi")), std::nullopt, j.at("m").get<int>(),
                        j.at("k").get<int>()};
    if (j.contains("graph")) p.graph = set_from_json(j.at("graph"));
    return p;
}

DualSet expected_from_json(const json& j, int dim, const Tolerances& tol) {
    std::string kind = j.at("kind").get<std::string>();
    DualSet out;
    out.dim = dim;
    if (kind == "interval") {
        XInterval iv = interval_from_json(j);
        out.interval_1d = iv;
        out.member = [iv](const Vec& p) { return iv.contains(p[0]); };
        return out;
    }
    if (kind == "empty") {
        if (dim == 1) out.interval_1d = XInterval::empty();
        out.member = [](const Vec&) { return false; };
        return out;
    }
    if (kind == "window") {
        if (dim == 1) out.interval_1d = XInterval::whole();
        out.member = [](const Vec&) { return true; };
        return out;
    }
    if (kind == "point") {
        Vec p0 = vec_from_json(j.at("p"));
        if (dim == 1) out.interval_1d = XInterval::point(p0[0]);
        double r = 0.25 * tol.set_tol;
        out.member = [p0, r](const Vec& p) { return (p - p0).cwiseAbs().maxCoeff() <= r; };
        return out;
    }
    if (kind == "box") {
        std::vector<XInterval> axes;
        for (const auto& a : j.at("axes")) axes.push_back(interval_from_json(a));
        if (dim == 1) out.interval_1d = axes.at(0);
        out.member = [axes](const Vec& p) {
            for (int i = 0; i < p.size(); ++i)
                if (!axes[static_cast<std::size_t>(i)].contains(p[i])) return false;
            return true;
        };
        return out;
    }
    if (kind == "norm_affine") {
        Vec a = vec_from_json(j.at("a"));
        double w = j.at("w").get<double>();
        double c = j.at("c").get<double>();
        out.member = [a, w, c](const Vec& p) { return a.dot(p) + w * p.norm() <= c; };
        return out;
    }
    if (kind == "abs_affine") {
        Vec a = vec_from_json(j.at("a"));
        Vec w = vec_from_json(j.at("w"));
        double c = j.at("c").get<double>();
        out.member = [a, w, c](const Vec& p) {
            return a.dot(p) + w.cwiseProduct(p.cwiseAbs()).sum() <= c;
        };
        return out;
    }
    schema_fail("unknown expected kind: " + kind);
}

namespace {

std::string describe(const DualSet& s, const Tolerances& tol) {
    if (s.dim == 1 && s.interval_1d) {
        const XInterval& iv = *s.interval_1d;
        if (iv.is_empty()) return "empty";
        return "[" + fmt(iv.lo().as_double()) + ", " + fmt(iv.hi().as_double()) + "]";
    }
    const int cells = 60;
    Grid g = Grid::uniform(s.dim, -tol.window_radius, tol.window_radius, cells);
    std::size_t count = 0;
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i)
        if (s.contains(g.point(i))) ++count;
    return "raster " + std::to_string(count) + "/" + std::to_string(n) + " member cells";
}

double clipped_measure(const DualSet& s, const Tolerances& tol) {
    if (s.dim == 1 && s.interval_1d) {
        XInterval c = s.interval_1d->clipped(tol.window_radius);
        return c.is_empty() ? 0.0 : c.hi().as_double() - c.lo().as_double();
    }
    const int cells = 60;
    Grid g = Grid::uniform(s.dim, -tol.window_radius, tol.window_radius, cells);
    std::size_t count = 0;
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i)
        if (s.contains(g.point(i))) ++count;
    double cell = std::pow(2.0 * tol.window_radius / cells, s.dim);
    return static_cast<double>(count) * cell;
}

struct ExpectedCheck {
    bool ok = true;
    double err = 0.0;
};

ExpectedCheck check_expected(const DualSet& got, const json& scenario, int dim,
                             const Tolerances& tol) {
    ExpectedCheck out;
    if (!scenario.contains("expected")) return out;
    DualSet exp = expected_from_json(scenario.at("expected"), dim, tol);
    out.ok = dual_equal_window(got, exp, tol);
    out.err = dual_window_error(got, exp, tol);
    return out;
}

void maybe_svg(RunReport& rep, const DualSet& got, const json& scenario,
               const Tolerances& tol) {
    if (got.dim != 2) return;
    std::optional<DualSet> exp;
    if (scenario.contains("expected"))
        exp = expected_from_json(scenario.at("expected"), got.dim, tol);
    rep.svg = render_svg(got, exp ? &*exp : nullptr, tol);
}

bool match_flag(const json& j, const char* key, const std::optional<bool>& got,
                std::vector<std::string>& flags) {
    if (!j.contains(key)) return true;
    const json& want = j.at(key);
    if (want.is_string() && want.get<std::string>() == "unsupported") {
        if (got.has_value()) flags.push_back(std::string(key) + ":decided-but-unsupported-expected");
        return !got.has_value();
    }
    if (!got.has_value()) {
        flags.push_back(std::string(key) + ":undecided");
        return false;
    }
    return *got == want.get<bool>();
}

RunReport dispatch(const Scenario& s, const Tolerances& tol) {
    RunReport rep;
    rep.name = s.name;
    rep.op = s.op;
    const json& j = s.raw;

    if (s.op == "subdiff") {
        ConvexFn f = fn_from_json(j.at("f"));
        Vec x_bar = vec_from_json(j.at("x_bar"));
        std::string variant = j.value("variant", "eps");
        DualSet got = variant == "limit"
                          ? subdiff_via_eps_intersection(f, x_bar, tol)
                          : eps_subdiff_set(f, x_bar, j.at("eps").get<double>(), tol);
        if (variant == "limit")
            for (double eta : tol.eta_ladder)
                rep.eta_convergence.emplace_back(
                    eta, clipped_measure(eps_subdiff_set(f, x_bar, eta, tol), tol));
        ExpectedCheck chk = check_expected(got, j, f.dim(), tol);
        rep.pass = chk.ok && !got.window_flagged;
        rep.hausdorff_error = chk.err;
        rep.computed = describe(got, tol);
        if (got.window_flagged) rep.flags.push_back("window");
        maybe_svg(rep, got, j, tol);
        return rep;
    }
    if (s.op == "conjugate") {
        ConvexFn f = fn_from_json(j.at("f"));
        double step = 2.0 * tol.window_radius / (f.dim() == 1 ? 2048 : f.dim() == 2 ? 96 : 28);
        double cmp = j.value("tol", conj_tol_for_step(step));
        double worst = 0.0;
        bool ok = true;
        std::ostringstream desc;
        for (const auto& pt : j.at("points")) {
            Vec x = vec_from_json(pt.at("x"));
            double want = parse_ext(pt.at("value"));
            ExtReal got = conjugate_eval(f, x, tol);
            desc << fmt(got.as_double()) << " ";
            if (std::isinf(want) || !got.is_finite()) {
                if (got.as_double() != want) ok = false;
            } else {
                double err = std::abs(got.as_double() - want);
                worst = std::max(worst, err);
                if (err > cmp) ok = false;
            }
        }
        rep.pass = ok;
        rep.hausdorff_error = worst;
        rep.computed = desc.str();
        return rep;
    }
    if (s.op == "polar" || s.op == "normal") {
        ConvexSetDesc C = set_from_json(j.at("set"));
        DualSet got = [&] {
            if (s.op == "polar") return polar(C, tol);
            Vec x_bar = vec_from_json(j.at("x_bar"));
            double eps = j.value("eps", 0.0);
            std::string variant = j.value("variant", "eps");
            if (variant == "cone") return cone_eps_normals(C, x_bar, eps, tol);
            if (variant == "limit") return normal_cone_limit(C, x_bar, eps, tol);
            return eps_normal_set(C, x_bar, eps, tol);
        }();
        ExpectedCheck chk = check_expected(got, j, C.dim(), tol);
        rep.pass = chk.ok && !got.window_flagged;
        rep.hausdorff_error = chk.err;
        rep.computed = describe(got, tol);
        if (got.window_flagged) rep.flags.push_back("window");
        maybe_svg(rep, got, j, tol);
        return rep;
    }
    if (s.op == "sum-rule") {
        SumRuleResult r = sum_rule_eval(fn_from_json(j.at("f1")), fn_from_json(j.at("f2")),
                                        vec_from_json(j.at("x_bar")), j.at("eps").get<double>(),
                                        tol);
        bool ok = r.equal_on_window == j.at("expect_equal").get<bool>();
        if (j.contains("expect_condition_h"))
            ok = ok && r.condition_H == j.at("expect_condition_h").get<bool>();
        if (j.contains("expect_certified"))
            ok = ok && r.certified == j.at("expect_certified").get<bool>();
        rep.pass = ok;
        rep.hausdorff_error =
            r.equal_on_window ? dual_window_error(r.lhs, r.rhs, tol) : 0.0;
        rep.computed = "lhs " + describe(r.lhs, tol) + "; rhs " + describe(r.rhs, tol);
        if (!r.condition_H) rep.flags.push_back("qualification-fails");
        if (!r.certified) rep.flags.push_back("uncertified");
        return rep;
    }
    if (s.op == "value-fn") {
        ParametricProblem p = problem_from_json(j.at("problem"));
        Grid y_grid = Grid::uniform(p.k, -tol.window_radius, tol.window_radius,
                                    p.k == 1 ? 400 : 60);
        ValueFnResult r = optimal_value(p, vec_from_json(j.at("x")), y_grid, tol);
        double want = parse_ext(j.at("expected_mu"));
        bool ok = std::isinf(want) ? r.mu.as_double() == want
                                   : r.mu.is_finite() &&
                                         std::abs(r.mu.as_double() - want) <= tol.set_tol;
        if (j.contains("expect_minimizer"))
            ok = ok && r.minimizer_found == j.at("expect_minimizer").get<bool>();
        rep.pass = ok;
        rep.computed = fmt(r.mu.as_double());
        if (r.window_flagged) rep.flags.push_back("window");
        return rep;
    }
    if (s.op == "parametric-unconstrained") {
        ParametricProblem p = problem_from_json(j.at("problem"));
        Vec x_bar = vec_from_json(j.at("x_bar"));
        double eps = j.at("eps").get<double>();
        ParametricSubdiffResult r = unconstrained_eps_subdiff(p, x_bar, eps, tol);
        ExpectedCheck chk = check_expected(r.direct, j, p.m, tol);
        bool ok = r.all_equal && chk.ok;
        if (j.contains("y_sol"))
            ok = ok && unconstrained_solution_case(p, x_bar, eps,
                                                   vec_from_json(j.at("y_sol")), tol);
        rep.pass = ok;
        rep.hausdorff_error = chk.err;
        rep.computed = describe(r.direct, tol);
        if (!r.all_equal) rep.flags.push_back("routes-disagree");
        return rep;
    }
    if (s.op == "parametric-constrained") {
        ParametricProblem p = problem_from_json(j.at("problem"));
        ConstrainedSubdiffResult r = constrained_eps_subdiff(
            p, vec_from_json(j.at("x_bar")), j.at("eps").get<double>(), tol);
        ExpectedCheck chk = check_expected(r.direct, j, p.m, tol);
        bool ok = r.all_equal && chk.ok;
        if (j.contains("expect_regularity")) {
            const json& er = j.at("expect_regularity");
            ok = ok && match_flag(er, "a", r.regularity.a, rep.flags) &&
                 match_flag(er, "b", r.regularity.b, rep.flags) &&
                 match_flag(er, "i", r.regularity.i, rep.flags) &&
                 match_flag(er, "ii", r.regularity.ii, rep.flags);
        }
        rep.pass = ok && r.certified;
        rep.hausdorff_error = chk.err;
        rep.computed = describe(r.direct, tol);
        if (!r.all_equal) rep.flags.push_back("routes-disagree");
        if (!r.certified) rep.flags.push_back("uncertified");
        return rep;
    }
    if (s.op == "regularity") {
        RegularityReportLenient r = check_regularity_lenient(
            fn_from_json(j.at("f1")), fn_from_json(j.at("f2")), tol);
        const json& e = j.at("expect");
        bool ok = true;
        if (e.contains("mr")) ok = ok && r.mr == e.at("mr").get<bool>();
        if (e.contains("bs")) ok = ok && r.bs == e.at("bs").get<bool>();
        ok = ok && match_flag(e, "ab", r.ab, rep.flags);
        rep.pass = ok;
        std::ostringstream desc;
        desc << "mr=" << (r.mr ? "true" : "false")
             << " ab=" << (r.ab ? (*r.ab ? "true" : "false") : "unsupported")
             << " bs=" << (r.bs ? "true" : "false");
        rep.computed = desc.str();
        return rep;
    }
    schema_fail("unknown operation: " + s.op);
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (!j.contains("name") || !j.contains("op")) schema_fail(path + ": need name and op");
    Scenario s;
    s.name = j.at("name").get<std::string>();
    s.op = j.at("op").get<std::string>();
    s.description = j.value("description", "");
    s.raw = std::move(j);
    return s;
}

RunReport run_scenario(const Scenario& s, const Tolerances& tol) {
    auto start = std::chrono::steady_clock::now();
    RunReport rep;
    try {
        rep = dispatch(s, tol);
    } catch (const Error& e) {
        rep.name = s.name;
        rep.op = s.op;
        rep.pass = false;
        rep.flags.push_back(std::string("error:") + e.what());
    }
    rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    return rep;
}

RunReport run_scenario_file(const std::string& path, const Tolerances& tol) {
    return run_scenario(load_scenario(path), tol);
}

SuiteSummary run_fixture_suite(const std::string& fixtures_dir, const Tolerances& tol) {
    namespace fs = std::filesystem;
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(fixtures_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    SuiteSummary out;
    out.all_pass = true;
    for (const auto& p : paths) {
        RunReport rep = run_scenario_file(p, tol);
        out.all_pass = out.all_pass && rep.pass;
        out.reports.push_back(std::move(rep));
    }
    std::sort(out.reports.begin(), out.reports.end(),
              [](const RunReport& a, const RunReport& b) { return a.name < b.name; });
    return out;
}

std::string to_csv(const std::vector<RunReport>& reports) {
    std::vector<const RunReport*> sorted;
    sorted.reserve(reports.size());
    for (const auto& r : reports) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const RunReport* a, const RunReport* b) { return a->name < b->name; });
    std::ostringstream out;
    out << "scenario,operation,pass,hausdorff_error,flags,millis\n";
    for (const RunReport* r : sorted) {
        std::string flags;
        for (const auto& f : r->flags) {
            if (!flags.empty()) flags += ';';
            flags += f;
        }
        if (flags.empty()) flags = "-";
        out << r->name << ',' << r->op << ',' << (r->pass ? "pass" : "fail") << ','
            << fmt(r->hausdorff_error) << ',' << flags << ',' << r->millis << '\n';
    }
    return out.str();
}

std::string render_svg(const DualSet& computed, const DualSet* expected,
                       const Tolerances& tol, int cells) {
    if (computed.dim != 2) throw Error("render_svg: only 2D dual sets are drawable");
    const double R = tol.window_radius;
    Grid g = Grid::uniform(2, -R, R, cells);
    const int n = cells + 1;
    auto raster = [&](const DualSet& s) {
        std::vector<char> m(static_cast<std::size_t>(n) * n, 0);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                Vec p = vec2(-R + 2 * R * ix / cells, -R + 2 * R * iy / cells);
                m[static_cast<std::size_t>(iy) * n + ix] = s.contains(p) ? 1 : 0;
            }
        return m;
    };
    std::vector<char> comp = raster(computed);
    std::vector<char> exp;
    if (expected) exp = raster(*expected);

    const double px = 4.0;  // pixels per cell
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(n * px)
        << "\" height=\"" << fmt(n * px) << "\" viewBox=\"0 0 " << fmt(n * px) << " "
        << fmt(n * px) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            if (!comp[static_cast<std::size_t>(iy) * n + ix]) continue;
            // SVG y axis points down; flip so the dual plane reads naturally
            svg << "<rect x=\"" << fmt(ix * px) << "\" y=\"" << fmt((n - 1 - iy) * px)
                << "\" width=\"" << fmt(px) << "\" height=\"" << fmt(px)
                << "\" fill=\"#4682b4\"/>\n";
        }
    if (expected) {
        auto at = [&](int ix, int iy) {
            if (ix < 0 || iy < 0 || ix >= n || iy >= n) return char(0);
            return exp[static_cast<std::size_t>(iy) * n + ix];
        };
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                if (!at(ix, iy)) continue;
                bool boundary = !at(ix - 1, iy) || !at(ix + 1, iy) || !at(ix, iy - 1) ||
                                !at(ix, iy + 1);
                if (!boundary) continue;
                svg << "<rect x=\"" << fmt(ix * px) << "\" y=\"" << fmt((n - 1 - iy) * px)
                    << "\" width=\"" << fmt(px) << "\" height=\"" << fmt(px)
                    << "\" fill=\"none\" stroke=\"#ff8c00\" stroke-width=\"1\"/>\n";
            }
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace cvxeps
