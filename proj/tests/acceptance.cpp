// Acceptance gate: one self-contained check per shipped guarantee, each
// printing a single pass/fail line. Exit status is 0 only when every
// criterion passes.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <vector>

#include "cvxeps/oracle.hpp"
#include "cvxeps/parametric.hpp"
#include "cvxeps/scenario.hpp"
#include "cvxeps/subdiff.hpp"
#include "cvxeps/transforms.hpp"

using namespace cvxeps;

namespace {

using Clock = std::chrono::steady_clock;

struct Criterion {
    int id;
    const char* label;
    bool pass;
    double seconds;
};

std::vector<Criterion> g_results;

template <typename F>
void run_criterion(int id, const char* label, F&& body) {
    auto start = Clock::now();
    bool ok = false;
    try {
        ok = body();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "criterion %d threw: %s\n", id, e.what());
        ok = false;
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    g_results.push_back({id, label, ok, secs});
    std::printf("criterion %2d: %s  %s (%.2f s)\n", id, ok ? "PASS" : "FAIL", label, secs);
    std::fflush(stdout);
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool interval_is(const DualSet& s, double lo, double hi, double tol_abs, double R) {
    if (!s.interval_1d) return false;
    XInterval iv = s.interval_1d->clipped(R);
    if (iv.is_empty()) return false;
    // endpoints at the window edge stand in for unbounded sides
    double glo = std::isinf(lo) ? -R : lo;
    double ghi = std::isinf(hi) ? R : hi;
    return near(iv.lo().as_double(), glo, tol_abs) && near(iv.hi().as_double(), ghi, tol_abs);
}

bool interval_subset(const DualSet& a, const DualSet& b, double tol_abs, double R) {
    if (!a.interval_1d || !b.interval_1d) return false;
    XInterval ia = a.interval_1d->clipped(R);
    XInterval ib = b.interval_1d->clipped(R);
    if (ia.is_empty()) return true;
    if (ib.is_empty()) return false;
    return ia.lo().as_double() >= ib.lo().as_double() - tol_abs &&
           ia.hi().as_double() <= ib.hi().as_double() + tol_abs;
}

ParametricProblem smooth_abs_problem() {
    return ParametricProblem{ConvexFn::separable(ConvexFn::quad_diag(vec1(1.0), vec1(0.0)),
                                                 ConvexFn::abs_norm(vec1(1.0))),
                             std::nullopt, 1, 1};
}

ParametricProblem exp_tail_problem() {
    Grid g = Grid::uniform(1, -12.0, 12.0, 1200);
    std::vector<ExtReal> vals;
    for (std::size_t i = 0; i < g.size(); ++i) vals.push_back(ExtReal(std::exp(g.point(i)[0])));
    return ParametricProblem{ConvexFn::separable(ConvexFn::quad_diag(vec1(1.0), vec1(0.0)),
                                                 ConvexFn::sampled(g, vals)),
                             std::nullopt, 1, 1};
}

ParametricProblem cone_problem() {
    return ParametricProblem{
        ConvexFn::separable(ConvexFn::zero(1), ConvexFn::abs_norm(vec1(1.0))),
        ConvexSetDesc::cone(2, {vec2(0.5, -1.0), vec2(-0.5, -1.0)}), 1, 1};
}

// --- criterion bodies -------------------------------------------------------

bool c1_sqrt_corner_ray() {
    Tolerances tol;
    ConvexFn f = ConvexFn::neg_sqrt();
    auto start = Clock::now();
    for (double eps : {0.25, 1.0, 4.0}) {
        DualSet d = eps_subdiff_set(f, vec1(0.0), eps, tol);
        if (!interval_is(d, -INFINITY, -1.0 / (4.0 * eps), 5e-3, tol.window_radius))
            return false;
    }
    DualSet limit = subdiff_via_eps_intersection(f, vec1(0.0), tol);
    bool empty = !limit.interval_1d || limit.interval_1d->is_empty() ||
                 limit.interval_1d->clipped(tol.window_radius).is_empty();
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return empty && secs < 1.0;
}

bool c2_shifted_disk_polar() {
    Tolerances tol;
    auto start = Clock::now();
    DualSet got = polar(ConvexSetDesc::ball(vec2(1.0, 0.0), 1.0), tol);
    const int cells = 200;  // 201 x 201 dual window grid
    const double R = tol.window_radius;
    const double cell = 2.0 * R / cells;
    for (int iy = 0; iy <= cells; ++iy)
        for (int ix = 0; ix <= cells; ++ix) {
            Vec p = vec2(-R + cell * ix, -R + cell * iy);
            double g = p[0] + p.norm() - 1.0;
            bool exact = g <= 0.0;
            if (got.contains(p) == exact) continue;
            // mismatches are tolerated within one grid cell of the boundary
            // (the defining map has Lipschitz constant at most 2)
            if (std::abs(g) > 2.0 * cell * 1.5) return false;
        }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return secs < 5.0;
}

bool c3_degenerate_sum_rule() {
    Tolerances tol;
    ConvexFn pin = ConvexFn::indicator(ConvexSetDesc::singleton(vec1(0.0)));
    ConvexFn root = ConvexFn::neg_sqrt();
    const double R = tol.window_radius;

    SumRuleResult at1 = sum_rule_eval(pin, root, vec1(0.0), 1.0, tol);
    bool ok = at1.equal_on_window && interval_is(at1.lhs, -INFINITY, INFINITY, 5e-2, R) &&
              interval_is(at1.rhs, -INFINITY, INFINITY, 5e-2, R);

    SumRuleResult at0 = sum_rule_eval(pin, root, vec1(0.0), 0.0, tol);
    bool rhs_empty = !at0.rhs.interval_1d || at0.rhs.interval_1d->is_empty() ||
                     at0.rhs.interval_1d->clipped(R).is_empty();
    ok = ok && !at0.equal_on_window && interval_is(at0.lhs, -INFINITY, INFINITY, 5e-2, R) &&
         rhs_empty;

    ConditionHReport h = check_condition_H(pin, root, vec1(0.0),
                                           Grid::uniform(1, -R, R, 40), tol);
    return ok && h.holds_as_inf && !h.attained;
}

bool c4_abs_three_branches() {
    Tolerances tol;
    ConvexFn f = ConvexFn::abs_norm(vec1(1.0));
    struct P {
        double x, eps;
    };
    // three points per branch of the closed form
    std::vector<P> pts{{-1.0, 1.0}, {-2.0, 1.0}, {-1.0, 0.5},  // x < -eps/2
                       {0.0, 1.0},  {0.25, 1.0}, {-0.2, 0.5},  // |x| <= eps/2
                       {1.0, 1.0},  {2.0, 1.0},  {1.0, 0.5}};  // x > eps/2
    for (const P& p : pts) {
        double lo, hi;
        if (p.x < -p.eps / 2.0) {
            lo = -1.0;
            hi = -1.0 - p.eps / p.x;
        } else if (p.x > p.eps / 2.0) {
            lo = 1.0 - p.eps / p.x;
            hi = 1.0;
        } else {
            lo = -1.0;
            hi = 1.0;
        }
        DualSet d = eps_subdiff_set(f, vec1(p.x), p.eps, tol);
        if (!interval_is(d, lo, hi, 5e-3, tol.window_radius)) return false;
    }
    return true;
}

bool c5_parametric_unconstrained() {
    Tolerances tol;
    ParametricProblem p = smooth_abs_problem();
    for (double eps : {0.0, 0.25, 1.0}) {
        ParametricSubdiffResult r = unconstrained_eps_subdiff(p, vec1(0.0), eps, tol);
        double rad = 2.0 * std::sqrt(eps);
        if (!r.all_equal) return false;
        if (!interval_is(r.direct, -rad, rad, 5e-3, tol.window_radius)) return false;
    }
    return unconstrained_solution_case(p, vec1(0.0), 0.25, vec1(0.0), tol);
}

bool c6_parametric_constrained_cone() {
    Tolerances tol;
    auto start = Clock::now();
    ParametricProblem p = cone_problem();
    for (double eps : {0.0, 0.5}) {
        ConstrainedSubdiffResult r = constrained_eps_subdiff(p, vec1(0.0), eps, tol);
        if (!r.all_equal || !r.certified) return false;
        if (!interval_is(r.direct, -0.5, 0.5, 5e-3, tol.window_radius)) return false;
        if (!r.regularity.b || !*r.regularity.b) return false;
    }
    // normal directions at the apex match the polar cone y* <= -2 |x*|
    DualSet N = cone_eps_normals(*p.graph, vec2(0.0, 0.0), 0.5, tol);
    const int cells = 100;
    const double R = tol.window_radius;
    const double cell = 2.0 * R / cells;
    for (int iy = 0; iy <= cells; ++iy)
        for (int ix = 0; ix <= cells; ++ix) {
            Vec q = vec2(-R + cell * ix, -R + cell * iy);
            double g = 2.0 * std::abs(q[0]) + q[1];
            if (N.contains(q) == (g <= 0.0)) continue;
            if (std::abs(g) > 3.0 * cell) return false;
        }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return secs < 30.0;
}

bool c7_regularity_counterexamples() {
    Tolerances tol;
    ConvexSetDesc axis1 = ConvexSetDesc::box({XInterval::whole(), XInterval::point(0.0)});
    ConvexSetDesc axis2 = ConvexSetDesc::box({XInterval::point(0.0), XInterval::whole()});
    ConvexFn on1 = ConvexFn::sum(ConvexFn::quad_diag(vec2(1.0, 0.0), vec2(0.0, 0.0)),
                                 ConvexFn::indicator(axis1));
    ConvexFn on2 = ConvexFn::sum(ConvexFn::quad_diag(vec2(0.0, 1.0), vec2(0.0, 0.0)),
                                 ConvexFn::indicator(axis2));
    RegularityReport same = check_regularity(on1, on1, tol);
    RegularityReport cross = check_regularity(on1, on2, tol);
    return same.ab && !same.mr && !same.bs && cross.bs && !cross.mr;
}

bool c8_property_suites() {
    Tolerances tol;
    const double R = tol.window_radius;
    std::mt19937 rng(42);
    auto unif = [&](double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(rng);
    };

    // (i) eps-monotonicity of subdifferentials and normal sets, 50 fixtures
    for (int i = 0; i < 50; ++i) {
        ConvexFn f = [&]() {
            switch (i % 3) {
                case 0: return ConvexFn::quad_diag(vec1(unif(0.2, 3.0)), vec1(unif(-2.0, 2.0)));
                case 1: return ConvexFn::abs_norm(vec1(unif(0.3, 2.0)));
                default:
                    return ConvexFn::sum(
                        ConvexFn::quad_diag(vec1(unif(0.2, 2.0)), vec1(unif(-1.0, 1.0))),
                        ConvexFn::abs_norm(vec1(unif(0.3, 1.5))));
            }
        }();
        double x = unif(-1.0, 1.0);
        double e1 = unif(0.05, 0.8), e2 = e1 + unif(0.1, 1.0);
        DualSet small = eps_subdiff_set(f, vec1(x), e1, tol);
        DualSet big = eps_subdiff_set(f, vec1(x), e2, tol);
        if (!interval_subset(small, big, tol.set_tol, R)) return false;

        double a = unif(-2.0, 0.0), b = unif(0.5, 2.0);
        ConvexSetDesc C = ConvexSetDesc::interval(XInterval(a, b));
        DualSet n1 = eps_normal_set(C, vec1(b), e1, tol);
        DualSet n2 = eps_normal_set(C, vec1(b), e2, tol);
        if (!interval_subset(n1, n2, tol.set_tol, R)) return false;
    }

    // (ii) oracle agreement: computed sets live inside the definition oracle
    OracleConfig cfg = OracleConfig::standard(1, tol);
    std::vector<std::pair<ConvexFn, double>> oracle_cases{
        {ConvexFn::quad_diag(vec1(1.0), vec1(0.0)), 0.0},
        {ConvexFn::abs_norm(vec1(1.0)), 1.0},
        {ConvexFn::sum(ConvexFn::quad_diag(vec1(1.0), vec1(0.0)),
                       ConvexFn::abs_norm(vec1(1.0))),
         0.0},
        {ConvexFn::neg_sqrt(), 1.0},
    };
    for (const auto& [f, xb] : oracle_cases) {
        DualSet computed = eps_subdiff_set(f, vec1(xb), 0.5, tol);
        DualSet oracle = oracle_eps_subdiff(f, vec1(xb), 0.5, cfg, tol);
        for (int i = 0; i <= 80; ++i) {
            double q = -R + 2.0 * R * i / 80.0;
            if (computed.contains1(q) && !oracle.contains1(q)) return false;
        }
    }

    // (iii) N_eps = eps * (C - x_bar)^0 on set fixtures
    struct SetCase {
        ConvexSetDesc C;
        Vec x_bar;
    };
    std::vector<SetCase> sets{
        {ConvexSetDesc::interval(XInterval(0.0, 1.0)), vec1(1.0)},
        {ConvexSetDesc::interval(XInterval(-2.0, 2.0)), vec1(0.0)},
        {ConvexSetDesc::box({XInterval(0.0, 1.0), XInterval(0.0, 1.0)}), vec2(1.0, 1.0)},
    };
    for (const SetCase& sc : sets)
        for (double eps : {0.5, 1.0, 2.0}) {
            DualSet lhs = eps_normal_set(sc.C, sc.x_bar, eps, tol);
            DualSet rhs = scale_dual(
                eps, polar(ConvexSetDesc::translate(sc.C, -sc.x_bar), tol), tol);
            if (!dual_equal_window(lhs, rhs, tol, 60)) return false;
        }

    // (iv) positive-scaling identity on 20 (f, lambda, eps) triples
    for (int i = 0; i < 20; ++i) {
        ConvexFn f = i % 2 == 0
                         ? ConvexFn::quad_diag(vec1(unif(0.3, 2.0)), vec1(unif(-1.0, 1.0)))
                         : ConvexFn::abs_norm(vec1(unif(0.3, 2.0)));
        if (!scale_rule_check(f, vec1(unif(-1.0, 1.0)), unif(0.1, 1.5), unif(0.3, 3.0), tol))
            return false;
    }

    // (v) separable double inclusion on 10 fixtures
    for (int i = 0; i < 10; ++i) {
        ConvexFn f1 = ConvexFn::quad_diag(vec1(unif(0.3, 2.0)), vec1(0.0));
        ConvexFn f2 = ConvexFn::abs_norm(vec1(unif(0.3, 2.0)));
        SeparableInclusions inc = separable_inclusions_check(
            f1, f2, vec1(unif(-0.5, 0.5)), vec1(unif(-0.5, 0.5)), unif(0.2, 1.0), tol);
        if (!inc.inner || !inc.outer) return false;
    }

    // (vi) conjugate reduction identity on the parametric fixtures
    Grid dual = Grid::uniform(1, -R, R, 40);
    if (!reduction_identity_check(smooth_abs_problem(), dual, tol)) return false;
    if (!reduction_identity_check(cone_problem(), dual, tol)) return false;

    // (vii) biconjugate idempotence on closed fixtures
    Grid dgrid = Grid::uniform(1, -R, R, 400);
    Grid pgrid = Grid::uniform(1, -5.0, 5.0, 100);
    for (const ConvexFn& f :
         {ConvexFn::quad_diag(vec1(1.0), vec1(0.0)), ConvexFn::abs_norm(vec1(2.0)),
          ConvexFn::affine(vec1(1.5), -0.5)}) {
        ConvexFn ff = biconjugate(f, dgrid, pgrid, tol);
        for (std::size_t i = 0; i < pgrid.size(); ++i) {
            Vec x = pgrid.point(i);
            if (std::abs(ff(x).as_double() - f(x).as_double()) > 5e-2) return false;
        }
    }

    // (viii) continuity regularity implies both structural conditions
    ConvexSetDesc axis1 = ConvexSetDesc::box({XInterval::whole(), XInterval::point(0.0)});
    std::vector<std::pair<ConvexFn, ConvexFn>> pairs{
        {ConvexFn::quad_diag(vec1(1.0), vec1(0.0)), ConvexFn::abs_norm(vec1(1.0))},
        {ConvexFn::zero(1), ConvexFn::indicator(ConvexSetDesc::interval(XInterval(-1.0, 1.0)))},
        {ConvexFn::sum(ConvexFn::quad_diag(vec2(1.0, 0.0), vec2(0.0, 0.0)),
                       ConvexFn::indicator(axis1)),
         ConvexFn::sum(ConvexFn::quad_diag(vec2(1.0, 0.0), vec2(0.0, 0.0)),
                       ConvexFn::indicator(axis1))},
        {ConvexFn::zero(2), ConvexFn::indicator(ConvexSetDesc::ball(vec2(0.0, 0.0), 1.0))},
    };
    for (const auto& [f1, f2] : pairs) {
        RegularityReportLenient r = check_regularity_lenient(f1, f2, tol);
        if (r.mr && ((r.ab && !*r.ab) || !r.bs)) return false;
    }
    return true;
}

bool c9_empty_solution_regime() {
    Tolerances tol;
    ParametricProblem p = exp_tail_problem();
    Grid y_grid = Grid::uniform(1, -tol.window_radius, tol.window_radius, 400);
    ValueFnResult v = optimal_value(p, vec1(0.0), y_grid, tol);
    if (v.minimizer_found) return false;
    for (double eps : {0.25, 1.0}) {
        ParametricSubdiffResult r = unconstrained_eps_subdiff(p, vec1(0.0), eps, tol);
        double rad = 2.0 * std::sqrt(eps);
        if (!r.all_equal) return false;
        if (!interval_is(r.direct, -rad, rad, 5e-3, tol.window_radius)) return false;
    }
    return true;
}

bool c10_full_suite() {
    Tolerances tol;
    auto start = Clock::now();
    SuiteSummary s = run_fixture_suite(CVXEPS_FIXTURE_DIR, tol);
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    return s.all_pass && !s.reports.empty() && secs < 180.0;
}

}  // namespace

int main() {
    run_criterion(1, "corner ray of -sqrt: (-inf, -1/(4 eps)] and empty exact limit, < 1 s",
                  c1_sqrt_corner_ray);
    run_criterion(2, "polar of the shifted disk on a 201x201 grid, one-cell dilation, < 5 s",
                  c2_shifted_disk_polar);
    run_criterion(3, "degenerate sum rule: equality at eps=1, violation at eps=0, "
                     "unattained qualification infimum",
                  c3_degenerate_sum_rule);
    run_criterion(4, "three-branch closed form of the |x| subdifferential at 9 points",
                  c4_abs_three_branches);
    run_criterion(5, "unconstrained parametric routes all equal [-2 sqrt(eps), 2 sqrt(eps)]",
                  c5_parametric_unconstrained);
    run_criterion(6, "constrained cone problem: [-1/2, 1/2], apex normal cone, "
                     "certified via graph continuity, < 30 s",
                  c6_parametric_constrained_cone);
    run_criterion(7, "regularity counterexample verdicts (shared axis / crossed axes)",
                  c7_regularity_counterexamples);
    run_criterion(8, "property suites: monotonicity, oracle bounds, normal-set identity, "
                     "scaling, separability, reduction, biconjugate, implication",
                  c8_property_suites);
    run_criterion(9, "empty-solution regime: formulas equal the direct subdifferential",
                  c9_empty_solution_regime);
    run_criterion(10, "bundled fixture suite all-pass under 3 minutes", c10_full_suite);

    bool all = true;
    for (const Criterion& c : g_results) all = all && c.pass;
    std::printf("%s\n", all ? "acceptance: ALL PASS" : "acceptance: FAILURES PRESENT");
    return all ? 0 : 1;
}
