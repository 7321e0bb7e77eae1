#include "cvxeps/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <tuple>

#include "cvxeps/transforms.hpp"
#include "nodes.hpp"

namespace cvxeps {
namespace {

/// Conjugate-test slack for the formula routes. It must stay well below the
/// finest ladder rung, or the slack (not eta) dominates the realized sets
/// near eps = 0.
double formula_slack(const Tolerances& tol) {
    return std::min(0.5 * tol.set_tol, 0.2 * tol.eta_ladder.back());
}

/// Margin added to the near-solution bar; kept below formula_slack so
/// near-optimal grid decisions never impose invalid constraints.
double near_bar_margin(const Tolerances& tol) {
    return std::min(0.25 * tol.set_tol, 0.1 * tol.eta_ladder.back());
}

void validate_problem(const ParametricProblem& p) {
    if (p.m < 1 || p.k < 1 || p.m + p.k > 3)
        throw Error("ParametricProblem: need m >= 1, k >= 1, m + k <= 3");
    if (p.phi.dim() != p.m + p.k) throw DimensionMismatch{};
    if (p.graph && p.graph->dim() != p.m + p.k) throw DimensionMismatch{};
}

Vec join(const Vec& x, const Vec& y) {
    Vec z(x.size() + y.size());
    z << x, y;
    return z;
}

/// Conjugate evaluator with per-shape caching: closed forms are used where
/// available, Separable/Scale recurse, and anything else gets one sampled
/// conjugate on a doubled dual window so repeated queries are cheap.
class ConjCache {
public:
    ConjCache(const ConvexFn& f, const Tolerances& tol) {
        closed_ = closed_conjugate(f);
        if (closed_) return;
        const FnNode& n = f.node();
        if (n.kind == FnKind::Separable) {
            d1_ = n.f->dim();
            c1_ = std::make_unique<ConjCache>(*n.f, tol);
            c2_ = std::make_unique<ConjCache>(*n.g, tol);
            return;
        }
        if (n.kind == FnKind::Scale) {
            lambda_ = n.lambda;
            c1_ = std::make_unique<ConjCache>(*n.f, tol);
            return;
        }
        int cells = f.dim() == 1 ? 2048 : f.dim() == 2 ? 96 : 28;
        Grid dual =
            Grid::uniform(f.dim(), -2 * tol.window_radius, 2 * tol.window_radius, cells);
        sampled_ = conjugate(f, dual, tol).sampled_fn();
    }

    ExtReal eval(const Vec& u) const {
        if (closed_) return (*closed_)(u);
        if (lambda_ > 0) return ext_scale(lambda_, c1_->eval(u / lambda_));
        if (c2_) return ext_add(c1_->eval(u.head(d1_)), c2_->eval(u.tail(u.size() - d1_)));
        return (*sampled_)(u);
    }

private:
    std::optional<ConvexFn> closed_;
    std::unique_ptr<ConjCache> c1_, c2_;  // Separable / Scale inner
    int d1_ = 0;
    double lambda_ = 0;
    std::optional<ConvexFn> sampled_;
};

/// u in the gamma-subdifferential of phi at z, via the conjugate inequality.
bool phi_subgrad_test(const ConjCache& conj, const Vec& z, ExtReal phi_z, const Vec& u,
                      double gamma, const Tolerances& tol) {
    if (!phi_z.is_finite()) return false;
    ExtReal c = conj.eval(u);
    if (!c.is_finite()) return false;
    return c.as_double() + phi_z.as_double() <= u.dot(z) + gamma + formula_slack(tol);
}

struct ScanBest {
    ExtReal value = ExtReal::pos_inf();
    int index = -1;
    bool boundary = false;
};

bool feasible_point(const ParametricProblem& p, const Vec& z) {
    return !p.graph || p.graph->contains(z);
}

ValueFnResult scan_optimal(const ParametricProblem& p, const Vec& x, const Grid& y_grid,
                           const Tolerances& tol, bool with_near_sets) {
    validate_problem(p);
    if (x.size() != p.m) throw DimensionMismatch{};
    if (y_grid.dim() != p.k) throw DimensionMismatch{};
    ValueFnResult out;
    out.x = x;

    ScanBest best;
    const std::size_t n = y_grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec y = y_grid.point(i);
        Vec z = join(x, y);
        if (!feasible_point(p, z)) continue;
        ExtReal v = p.phi(z);
        if (!v.is_finite()) continue;
        if (v < best.value) {
            best.value = v;
            best.index = static_cast<int>(i);
            best.boundary = y_grid.on_boundary(y);
        }
    }
    if (best.index < 0) {
        out.mu = ExtReal::pos_inf();
        if (with_near_sets) out.near_solution_sets.assign(tol.eta_ladder.size(), {});
        return out;
    }
    out.mu = best.value;
    out.window_flagged = best.boundary;

    Vec y_best = y_grid.point(static_cast<std::size_t>(best.index));
    if (p.k == 1 && !best.boundary) {
        // Refine inside the bracketing cells: locate the feasible/finite
        // subinterval by bisection, then golden-section the objective.
        const auto& ax = y_grid.axes()[0];
        auto ok = [&](double y) {
            Vec z = join(x, vec1(y));
            return feasible_point(p, z) && p.phi(z).is_finite();
        };
        auto g = [&](double y) {
            Vec z = join(x, vec1(y));
            if (!feasible_point(p, z)) return std::numeric_limits<double>::infinity();
            return p.phi(z).as_double();
        };
        double yb = y_best[0];
        double lo = std::max(ax.lo, yb - ax.step), hi = std::min(ax.hi, yb + ax.step);
        for (double* side : {&lo, &hi}) {
            if (ok(*side)) continue;
            double good = yb, bad = *side;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (good + bad);
                (ok(mid) ? good : bad) = mid;
            }
            *side = good;
        }
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = lo, b = hi;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = g(c), fd = g(d);
        for (int it = 0; it < 120; ++it) {
            if (fc <= fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = g(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = g(d);
            }
        }
        double y_ref = fc <= fd ? c : d;
        double v_ref = std::min(fc, fd);
        if (v_ref < out.mu.as_double()) out.mu = ExtReal(v_ref);
        out.minimizer_found = true;
        out.minimizer = vec1(y_ref);
    } else if (!best.boundary) {
        out.minimizer_found = true;
        out.minimizer = y_best;
    }

    if (with_near_sets) {
        for (double eta : tol.eta_ladder) {
            std::vector<Vec> members;
            double bar = out.mu.as_double() + eta + near_bar_margin(tol);
            for (std::size_t i = 0; i < n; ++i) {
                Vec y = y_grid.point(i);
                Vec z = join(x, y);
                if (!feasible_point(p, z)) continue;
                ExtReal v = p.phi(z);
                if (v.is_finite() && v.as_double() <= bar) members.push_back(y);
            }
            out.near_solution_sets.push_back(std::move(members));
        }
    }
    return out;
}

/// Sharp 1D interval for the eps-subdifferential of mu at x_bar, computed from
/// the support formula on the refined optimal-value evaluator. The sampled
/// proxy caps endpoint accuracy at one x-grid step, which is too coarse for
/// eps = 0.
void sharpen_direct_interval(DualSet& direct, const ParametricProblem& p, const Vec& x_bar,
                             double eps, const Grid& y_grid, const Tolerances& tol) {
    if (p.m != 1) return;
    // Tail extrapolation is safe here: the evaluator's reach is limited by the
    // sampled decision window, not by a genuine domain boundary of mu.
    auto mu_eval = [&](const Vec& x) { return scan_optimal(p, x, y_grid, tol, false).mu; };
    double hi = support_formula_value(mu_eval, x_bar, eps, vec1(1.0), tol, true);
    double lo = -support_formula_value(mu_eval, x_bar, eps, vec1(-1.0), tol, true);
    if (lo > hi) {
        direct.interval_1d =
            lo - hi <= tol.set_tol ? XInterval::point(0.5 * (lo + hi)) : XInterval::empty();
    } else {
        direct.interval_1d = XInterval(lo, hi);
    }
}

/// Estimates the eta -> 0 limit of a ladder-realized 1D set from its two
/// finest rungs, assuming the endpoint error shrinks like sqrt(eta) (the rate
/// of the quadratic model near a minimum). Endpoints never move outward past
/// the finest rung, since the realized sets shrink as eta drops.
std::optional<XInterval> extrapolate_ladder_interval(const std::optional<XInterval>& fine,
                                                     const std::optional<XInterval>& coarse,
                                                     double eta_fine, double eta_coarse,
                                                     const Tolerances& tol) {
    if (!fine || fine->is_empty() || !coarse || coarse->is_empty()) return fine;
    const double f = std::sqrt(eta_fine) / (std::sqrt(eta_coarse) - std::sqrt(eta_fine));
    auto pull = [&](ExtReal e1, ExtReal e2) {
        if (!e1.is_finite() || !e2.is_finite()) return e1;
        return ExtReal(e1.as_double() + f * (e1.as_double() - e2.as_double()));
    };
    ExtReal lo = pull(fine->lo(), coarse->lo());
    ExtReal hi = pull(fine->hi(), coarse->hi());
    if (lo.is_finite() && fine->lo().is_finite() && lo.as_double() < fine->lo().as_double())
        lo = fine->lo();
    if (hi.is_finite() && fine->hi().is_finite() && hi.as_double() > fine->hi().as_double())
        hi = fine->hi();
    if (lo.is_finite() && hi.is_finite() && lo.as_double() > hi.as_double()) {
        double gap = lo.as_double() - hi.as_double();
        if (gap <= tol.set_tol)
            return XInterval::point(0.5 * (lo.as_double() + hi.as_double()));
        return XInterval::empty();
    }
    return XInterval(lo, hi);
}

Grid default_y_grid(const ParametricProblem& p, const Tolerances& tol) {
    return Grid::uniform(p.k, -tol.window_radius, tol.window_radius, p.k == 1 ? 400 : 60);
}

Grid default_x_grid(const ParametricProblem& p, const Tolerances& tol) {
    return Grid::uniform(p.m, -tol.window_radius, tol.window_radius, p.m == 1 ? 400 : 60);
}

/// The feasible decision samples at x_bar with finite objective, paired with
/// the objective value; the search space of the union-form members.
std::vector<std::pair<Vec, ExtReal>> feasible_slices(const ParametricProblem& p,
                                                     const Vec& x_bar, const Grid& y_grid) {
    std::vector<std::pair<Vec, ExtReal>> out;
    const std::size_t n = y_grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec z = join(x_bar, y_grid.point(i));
        if (!feasible_point(p, z)) continue;
        ExtReal v = p.phi(z);
        if (v.is_finite()) out.emplace_back(z, v);
    }
    return out;
}

}  // namespace

ValueFnResult optimal_value(const ParametricProblem& p, const Vec& x, const Grid& y_grid,
                            const Tolerances& tol) {
    return scan_optimal(p, x, y_grid, tol, true);
}

ValueFnOnGrid value_function_on_grid(const ParametricProblem& p, const Grid& x_grid,
                                     const Grid& y_grid, const Tolerances& tol) {
    validate_problem(p);
    if (x_grid.dim() != p.m) throw DimensionMismatch{};
    ValueFnOnGrid out(x_grid);
    const std::size_t n = x_grid.size();
    out.mu.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ValueFnResult r = scan_optimal(p, x_grid.point(i), y_grid, tol, false);
        out.mu.push_back(r.mu);
        out.any_flag = out.any_flag || r.window_flagged;
    }
    if (p.m == 1) out.mu = convex_repair_1d(x_grid, std::move(out.mu));
    return out;
}

ParametricSubdiffResult unconstrained_eps_subdiff(const ParametricProblem& p, const Vec& x_bar,
                                                  double eps, const Tolerances& tol) {
    validate_problem(p);
    Grid y_grid = default_y_grid(p, tol);
    Grid x_grid = default_x_grid(p, tol);
    ValueFnResult at_xbar = optimal_value(p, x_bar, y_grid, tol);
    if (!at_xbar.mu.is_finite())
        throw Error("parametric subdifferential: mu(x_bar) is not finite");

    ConvexFn mu = value_function_on_grid(p, x_grid, y_grid, tol).sampled_mu();
    ParametricSubdiffResult out{eps_subdiff_set(mu, x_bar, eps, tol), DualSet{}, DualSet{},
                                false};
    sharpen_direct_interval(out.direct, p, x_bar, eps, y_grid, tol);

    // The formula routes test (x*, 0) against subdifferentials of the
    // essential objective (phi plus the constraint indicator when present).
    ConvexFn phi_ess =
        p.graph ? ConvexFn::sum(p.phi, ConvexFn::indicator(*p.graph)) : p.phi;
    auto conj = std::make_shared<ConjCache>(phi_ess, tol);

    auto lift = [m = p.m, k = p.k](const Vec& x_star) {
        Vec u = Vec::Zero(m + k);
        u.head(m) = x_star;
        return u;
    };

    // Pre-pair each decision sample with its essential objective value.
    auto near_lists = std::make_shared<std::vector<std::vector<std::pair<Vec, ExtReal>>>>();
    for (const auto& etas : at_xbar.near_solution_sets) {
        std::vector<std::pair<Vec, ExtReal>> lst;
        for (const Vec& y : etas) {
            Vec z = join(x_bar, y);
            lst.emplace_back(z, phi_ess(z));
        }
        near_lists->push_back(std::move(lst));
    }
    auto all_list = std::make_shared<std::vector<std::pair<Vec, ExtReal>>>(
        feasible_slices(p, x_bar, y_grid));
    auto ladder = tol.eta_ladder;
    Tolerances tl = tol;

    // The meta rung at eta imposes the near-solution constraints with a 2*eta
    // budget: every near-solution y is only an eta-solution, which already
    // consumes eta of the budget, so the 2*eta rung keeps a clean eta of
    // headroom and both floors (meta and union) shrink at the same sqrt(eta)
    // rate toward the common eta -> 0 limit.
    auto meta_rung = [conj, near_lists, ladder, lift, eps, tl](std::size_t ei) {
        return [conj, near_lists, ladder, lift, eps, tl, ei](const Vec& x_star) {
            Vec u = lift(x_star);
            for (const auto& [z, v] : (*near_lists)[ei])
                if (!phi_subgrad_test(*conj, z, v, u, eps + 2 * ladder[ei], tl))
                    return false;
            return true;
        };
    };
    auto union_rung = [conj, all_list, ladder, lift, eps, tl](std::size_t ei) {
        return [conj, all_list, ladder, lift, eps, tl, ei](const Vec& x_star) {
            Vec u = lift(x_star);
            for (const auto& [z, v] : *all_list)
                if (phi_subgrad_test(*conj, z, v, u, eps + ladder[ei], tl)) return true;
            return false;
        };
    };
    out.formula_meta.dim = p.m;
    out.formula_meta.member = [meta_rung, ladder](const Vec& x_star) {
        for (std::size_t ei = 0; ei < ladder.size(); ++ei)
            if (!meta_rung(ei)(x_star)) return false;
        return true;
    };
    out.formula_union.dim = p.m;
    out.formula_union.member = [union_rung, ladder](const Vec& x_star) {
        for (std::size_t ei = 0; ei < ladder.size(); ++ei)
            if (!union_rung(ei)(x_star)) return false;
        return true;
    };
    using RungFn = std::function<std::function<bool(const Vec&)>(std::size_t)>;
    std::vector<std::pair<DualSet*, RungFn>> forms{{&out.formula_meta, meta_rung},
                                                   {&out.formula_union, union_rung}};
    for (auto& [s, rung] : forms) {
        if (p.m == 1 && ladder.size() >= 2) {
            // The rung sets shrink as eta drops, so the ladder intersection is
            // the finest rung; scanning just the two finest rungs gives both
            // the realized interval and its eta -> 0 extrapolation.
            std::size_t i1 = ladder.size() - 1, i2 = ladder.size() - 2;
            DualSet fine = DualSet::from_membership(1, rung(i1), tol);
            DualSet coarse = DualSet::from_membership(1, rung(i2), tol);
            s->interval_1d = extrapolate_ladder_interval(fine.interval_1d, coarse.interval_1d,
                                                         ladder[i1], ladder[i2], tol);
            s->support_samples = std::move(fine.support_samples);
        } else {
            DualSet scan = DualSet::from_membership(p.m, s->member, tol);
            s->interval_1d = scan.interval_1d;
            s->support_samples = std::move(scan.support_samples);
        }
    }
    out.all_equal = dual_equal_window(out.direct, out.formula_meta, tol) &&
                    dual_equal_window(out.direct, out.formula_union, tol) &&
                    dual_equal_window(out.formula_meta, out.formula_union, tol);
    return out;
}

bool unconstrained_solution_case(const ParametricProblem& p, const Vec& x_bar, double eps,
                                 const Vec& y_sol, const Tolerances& tol) {
    validate_problem(p);
    Grid y_grid = default_y_grid(p, tol);
    ValueFnResult at_xbar = scan_optimal(p, x_bar, y_grid, tol, false);
    Vec z_sol = join(x_bar, y_sol);
    ExtReal v_sol = feasible_point(p, z_sol) ? p.phi(z_sol) : ExtReal::pos_inf();
    if (!at_xbar.mu.is_finite() || !v_sol.is_finite() ||
        v_sol.as_double() > at_xbar.mu.as_double() + tol.set_tol)
        throw NotASolution("y_sol does not attain the optimal value at x_bar");

    ConvexFn phi_ess =
        p.graph ? ConvexFn::sum(p.phi, ConvexFn::indicator(*p.graph)) : p.phi;
    auto conj = std::make_shared<ConjCache>(phi_ess, tol);
    ExtReal v_ess = phi_ess(z_sol);
    Tolerances tl = tol;
    int m = p.m, k = p.k;

    DualSet single;
    single.dim = p.m;
    single.member = [conj, z_sol, v_ess, eps, tl, m, k](const Vec& x_star) {
        Vec u = Vec::Zero(m + k);
        u.head(m) = x_star;
        return phi_subgrad_test(*conj, z_sol, v_ess, u, eps, tl);
    };

    ConvexFn mu = value_function_on_grid(p, default_x_grid(p, tol), y_grid, tol).sampled_mu();
    DualSet direct = eps_subdiff_set(mu, x_bar, eps, tol);
    sharpen_direct_interval(direct, p, x_bar, eps, y_grid, tol);
    return dual_equal_window(direct, single, tol);
}

ConstrainedSubdiffResult constrained_eps_subdiff(const ParametricProblem& p, const Vec& x_bar,
                                                 double eps, const Tolerances& tol) {
    validate_problem(p);
    if (!p.graph) throw Error("constrained route requires a constraint graph");
    Grid y_grid = default_y_grid(p, tol);
    Grid x_grid = default_x_grid(p, tol);
    ValueFnResult at_xbar = optimal_value(p, x_bar, y_grid, tol);
    if (!at_xbar.mu.is_finite())
        throw Error("parametric subdifferential: mu(x_bar) is not finite");

    ConvexFn mu = value_function_on_grid(p, x_grid, y_grid, tol).sampled_mu();
    ConstrainedSubdiffResult out{eps_subdiff_set(mu, x_bar, eps, tol),
                                 DualSet{},
                                 DualSet{},
                                 {},
                                 false,
                                 false};
    sharpen_direct_interval(out.direct, p, x_bar, eps, y_grid, tol);

    auto conj = std::make_shared<ConjCache>(p.phi, tol);
    const int dim = p.m + p.k;
    // Candidate phi-subgradients per (decision, gamma1) key, memoized across
    // membership queries; the normal-direction sets are memoized alongside.
    struct Shared {
        ConvexSetDesc graph;
        ConvexFn phi;
        Tolerances tol;
        Grid ugrid;
        // The conjugate on the candidate grid does not depend on the decision,
        // so it is evaluated once; per decision only a sorted list of
        // conjugate-test margins survives, and the phi-subgradient candidates
        // for any budget slice are a prefix of that list.
        std::vector<ExtReal> conj_grid;
        std::map<long, std::vector<std::pair<double, Vec>>> margin_cache;
        // Normal-direction sets are memoized per (decision, quantized budget
        // slice), since the same decision is probed under several rung budgets.
        std::map<std::pair<long, long>, DualSet> n_cache;
        std::vector<std::vector<std::pair<Vec, ExtReal>>> near;  // per eta: (z, phi(z))
        std::vector<std::pair<Vec, ExtReal>> all;                // feasible slices
        std::vector<double> ladder;
        double margin_cap = 0;  // largest budget any split will ever probe
        ConjCache* conj = nullptr;

        static long gamma_key(double gamma) { return std::llround(gamma * 1e9); }

        const std::vector<std::pair<double, Vec>>& margins(long y_key, const Vec& z,
                                                           ExtReal phi_z) {
            auto it = margin_cache.find(y_key);
            if (it != margin_cache.end()) return it->second;
            std::vector<std::pair<double, Vec>> out;
            if (phi_z.is_finite()) {
                const std::size_t n = ugrid.size();
                if (conj_grid.empty()) {
                    conj_grid.reserve(n);
                    for (std::size_t i = 0; i < n; ++i)
                        conj_grid.push_back(conj->eval(ugrid.point(i)));
                }
                for (std::size_t i = 0; i < n; ++i) {
                    if (!conj_grid[i].is_finite()) continue;
                    Vec u = ugrid.point(i);
                    double m = conj_grid[i].as_double() + phi_z.as_double() - u.dot(z);
                    if (m <= margin_cap + formula_slack(tol)) out.emplace_back(m, u);
                }
                std::sort(out.begin(), out.end(),
                          [](const auto& a, const auto& b) { return a.first < b.first; });
            }
            return margin_cache.emplace(y_key, std::move(out)).first->second;
        }

        const DualSet& n_set(long y_key, const Vec& z, double gamma2) {
            auto key = std::make_pair(y_key, gamma_key(gamma2));
            auto it = n_cache.find(key);
            if (it != n_cache.end()) return it->second;
            DualSet s = graph.kind() == SetKind::Cone
                            ? cone_eps_normals(graph, z, gamma2, tol)
                            : eps_normal_set(graph, z, gamma2, tol);
            return n_cache.emplace(key, std::move(s)).first->second;
        }
    };
    auto sh = std::make_shared<Shared>(Shared{*p.graph,
                                              p.phi,
                                              tol,
                                              Grid::uniform(dim, -tol.window_radius,
                                                            tol.window_radius,
                                                            dim == 2 ? 80 : dim == 1 ? 400 : 24),
                                              {},
                                              {},
                                              {},
                                              {},
                                              {},
                                              tol.eta_ladder,
                                              0.0,
                                              nullptr});
    sh->margin_cap =
        eps + 2 * *std::max_element(tol.eta_ladder.begin(), tol.eta_ladder.end());
    sh->conj = conj.get();
    for (const auto& etas : at_xbar.near_solution_sets) {
        std::vector<std::pair<Vec, ExtReal>> lst;
        for (const Vec& y : etas) {
            Vec z = join(x_bar, y);
            lst.emplace_back(z, p.phi(z));
        }
        sh->near.push_back(std::move(lst));
    }
    sh->all = feasible_slices(p, x_bar, y_grid);

    const int splits = tol.gamma_splits;
    double eps_cap = eps;
    int m = p.m, k = p.k;
    auto lift = [m, k](const Vec& x_star) {
        Vec u = Vec::Zero(m + k);
        u.head(m) = x_star;
        return u;
    };
    // Does some split gamma1 + gamma2 = budget produce w = a + nu with a an
    // eps-subgradient of phi and nu a normal direction, for this decision z?
    auto split_hit = [sh, splits](const Vec& w, long y_key, const Vec& z, ExtReal phi_z,
                                  double budget) {
        const auto& margins = sh->margins(y_key, z, phi_z);
        if (margins.empty()) return false;
        const double slack = formula_slack(sh->tol);
        for (int j = 0; j < splits; ++j) {
            double g1 = budget * j / (splits - 1);
            double g2 = budget - g1;
            const DualSet& ns = sh->n_set(y_key, z, g2);
            for (const auto& [m, a] : margins) {
                if (m > g1 + slack) break;
                if (ns.contains(w - a)) return true;
            }
        }
        return false;
    };
    auto y_key_of = [](const Vec& z) {
        long key = 0;
        for (int i = 0; i < z.size(); ++i)
            key = key * 1000003 + static_cast<long>(std::llround(z[i] * 1e6));
        return key;
    };

    // As in the unconstrained route, the meta rungs run on a 2*eta budget
    // (near-solutions are eta-solutions) and the eta -> 0 limit of each 1D
    // formula set is estimated from the two finest rungs.
    auto meta_rung = [sh, lift, split_hit, y_key_of, eps_cap](std::size_t ei) {
        return [sh, lift, split_hit, y_key_of, eps_cap, ei](const Vec& x_star) {
            Vec w = lift(x_star);
            double budget = eps_cap + 2 * sh->ladder[ei];
            for (const auto& [z, v] : sh->near[ei])
                if (!split_hit(w, y_key_of(z), z, v, budget)) return false;
            return true;
        };
    };
    auto union_rung = [sh, lift, split_hit, y_key_of, eps_cap](std::size_t ei) {
        return [sh, lift, split_hit, y_key_of, eps_cap, ei](const Vec& x_star) {
            Vec w = lift(x_star);
            double budget = eps_cap + sh->ladder[ei];
            for (const auto& [z, v] : sh->all)
                if (split_hit(w, y_key_of(z), z, v, budget)) return true;
            return false;
        };
    };
    out.formula_meta.dim = p.m;
    out.formula_meta.member = [sh, meta_rung](const Vec& x_star) {
        for (std::size_t ei = 0; ei < sh->ladder.size(); ++ei)
            if (!meta_rung(ei)(x_star)) return false;
        return true;
    };
    out.formula_union.dim = p.m;
    out.formula_union.member = [sh, union_rung](const Vec& x_star) {
        for (std::size_t ei = 0; ei < sh->ladder.size(); ++ei)
            if (!union_rung(ei)(x_star)) return false;
        return true;
    };
    using RungFn = std::function<std::function<bool(const Vec&)>(std::size_t)>;
    std::vector<std::pair<DualSet*, RungFn>> forms{{&out.formula_meta, meta_rung},
                                                   {&out.formula_union, union_rung}};
    for (auto& [s, rung] : forms) {
        if (p.m == 1 && sh->ladder.size() >= 2) {
            // As above: the finest rung carries the ladder intersection.
            std::size_t i1 = sh->ladder.size() - 1, i2 = sh->ladder.size() - 2;
            DualSet fine = DualSet::from_membership(1, rung(i1), tol);
            DualSet coarse = DualSet::from_membership(1, rung(i2), tol);
            s->interval_1d =
                extrapolate_ladder_interval(fine.interval_1d, coarse.interval_1d,
                                            sh->ladder[i1], sh->ladder[i2], tol);
            s->support_samples = std::move(fine.support_samples);
        } else {
            DualSet scan = DualSet::from_membership(p.m, s->member, tol);
            s->interval_1d = scan.interval_1d;
            s->support_samples = std::move(scan.support_samples);
        }
    }

    // Regularity: (a) an interior graph point inside dom phi, (b) a
    // continuity point of phi on the graph, (i)/(ii) the domain-difference
    // conditions for phi against the graph indicator.
    ConvexSetDesc dom_phi = p.phi.effective_domain();
    try {
        out.regularity.a = has_interior_domain_point_in(*p.graph, dom_phi, tol);
    } catch (const Error&) {
    }
    try {
        out.regularity.b = has_interior_domain_point_in(dom_phi, *p.graph, tol);
    } catch (const Error&) {
    }
    try {
        RegularityReportLenient rl =
            check_regularity_lenient(p.phi, ConvexFn::indicator(*p.graph), tol);
        out.regularity.i = rl.ab;
        out.regularity.ii = rl.bs;
    } catch (const Error&) {
    }

    out.all_equal = dual_equal_window(out.direct, out.formula_meta, tol) &&
                    dual_equal_window(out.direct, out.formula_union, tol) &&
                    dual_equal_window(out.formula_meta, out.formula_union, tol);
    out.certified = out.all_equal && out.regularity.any();
    return out;
}

bool reduction_identity_check(const ParametricProblem& p, const Grid& dual_grid,
                              const Tolerances& tol) {
    validate_problem(p);
    if (dual_grid.dim() != p.m) throw DimensionMismatch{};
    Grid y_grid = default_y_grid(p, tol);
    Grid x_grid = default_x_grid(p, tol);
    ConvexFn mu = value_function_on_grid(p, x_grid, y_grid, tol).sampled_mu();
    ConjugateResult mu_conj = conjugate(mu, dual_grid, tol);

    ConvexFn phi_ess =
        p.graph ? ConvexFn::sum(p.phi, ConvexFn::indicator(*p.graph)) : p.phi;
    const std::size_t n = dual_grid.size();
    std::vector<ExtReal> rhs(n, ExtReal::pos_inf());
    for (std::size_t i = 0; i < n; ++i) {
        Vec u = Vec::Zero(p.m + p.k);
        u.head(p.m) = dual_grid.point(i);
        rhs[i] = conjugate_eval(phi_ess, u, tol);
    }

    const double cmp_tol = conj_tol_for_step(std::max(x_grid.max_step(), y_grid.max_step()));
    auto near_transition = [&](const std::vector<ExtReal>& arr, std::size_t i) {
        if (dual_grid.dim() != 1) return false;
        bool fin = arr[i].is_finite();
        for (long off : {-2L, -1L, 1L, 2L}) {
            long j = static_cast<long>(i) + off;
            if (j < 0 || j >= static_cast<long>(arr.size())) continue;
            if (arr[static_cast<std::size_t>(j)].is_finite() != fin) return true;
        }
        return false;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const ExtReal& l = mu_conj.samples[i];
        const ExtReal& r = rhs[i];
        if (l.is_finite() && r.is_finite()) {
            if (std::abs(l.as_double() - r.as_double()) > cmp_tol) return false;
        } else if (l.is_finite() != r.is_finite() || l.is_pos_inf() != r.is_pos_inf()) {
            // classification flips are tolerated next to a finite/infinite edge
            if (!near_transition(mu_conj.samples, i) && !near_transition(rhs, i)) return false;
        }
    }
    return true;
}

}  // namespace cvxeps
