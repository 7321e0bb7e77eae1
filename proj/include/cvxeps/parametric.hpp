#pragma once

#include <optional>
#include <vector>

#include "cvxeps/functions.hpp"
#include "cvxeps/numerics.hpp"
#include "cvxeps/sets.hpp"
#include "cvxeps/subdiff.hpp"

namespace cvxeps {

/// min_y phi(x, y) subject to (x, y) in gph G (when a graph is given); the
/// optimal value mu(x) is studied as a convex function of the parameter x.
struct ParametricProblem {
    ConvexFn phi;                        // objective on R^(m+k)
    std::optional<ConvexSetDesc> graph;  // constraint graph over R^(m+k)
    int m = 1;                           // parameter dimension
    int k = 1;                           // decision dimension
};

struct ValueFnResult {
    Vec x;
    ExtReal mu = ExtReal::pos_inf();
    bool minimizer_found = false;  // interior minimizer located and refined
    std::optional<Vec> minimizer;
    bool window_flagged = false;  // best decision sat on the window boundary
    /// Near-optimal decision samples per eta of the ladder:
    /// {y feasible : phi(x, y) <= mu(x) + eta (+ grid modulus)}.
    std::vector<std::vector<Vec>> near_solution_sets;
};

ValueFnResult optimal_value(const ParametricProblem& p, const Vec& x, const Grid& y_grid,
                            const Tolerances& tol);

struct ValueFnOnGrid {
    Grid x_grid;
    std::vector<ExtReal> mu;
    bool any_flag = false;
    ConvexFn sampled_mu() const { return ConvexFn::sampled(x_grid, mu); }
    ValueFnOnGrid(Grid g) : x_grid(std::move(g)) {}
};

ValueFnOnGrid value_function_on_grid(const ParametricProblem& p, const Grid& x_grid,
                                     const Grid& y_grid, const Tolerances& tol);

/// Unconstrained route: the eps-subdifferential of mu at x_bar computed three
/// ways — directly from the sampled value function, from the near-solution
/// formula intersected over the eta ladder, and from the union-over-decisions
/// formula.
struct ParametricSubdiffResult {
    DualSet direct;
    DualSet formula_meta;   // intersection over eta of the near-solution form
    DualSet formula_union;  // intersection over eta of the union-over-y form
    bool all_equal = false;
};

ParametricSubdiffResult unconstrained_eps_subdiff(const ParametricProblem& p, const Vec& x_bar,
                                                  double eps, const Tolerances& tol);

/// Single-solution form: when y_sol solves the problem at x_bar, the
/// eps-subdifferential of mu equals the parameter slice of the
/// eps-subdifferential of phi at (x_bar, y_sol). Throws NotASolution when
/// y_sol is not optimal within set_tol.
bool unconstrained_solution_case(const ParametricProblem& p, const Vec& x_bar, double eps,
                                 const Vec& y_sol, const Tolerances& tol);

struct RegularityFlags {
    std::optional<bool> a;   // interior feasible point inside dom phi
    std::optional<bool> b;   // phi continuous somewhere on the graph
    std::optional<bool> i;   // subspace condition for the domain difference
    std::optional<bool> ii;  // 0 interior to the domain difference
    bool any() const {
        auto on = [](const std::optional<bool>& f) { return f.has_value() && *f; };
        return on(a) || on(b) || on(i) || on(ii);
    }
};

struct ConstrainedSubdiffResult {
    DualSet direct;
    DualSet formula_meta;
    DualSet formula_union;
    RegularityFlags regularity;
    bool all_equal = false;
    bool certified = false;  // equality plus at least one regularity condition
};

/// Constrained route: the formula sums eps-subgradients of phi with
/// eps-normal directions to the constraint graph over budget splits.
ConstrainedSubdiffResult constrained_eps_subdiff(const ParametricProblem& p, const Vec& x_bar,
                                                 double eps, const Tolerances& tol);

/// Conjugate reduction: mu*(v*) must equal the full conjugate of the
/// essential objective at (v*, 0), checked across a dual grid.
bool reduction_identity_check(const ParametricProblem& p, const Grid& dual_grid,
                              const Tolerances& tol);

}  // namespace cvxeps
