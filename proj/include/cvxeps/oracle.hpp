#pragma once

#include "cvxeps/functions.hpp"
#include "cvxeps/numerics.hpp"
#include "cvxeps/parametric.hpp"
#include "cvxeps/sets.hpp"

namespace cvxeps {

/// Brute-force reference implementations straight from the definitions. The
/// oracle never shares code paths with the analytic routes: every predicate is
/// a quantifier over a dense primal grid with an explicit slack.
struct OracleConfig {
    Grid primal_grid;
    double slack;

    /// Dense window grid with slack 2 * step * R (one-cell quantifier error
    /// amplified by the window radius).
    static OracleConfig standard(int dim, const Tolerances& tol);
};

/// {x* : <x*, x - x_bar> <= f(x) - f(x_bar) + eps for all grid x}.
DualSet oracle_eps_subdiff(const ConvexFn& f, const Vec& x_bar, double eps,
                           const OracleConfig& cfg, const Tolerances& tol);

/// {x* : <x*, x - x_bar> <= eps for all grid x in C}.
DualSet oracle_eps_normal(const ConvexSetDesc& C, const Vec& x_bar, double eps,
                          const OracleConfig& cfg, const Tolerances& tol);

/// {x* : <x*, a> <= 1 for all grid a in A}.
DualSet oracle_polar(const ConvexSetDesc& A, const OracleConfig& cfg, const Tolerances& tol);

/// Exhaustive minimum of the parametric objective over the decision grid, no
/// refinement and no attainment analysis.
std::vector<ExtReal> oracle_value_fn(const ParametricProblem& p, const Grid& x_grid,
                                     const Grid& y_grid);

}  // namespace cvxeps
