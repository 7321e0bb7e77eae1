#pragma once

#include <functional>
#include <optional>

#include "cvxeps/functions.hpp"
#include "cvxeps/numerics.hpp"
#include "cvxeps/sets.hpp"
#include "cvxeps/transforms.hpp"

namespace cvxeps {

/// Reusable membership tester for x* in the eps-subdifferential of f at
/// x_bar: f*(x*) + f(x_bar) <= <x*, x_bar> + eps + slack. The conjugate is
/// evaluated through the closed form when one exists and through a cached
/// sampled conjugate otherwise, so per-query cost stays O(1)-ish.
class SubgradTester {
public:
    SubgradTester(ConvexFn f, Vec x_bar, const Tolerances& tol);

    bool operator()(const Vec& x_star, double eps) const;
    double f_at_xbar() const { return f_xbar_; }

private:
    ConvexFn f_;
    Vec x_bar_;
    Tolerances tol_;
    double f_xbar_ = 0;
    std::optional<ConvexFn> closed_conj_;
    std::optional<ConjugateResult> sampled_conj_;
    bool symbolic_route_ = false;  // Separable/Scale recursion via conjugate_eval
};

/// Membership test for the eps-subdifferential, conjugate route. Throws when
/// f(x_bar) is not finite.
bool eps_subdiff_membership(const ConvexFn& f, const Vec& x_bar, double eps,
                            const Vec& x_star, const Tolerances& tol);

/// The support-function value of the eps-subdifferential in direction v,
/// inf_{t>0} (f(x_bar + t v) - f(x_bar) + eps) / t, minimized over a
/// logarithmic t-grid with golden-section refinement.
double support_formula_value(const ConvexFn& f, const Vec& x_bar, double eps, const Vec& v,
                             const Tolerances& tol);

/// Same minimization for a pointwise-evaluable convex function (used where the
/// function is only available as an evaluator, e.g. refined optimal values).
/// With tail_extrapolate set, a minimum attained at the largest evaluable t is
/// Richardson-corrected in 1/t; enable it only when the evaluator's reach is a
/// window artifact rather than a genuine domain boundary.
double support_formula_value(const std::function<ExtReal(const Vec&)>& f, const Vec& x_bar,
                             double eps, const Vec& v, const Tolerances& tol,
                             bool tail_extrapolate = false);

/// The eps-subdifferential as a DualSet. 1D interval endpoints come from the
/// support formula (sharper than a membership scan); membership stays the
/// conjugate test.
DualSet eps_subdiff_set(const ConvexFn& f, const Vec& x_bar, double eps,
                        const Tolerances& tol);

/// The exact subdifferential realized as the intersection of
/// eps-subdifferentials over the eta ladder.
DualSet subdiff_via_eps_intersection(const ConvexFn& f, const Vec& x_bar,
                                     const Tolerances& tol);

struct SumRuleResult {
    DualSet lhs;           // eps-subdifferential of f1 + f2
    DualSet rhs;           // union over eps-splits of the summed subdifferentials
    bool condition_H;      // qualification held at all sampled dual points
    bool equal_on_window;  // lhs == rhs after window clipping
    bool certified;        // equality plus qualification
};

SumRuleResult sum_rule_eval(const ConvexFn& f1, const ConvexFn& f2, const Vec& x_bar,
                            double eps, const Tolerances& tol);

/// Checks the positive-scaling identity between the eps-subdifferential of
/// lambda f and the scaled (eps/lambda)-subdifferential of f.
bool scale_rule_check(const ConvexFn& f, const Vec& x_bar, double eps, double lambda,
                      const Tolerances& tol);

struct SeparableInclusions {
    bool inner = false;  // subdiff of the pair sits inside the product of parts
    bool outer = false;  // product of parts sits inside the 2*eps subdiff
};

SeparableInclusions separable_inclusions_check(const ConvexFn& phi1, const ConvexFn& phi2,
                                               const Vec& x_bar, const Vec& y_bar, double eps,
                                               const Tolerances& tol);

/// Cross-checks the eps-subdifferential against eps-normal directions to the
/// epigraph: x* is an eps-subgradient iff (x*, -1) is an eps-normal direction
/// at (x_bar, f(x_bar)).
bool epigraph_link_check(const ConvexFn& f, const Vec& x_bar, double eps,
                         const Tolerances& tol);

}  // namespace cvxeps
