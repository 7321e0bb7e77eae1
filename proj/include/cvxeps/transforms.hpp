#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cvxeps/functions.hpp"
#include "cvxeps/numerics.hpp"
#include "cvxeps/sets.hpp"

namespace cvxeps {

/// Legendre-Fenchel conjugate of f: closed-form branch when the AST has a
/// known conjugate, sampled branch always, plus the primal argmax per dual
/// grid point (NONE when the sup is +inf or unattained within the window).
struct ConjugateResult {
    std::optional<ConvexFn> closed_form;
    Grid dual_grid;
    std::vector<ExtReal> samples;
    std::vector<std::optional<Vec>> attainment_map;
    std::vector<bool> boundary_flag;  // unresolved window-too-small per point
    bool window_flagged = false;

    ConjugateResult(Grid g) : dual_grid(std::move(g)) {}

    /// f*(x_star): closed form when known, sampled interpolation otherwise.
    ExtReal eval(const Vec& x_star) const;
    ConvexFn sampled_fn() const;  // Sampled ConvexFn view of the samples
};

/// Lower convex envelope of 1D samples (finite region only). Removes
/// sub-tolerance concavity wobble so near-convex data passes the construction
/// certificate; exact convex data is unchanged.
std::vector<ExtReal> convex_repair_1d(const Grid& grid, std::vector<ExtReal> values);

/// Closed-form conjugate for the AST shapes that have one; nullopt otherwise.
std::optional<ConvexFn> closed_conjugate(const ConvexFn& f);

/// Pointwise conjugate value, preferring symbolic routes (closed forms,
/// separable/scale recursion) and falling back to a nested-window sup sweep
/// that classifies boundary maxima as +inf (diverging) or extrapolates
/// (converging, unattained).
ExtReal conjugate_eval(const ConvexFn& f, const Vec& x_star, const Tolerances& tol);

ConjugateResult conjugate(const ConvexFn& f, const Grid& dual_grid, const Tolerances& tol);

/// f** sampled on the primal grid via two conjugations.
ConvexFn biconjugate(const ConvexFn& f, const Grid& dual_grid, const Grid& primal_grid,
                     const Tolerances& tol);

struct InfConvCertificate {
    ExtReal value = ExtReal::pos_inf();
    std::optional<std::pair<Vec, Vec>> split;  // x1 + x2 = x when attained
    bool attained = false;
};

InfConvCertificate inf_convolution(const ConvexFn& f1, const ConvexFn& f2, const Vec& x,
                                   const Grid& grid, const Tolerances& tol);

struct ConditionHReport {
    bool holds_as_inf = false;  // (f1+f2)* equals the conjugates' inf-convolution
    bool attained = false;      // the infimum is attained (window-interior min)
    InfConvCertificate certificate;
};

/// The sum-rule qualification at one dual point: equality of (f1+f2)* with
/// f1* (+) f2* plus attainment of the infimum.
ConditionHReport check_condition_H(const ConvexFn& f1, const ConvexFn& f2, const Vec& x_star,
                                   const Grid& dual_grid, const Tolerances& tol);

struct RegularityReport {
    bool mr = false;  // one function continuous at a point of the other's domain
    bool ab = false;  // R+(dom f1 - dom f2) a closed subspace
    bool bs = false;  // 0 in int(dom f1 - dom f2)
};

/// Strict variant: throws UnsupportedDomainShape when the subspace condition
/// cannot be decided symbolically for the given domain shapes.
RegularityReport check_regularity(const ConvexFn& f1, const ConvexFn& f2,
                                  const Tolerances& tol);

struct RegularityReportLenient {
    bool mr = false;
    std::optional<bool> ab;  // nullopt when the domain shape is undecidable
    bool bs = false;
};

RegularityReportLenient check_regularity_lenient(const ConvexFn& f1, const ConvexFn& f2,
                                                 const Tolerances& tol);

/// True when f_cont has an interior domain point (sampled ball test) that lies
/// in other_dom; the continuity half of the mr condition.
bool has_interior_domain_point_in(const ConvexSetDesc& cont_dom,
                                  const ConvexSetDesc& other_dom, const Tolerances& tol);

}  // namespace cvxeps
