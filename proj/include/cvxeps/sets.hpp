#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "cvxeps/functions.hpp"
#include "cvxeps/numerics.hpp"

namespace cvxeps {

struct SetNode;

enum class SetKind {
    Interval,
    Box,
    Ball,
    HalfspaceIntersection,
    Cone,  // halfspace intersection through 0
    Singleton,
    FullSpace,
    Product,
    Translate,
    Intersection,  // closes the domain algebra under Sum
    Epigraph,
    GraphOfG,  // gph G = {(x, y) : y in G(x)} as a set over R^(m+k)
};

struct SupportValue {
    ExtReal value;
    bool window_flagged = false;  // maximizer hit the sweep window boundary
};

/// Symbolic convex set with exact membership and a support function that is
/// closed-form where possible and window-swept (with a boundary flag) else.
class ConvexSetDesc {
public:
    static ConvexSetDesc interval(XInterval iv);
    static ConvexSetDesc box(std::vector<XInterval> axes);
    static ConvexSetDesc ball(Vec center, double radius);
    /// rows (a, b) meaning <a, x> <= b
    static ConvexSetDesc halfspaces(int dim, std::vector<std::pair<Vec, double>> rows);
    /// rows a meaning <a, x> <= 0; a convex cone with apex 0
    static ConvexSetDesc cone(int dim, std::vector<Vec> normals);
    static ConvexSetDesc singleton(Vec p);
    static ConvexSetDesc full_space(int dim);
    static ConvexSetDesc product(ConvexSetDesc a, ConvexSetDesc b);
    static ConvexSetDesc translate(ConvexSetDesc a, Vec v);
    static ConvexSetDesc intersection(std::vector<ConvexSetDesc> parts);
    static ConvexSetDesc epigraph_of(ConvexFn f);
    static ConvexSetDesc graph_of(ConvexSetDesc inner, int m, int k);

    int dim() const;
    SetKind kind() const;

    bool contains(const Vec& x) const;
    SupportValue support(const Vec& d, const Tolerances& tol) const;

    /// Per-axis interval decomposition when the set is (equivalent to) a box;
    /// nullopt otherwise. Used by the symbolic regularity checks.
    std::optional<std::vector<XInterval>> as_box() const;

    const SetNode& node() const { return *node_; }

private:
    explicit ConvexSetDesc(std::shared_ptr<const SetNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const SetNode> node_;
};

/// A computed subset of the dual space. Membership is the source of truth;
/// the interval (1D) and support table (nD) are derived views.
struct DualSet {
    int dim = 1;
    std::function<bool(const Vec&)> member;
    std::optional<XInterval> interval_1d;
    std::optional<std::vector<std::pair<Vec, ExtReal>>> support_samples;
    bool window_flagged = false;

    bool contains(const Vec& p) const { return member(p); }
    bool contains1(double p) const { return member(vec1(p)); }

    /// Wrap a membership predicate and fill the derived views.
    static DualSet from_membership(int dim, std::function<bool(const Vec&)> m,
                                   const Tolerances& tol);

    /// 1D interval extraction: window scan plus bisection refinement of both
    /// endpoints (membership along a ray of a convex set is monotone).
    static XInterval interval_from_membership(const std::function<bool(const Vec&)>& m,
                                              const Tolerances& tol);
};

DualSet polar(const ConvexSetDesc& A, const Tolerances& tol);
DualSet eps_normal_set(const ConvexSetDesc& C, const Vec& x_bar, double eps,
                       const Tolerances& tol);
DualSet normal_cone_limit(const ConvexSetDesc& C, const Vec& x_bar, double eps,
                          const Tolerances& tol);
DualSet cone_eps_normals(const ConvexSetDesc& C, const Vec& x_bar, double eps,
                         const Tolerances& tol);

/// member(z) iff z = u + v with member_a(u), member_b(v); u searched over the
/// split grid.
DualSet minkowski_sum(const DualSet& a, const DualSet& b, const Grid& split_grid,
                      const Tolerances& tol);
DualSet scale_dual(double lambda, const DualSet& a, const Tolerances& tol);
DualSet intersect_dual(std::vector<DualSet> parts, const Tolerances& tol);

/// Window equality of dual sets: 1D compares refined intervals at set_tol;
/// nD compares membership rasters with a one-cell mutual dilation.
bool dual_equal_window(const DualSet& a, const DualSet& b, const Tolerances& tol,
                       int cells_per_axis = 200);

/// Hausdorff-style error estimate used in reports: 1D interval endpoint gap,
/// nD largest violation distance in grid cells times the step.
double dual_window_error(const DualSet& a, const DualSet& b, const Tolerances& tol,
                         int cells_per_axis = 200);

}  // namespace cvxeps
