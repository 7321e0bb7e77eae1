#pragma once

#include <memory>
#include <vector>

#include "cvxeps/numerics.hpp"

namespace cvxeps {

class ConvexSetDesc;
struct FnNode;

enum class FnKind {
    Affine,      // x -> <a,x> + b
    QuadDiag,    // x -> sum_i q_i (x_i - shift_i)^2, q_i >= 0
    AbsNorm,     // x -> sum_i w_i |x_i|, w_i > 0
    NegSqrt1D,   // x -> -sqrt(x) on x >= 0, +inf otherwise
    NegRecip1D,  // x -> -1/(4x) on x < 0, +inf otherwise (the dual of NegSqrt1D)
    Indicator,   // 0 on C, +inf off C
    Sum,
    Scale,       // lambda * f, lambda > 0
    Separable,   // (x, y) -> f1(x) + f2(y)
    Sampled,     // grid-defined convex data
};

/// Symbolic description of a proper convex extended-real function on R^n,
/// n <= 3. Immutable value handle; evaluation is pure.
class ConvexFn {
public:
    static ConvexFn affine(Vec a, double b);
    static ConvexFn quad_diag(Vec q, Vec shift);
    static ConvexFn abs_norm(Vec w);
    static ConvexFn neg_sqrt();
    static ConvexFn neg_recip();
    static ConvexFn indicator(ConvexSetDesc C);
    static ConvexFn sum(ConvexFn f, ConvexFn g);
    static ConvexFn scale(double lambda, ConvexFn f);
    static ConvexFn separable(ConvexFn f1, ConvexFn f2);
    /// Sampled data is convexity-certified along every axis line at
    /// construction and rejected otherwise.
    static ConvexFn sampled(Grid grid, std::vector<ExtReal> values);

    static ConvexFn zero(int dim) { return affine(Vec::Zero(dim), 0.0); }

    int dim() const;
    FnKind kind() const;

    ExtReal operator()(const Vec& x) const;
    ExtReal eval1(double x) const { return (*this)(vec1(x)); }

    /// Symbolic description of {x : f(x) < +inf}.
    ConvexSetDesc effective_domain() const;

    const FnNode& node() const { return *node_; }

private:
    explicit ConvexFn(std::shared_ptr<const FnNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const FnNode> node_;
};

/// Epigraph of f as a set in R^(n+1); membership is alpha >= f(x), exact.
ConvexSetDesc epigraph(const ConvexFn& f);

/// Necessary-condition screen for lower semicontinuity on a grid: at every
/// grid point, f(x) must not exceed the best neighbor value by more than a
/// step-derived modulus. A heuristic, not a decision procedure.
bool check_lsc_on_grid(const ConvexFn& f, const Grid& grid, const Tolerances& tol);

}  // namespace cvxeps
