#pragma once

// Internal node layouts for the ConvexFn / ConvexSetDesc handles. Kept out of
// the public headers so the two ASTs can reference each other by value.

#include <optional>
#include <utility>
#include <vector>

#include "cvxeps/functions.hpp"
#include "cvxeps/sets.hpp"

namespace cvxeps {

struct FnNode {
    FnKind kind;
    int dim = 1;

    Vec a;  // Affine
    double b = 0;

    Vec q, shift;  // QuadDiag
    Vec w;         // AbsNorm

    std::optional<ConvexSetDesc> set;  // Indicator

    std::optional<ConvexFn> f, g;  // Sum / Scale / Separable
    double lambda = 1;

    std::optional<Grid> grid;  // Sampled
    std::vector<ExtReal> values;
};

struct SetNode {
    SetKind kind;
    int dim = 1;

    std::vector<XInterval> axes;  // Interval (size 1) / Box

    Vec center;  // Ball
    double radius = 0;

    std::vector<std::pair<Vec, double>> rows;  // HalfspaceIntersection / Cone (b = 0)

    Vec point;  // Singleton / Translate offset (reused as v)

    std::optional<ConvexSetDesc> a, b;      // Product
    std::optional<ConvexSetDesc> inner;     // Translate / GraphOfG
    std::vector<ConvexSetDesc> parts;       // Intersection
    std::optional<ConvexFn> fn;             // Epigraph
    int m = 0, k = 0;                       // GraphOfG split

    // lazily built sweep tables for support computations (single-threaded use)
    mutable std::shared_ptr<const std::vector<Vec>> member_cache;
    mutable std::shared_ptr<const std::vector<std::pair<Vec, double>>> graph_cache;
    mutable double cache_radius = 0;
};

}  // namespace cvxeps
