#include "cvxeps/oracle.hpp"

#include <memory>

namespace cvxeps {
namespace {

int oracle_cells(int dim) {
    switch (dim) {
        case 1: return 4096;
        case 2: return 128;
        default: return 40;
    }
}

}  // namespace

OracleConfig OracleConfig::standard(int dim, const Tolerances& tol) {
    Grid g = Grid::uniform(dim, -tol.window_radius, tol.window_radius, oracle_cells(dim));
    return OracleConfig{g, 2.0 * g.max_step() * tol.window_radius};
}

DualSet oracle_eps_subdiff(const ConvexFn& f, const Vec& x_bar, double eps,
                           const OracleConfig& cfg, const Tolerances& tol) {
    if (f.dim() != cfg.primal_grid.dim() || x_bar.size() != f.dim())
        throw DimensionMismatch{};
    ExtReal f0 = f(x_bar);
    if (!f0.is_finite()) throw Error("oracle: f(x_bar) is not finite");

    // Pre-evaluate f on the grid once; each membership query is then a pure
    // sweep of the defining inequality.
    auto pts = std::make_shared<std::vector<std::pair<Vec, double>>>();
    const std::size_t n = cfg.primal_grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec x = cfg.primal_grid.point(i);
        ExtReal fx = f(x);
        if (fx.is_finite()) pts->emplace_back(x - x_bar, fx.as_double() - f0.as_double());
    }
    double eps_s = eps;
    double slack = cfg.slack;
    auto member = [pts, eps_s, slack](const Vec& x_star) {
        for (const auto& [dx, df] : *pts)
            if (x_star.dot(dx) > df + eps_s + slack) return false;
        return true;
    };
    return DualSet::from_membership(f.dim(), member, tol);
}

DualSet oracle_eps_normal(const ConvexSetDesc& C, const Vec& x_bar, double eps,
                          const OracleConfig& cfg, const Tolerances& tol) {
    if (C.dim() != cfg.primal_grid.dim() || x_bar.size() != C.dim())
        throw DimensionMismatch{};
    if (!C.contains(x_bar)) throw Error("oracle: x_bar is not in C");
    auto pts = std::make_shared<std::vector<Vec>>();
    const std::size_t n = cfg.primal_grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec x = cfg.primal_grid.point(i);
        if (C.contains(x)) pts->push_back(x - x_bar);
    }
    double eps_s = eps;
    double slack = cfg.slack;
    auto member = [pts, eps_s, slack](const Vec& x_star) {
        for (const Vec& dx : *pts)
            if (x_star.dot(dx) > eps_s + slack) return false;
        return true;
    };
    return DualSet::from_membership(C.dim(), member, tol);
}

DualSet oracle_polar(const ConvexSetDesc& A, const OracleConfig& cfg, const Tolerances& tol) {
    if (A.dim() != cfg.primal_grid.dim()) throw DimensionMismatch{};
    auto pts = std::make_shared<std::vector<Vec>>();
    const std::size_t n = cfg.primal_grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec x = cfg.primal_grid.point(i);
        if (A.contains(x)) pts->push_back(x);
    }
    double slack = cfg.slack;
    auto member = [pts, slack](const Vec& x_star) {
        for (const Vec& a : *pts)
            if (x_star.dot(a) > 1.0 + slack) return false;
        return true;
    };
    return DualSet::from_membership(A.dim(), member, tol);
}

std::vector<ExtReal> oracle_value_fn(const ParametricProblem& p, const Grid& x_grid,
                                     const Grid& y_grid) {
    if (x_grid.dim() != p.m || y_grid.dim() != p.k || p.phi.dim() != p.m + p.k)
        throw DimensionMismatch{};
    std::vector<ExtReal> out;
    const std::size_t nx = x_grid.size();
    const std::size_t ny = y_grid.size();
    out.reserve(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        Vec x = x_grid.point(i);
        ExtReal best = ExtReal::pos_inf();
        for (std::size_t j = 0; j < ny; ++j) {
            Vec y = y_grid.point(j);
            Vec z(p.m + p.k);
            z << x, y;
            if (p.graph && !p.graph->contains(z)) continue;
            ExtReal v = p.phi(z);
            if (v < best) best = v;
        }
        out.push_back(best);
    }
    return out;
}

}  // namespace cvxeps
