#include "cvxeps/functions.hpp"

#include <algorithm>
#include <cmath>

#include "cvxeps/sets.hpp"
#include "nodes.hpp"

namespace cvxeps {

namespace {

std::shared_ptr<FnNode> make_node(FnKind kind, int dim) {
    auto n = std::make_shared<FnNode>();
    n->kind = kind;
    n->dim = dim;
    return n;
}

/// Certify convexity of sampled data along every axis line: on each line the
// finite region must be contiguous and the second differences nonnegative.
void certify_sampled(const Grid& grid, const std::vector<ExtReal>& values) {
    if (values.size() != grid.size()) throw Error("Sampled: value table size mismatch");
    bool any_finite = false;
    for (const auto& v : values) {
        if (v.is_neg_inf()) throw Error("Sampled: -inf value, function not proper");
        if (v.is_finite()) any_finite = true;
    }
    if (!any_finite) throw Error("Sampled: empty effective domain");

    const auto& axes = grid.axes();
    const int dim = grid.dim();
    std::vector<std::size_t> strides(dim, 1);
    for (int d = 1; d < dim; ++d)
        strides[d] = strides[d - 1] * static_cast<std::size_t>(axes[d - 1].count);

    for (int d = 0; d < dim; ++d) {
        const std::size_t stride = strides[d];
        const int n = axes[d].count;
        const std::size_t lines = grid.size() / static_cast<std::size_t>(n);
        for (std::size_t line = 0; line < lines; ++line) {
            // base index of this axis line
            std::size_t rem = line, base = 0;
            for (int e = 0; e < dim; ++e) {
                if (e == d) continue;
                auto c = static_cast<std::size_t>(axes[e].count);
                base += (rem % c) * strides[e];
                rem /= c;
            }
            int first = -1, last = -1;
            for (int i = 0; i < n; ++i) {
                if (values[base + stride * static_cast<std::size_t>(i)].is_finite()) {
                    if (first < 0) first = i;
                    last = i;
                }
            }
            for (int i = first; i >= 0 && i <= last; ++i)
                if (!values[base + stride * static_cast<std::size_t>(i)].is_finite())
                    throw Error("Sampled: +inf inside the finite region of an axis line");
            for (int i = first + 1; i > 0 && i < last; ++i) {
                double vm = values[base + stride * static_cast<std::size_t>(i - 1)].as_double();
                double v0 = values[base + stride * static_cast<std::size_t>(i)].as_double();
                double vp = values[base + stride * static_cast<std::size_t>(i + 1)].as_double();
                double scale = std::max({1.0, std::abs(vm), std::abs(v0), std::abs(vp)});
                if (vm + vp - 2 * v0 < -1e-8 * scale)
                    throw Error("Sampled: data not convex along an axis line");
            }
        }
    }
}

ExtReal eval_sampled(const FnNode& n, const Vec& x) {
    const Grid& grid = *n.grid;
    const auto& axes = grid.axes();
    const int dim = grid.dim();
    std::vector<int> cell(dim);
    std::vector<double> frac(dim);
    for (int d = 0; d < dim; ++d) {
        const auto& ax = axes[d];
        double t = (x[d] - ax.lo) / ax.step;
        if (t < -1e-9 || t > ax.count - 1 + 1e-9) return ExtReal::pos_inf();
        t = std::clamp(t, 0.0, static_cast<double>(ax.count - 1));
        int c = std::min(static_cast<int>(t), ax.count - 2);
        cell[d] = c;
        frac[d] = t - c;
    }
    std::vector<std::size_t> strides(dim, 1);
    for (int d = 1; d < dim; ++d)
        strides[d] = strides[d - 1] * static_cast<std::size_t>(axes[d - 1].count);
    // multilinear interpolation over the cell corners; any +inf corner makes
    // the whole cell +inf so the interpolant stays an over-approximation of dom
    double acc = 0;
    const int corners = 1 << dim;
    for (int c = 0; c < corners; ++c) {
        std::size_t idx = 0;
        double wgt = 1;
        for (int d = 0; d < dim; ++d) {
            int bit = (c >> d) & 1;
            idx += strides[d] * static_cast<std::size_t>(cell[d] + bit);
            wgt *= bit ? frac[d] : 1.0 - frac[d];
        }
        const ExtReal v = n.values[idx];
        if (!v.is_finite()) {
            if (wgt > 1e-12) return ExtReal::pos_inf();
            continue;
        }
        acc += wgt * v.as_double();
    }
    return ExtReal(acc);
}

}  // namespace

// --- factories ---------------------------------------------------------------

ConvexFn ConvexFn::affine(Vec a, double b) {
    auto n = make_node(FnKind::Affine, static_cast<int>(a.size()));
    if (a.size() < 1 || a.size() > 3) throw Error("ConvexFn: dim must be 1..3");
    n->a = std::move(a);
    n->b = b;
    return ConvexFn(n);
}

ConvexFn ConvexFn::quad_diag(Vec q, Vec shift) {
    if (q.size() != shift.size()) throw DimensionMismatch("quad_diag: q/shift dims");
    if (q.size() < 1 || q.size() > 3) throw Error("ConvexFn: dim must be 1..3");
    for (int i = 0; i < q.size(); ++i)
        if (q[i] < 0) throw Error("quad_diag: coefficients must be >= 0");
    auto n = make_node(FnKind::QuadDiag, static_cast<int>(q.size()));
    n->q = std::move(q);
    n->shift = std::move(shift);
    return ConvexFn(n);
}

ConvexFn ConvexFn::abs_norm(Vec w) {
    if (w.size() < 1 || w.size() > 3) throw Error("ConvexFn: dim must be 1..3");
    for (int i = 0; i < w.size(); ++i)
        if (!(w[i] > 0)) throw Error("abs_norm: weights must be > 0");
    auto n = make_node(FnKind::AbsNorm, static_cast<int>(w.size()));
    n->w = std::move(w);
    return ConvexFn(n);
}

ConvexFn ConvexFn::neg_sqrt() { return ConvexFn(make_node(FnKind::NegSqrt1D, 1)); }
ConvexFn ConvexFn::neg_recip() { return ConvexFn(make_node(FnKind::NegRecip1D, 1)); }

ConvexFn ConvexFn::indicator(ConvexSetDesc C) {
    auto n = make_node(FnKind::Indicator, C.dim());
    n->set = std::move(C);
    return ConvexFn(n);
}

ConvexFn ConvexFn::sum(ConvexFn f, ConvexFn g) {
    if (f.dim() != g.dim()) throw DimensionMismatch("sum: dims differ");
    auto n = make_node(FnKind::Sum, f.dim());
    n->f = std::move(f);
    n->g = std::move(g);
    return ConvexFn(n);
}

ConvexFn ConvexFn::scale(double lambda, ConvexFn f) {
    if (!(lambda > 0)) throw Error("scale: lambda must be > 0");
    auto n = make_node(FnKind::Scale, f.dim());
    n->lambda = lambda;
    n->f = std::move(f);
    return ConvexFn(n);
}

ConvexFn ConvexFn::separable(ConvexFn f1, ConvexFn f2) {
    int d = f1.dim() + f2.dim();
    if (d > 3) throw Error("separable: joint dim must be <= 3");
    auto n = make_node(FnKind::Separable, d);
    n->f = std::move(f1);
    n->g = std::move(f2);
    return ConvexFn(n);
}

ConvexFn ConvexFn::sampled(Grid grid, std::vector<ExtReal> values) {
    certify_sampled(grid, values);
    auto n = make_node(FnKind::Sampled, grid.dim());
    n->grid = std::move(grid);
    n->values = std::move(values);
    return ConvexFn(n);
}

int ConvexFn::dim() const { return node_->dim; }
FnKind ConvexFn::kind() const { return node_->kind; }

// --- evaluation --------------------------------------------------------------

ExtReal ConvexFn::operator()(const Vec& x) const {
    const FnNode& n = *node_;
    if (x.size() != n.dim) throw DimensionMismatch("evaluate: point dim mismatch");
    switch (n.kind) {
        case FnKind::Affine:
            return ExtReal(n.a.dot(x) + n.b);
        case FnKind::QuadDiag: {
            double s = 0;
            for (int i = 0; i < n.dim; ++i) {
                double d = x[i] - n.shift[i];
                s += n.q[i] * d * d;
            }
            return ExtReal(s);
        }
        case FnKind::AbsNorm: {
            double s = 0;
            for (int i = 0; i < n.dim; ++i) s += n.w[i] * std::abs(x[i]);
            return ExtReal(s);
        }
        case FnKind::NegSqrt1D:
            return x[0] >= 0 ? ExtReal(-std::sqrt(x[0])) : ExtReal::pos_inf();
        case FnKind::NegRecip1D:
            return x[0] < 0 ? ExtReal(-1.0 / (4.0 * x[0])) : ExtReal::pos_inf();
        case FnKind::Indicator:
            return n.set->contains(x) ? ExtReal(0.0) : ExtReal::pos_inf();
        case FnKind::Sum:
            return ext_add((*n.f)(x), (*n.g)(x));
        case FnKind::Scale:
            return ext_scale(n.lambda, (*n.f)(x));
        case FnKind::Separable: {
            Vec hx = x.head(n.f->dim());
            Vec tx = x.tail(n.g->dim());
            return ext_add((*n.f)(hx), (*n.g)(tx));
        }
        case FnKind::Sampled:
            return eval_sampled(n, x);
    }
    throw Error("evaluate: unreachable");
}

// --- effective domain --------------------------------------------------------

ConvexSetDesc ConvexFn::effective_domain() const {
    const FnNode& n = *node_;
    switch (n.kind) {
        case FnKind::Affine:
        case FnKind::QuadDiag:
        case FnKind::AbsNorm:
            return ConvexSetDesc::full_space(n.dim);
        case FnKind::NegSqrt1D:
            return ConvexSetDesc::interval(XInterval(0.0, ExtReal::pos_inf()));
        case FnKind::NegRecip1D:
            // closed hull of {x < 0}
            return ConvexSetDesc::interval(XInterval(ExtReal::neg_inf(), 0.0));
        case FnKind::Indicator:
            return *n.set;
        case FnKind::Sum:
            return ConvexSetDesc::intersection(
                {n.f->effective_domain(), n.g->effective_domain()});
        case FnKind::Scale:
            return n.f->effective_domain();
        case FnKind::Separable:
            return ConvexSetDesc::product(n.f->effective_domain(), n.g->effective_domain());
        case FnKind::Sampled: {
            // bounding box of the finite samples per axis
            const Grid& grid = *n.grid;
            std::vector<XInterval> axes;
            for (int d = 0; d < grid.dim(); ++d) {
                double lo = std::numeric_limits<double>::infinity();
                double hi = -std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    if (!n.values[i].is_finite()) continue;
                    Vec p = grid.point(i);
                    lo = std::min(lo, p[d]);
                    hi = std::max(hi, p[d]);
                }
                axes.emplace_back(ExtReal(lo), ExtReal(std::max(lo, hi)));
            }
            return grid.dim() == 1 ? ConvexSetDesc::interval(axes[0])
                                   : ConvexSetDesc::box(std::move(axes));
        }
    }
    throw Error("effective_domain: unreachable");
}

ConvexSetDesc epigraph(const ConvexFn& f) { return ConvexSetDesc::epigraph_of(f); }

// --- l.s.c. screen -----------------------------------------------------------

bool check_lsc_on_grid(const ConvexFn& f, const Grid& grid, const Tolerances& tol) {
    const int dim = grid.dim();
    const std::size_t total = grid.size();
    std::vector<ExtReal> vals(total);
    for (std::size_t i = 0; i < total; ++i) vals[i] = f(grid.point(i));

    const auto& axes = grid.axes();
    std::vector<std::size_t> strides(dim, 1);
    for (int d = 1; d < dim; ++d)
        strides[d] = strides[d - 1] * static_cast<std::size_t>(axes[d - 1].count);

    for (std::size_t i = 0; i < total; ++i) {
        if (!vals[i].is_finite()) continue;
        double best = std::numeric_limits<double>::infinity();
        double slope = 0;  // steepest finite slope among the neighbors' far edges
        std::size_t rem = i;
        std::vector<int> coord(dim);
        for (int d = 0; d < dim; ++d) {
            auto c = static_cast<std::size_t>(axes[d].count);
            coord[d] = static_cast<int>(rem % c);
            rem /= c;
        }
        for (int d = 0; d < dim; ++d) {
            for (int s : {-1, +1}) {
                int j = coord[d] + s;
                if (j < 0 || j >= axes[d].count) continue;
                std::size_t ni = i + strides[d] * static_cast<std::size_t>(s);
                if (!vals[ni].is_finite()) continue;
                best = std::min(best, vals[ni].as_double());
                int jj = coord[d] + 2 * s;
                if (jj >= 0 && jj < axes[d].count) {
                    std::size_t nni = i + strides[d] * static_cast<std::size_t>(2 * s);
                    if (vals[nni].is_finite())
                        slope = std::max(slope, std::abs(vals[nni].as_double() -
                                                         vals[ni].as_double()) /
                                                    axes[d].step);
                }
            }
        }
        if (!std::isfinite(best)) continue;  // isolated domain point
        double modulus = 3.0 * slope * grid.max_step() + tol.set_tol;
        if (vals[i].as_double() > best + modulus) return false;
    }
    return true;
}

}  // namespace cvxeps
