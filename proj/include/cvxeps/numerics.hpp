#pragma once

#include <Eigen/Core>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cvxeps/errors.hpp"

namespace cvxeps {

using Vec = Eigen::VectorXd;

inline Vec vec1(double x) {
    Vec v(1);
    v << x;
    return v;
}

inline Vec vec2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

/// Extended real in [-inf, +inf]. Backed by an IEEE double whose infinities
/// are the two infinite elements; NaN is never stored. Addition of opposite
/// infinities is a reported error, never a silent NaN.
class ExtReal {
public:
    ExtReal() : v_(0.0) {}
    ExtReal(double v) : v_(v) { assert(!std::isnan(v)); }  // NOLINT: implicit by design

    static ExtReal pos_inf() { return ExtReal(std::numeric_limits<double>::infinity()); }
    static ExtReal neg_inf() { return ExtReal(-std::numeric_limits<double>::infinity()); }

    bool is_finite() const { return std::isfinite(v_); }
    bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
    bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }

    /// Raw value; infinities map to IEEE infinities, so comparisons stay total.
    double as_double() const { return v_; }

    friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
    friend bool operator!=(ExtReal a, ExtReal b) { return a.v_ != b.v_; }
    friend bool operator<(ExtReal a, ExtReal b) { return a.v_ < b.v_; }
    friend bool operator<=(ExtReal a, ExtReal b) { return a.v_ <= b.v_; }
    friend bool operator>(ExtReal a, ExtReal b) { return a.v_ > b.v_; }
    friend bool operator>=(ExtReal a, ExtReal b) { return a.v_ >= b.v_; }

private:
    double v_;
};

/// Guarded extended addition. Throws OppositeInfinities on (+inf) + (-inf).
inline ExtReal ext_add(ExtReal a, ExtReal b) {
    if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
        throw OppositeInfinities{};
    return ExtReal(a.as_double() + b.as_double());
}

/// lambda * a for lambda > 0; 0 * (+-inf) is defined as 0 (indicator scaling
/// convention), used only where a nonnegative lambda can degenerate to 0.
inline ExtReal ext_scale(double lambda, ExtReal a) {
    if (lambda == 0.0) return ExtReal(0.0);
    return ExtReal(lambda * a.as_double());
}

inline ExtReal ext_neg(ExtReal a) { return ExtReal(-a.as_double()); }

/// Closed interval with possibly infinite endpoints, or the distinguished
/// EMPTY value. [lo, hi] with lo <= hi; +-inf endpoints mean unbounded rays.
class XInterval {
public:
    XInterval(ExtReal lo, ExtReal hi) : lo_(lo), hi_(hi), empty_(false) {
        if (lo > hi) throw Error("XInterval: lo > hi");
    }
    static XInterval empty() { return XInterval(); }
    static XInterval whole() { return XInterval(ExtReal::neg_inf(), ExtReal::pos_inf()); }
    static XInterval point(double x) { return XInterval(x, x); }

    bool is_empty() const { return empty_; }
    ExtReal lo() const { assert(!empty_); return lo_; }
    ExtReal hi() const { assert(!empty_); return hi_; }

    bool contains(double x) const {
        return !empty_ && lo_ <= ExtReal(x) && ExtReal(x) <= hi_;
    }

    XInterval clipped(double radius) const {
        if (empty_) return empty();
        double lo = std::max(lo_.as_double(), -radius);
        double hi = std::min(hi_.as_double(), radius);
        if (lo > hi) return empty();
        return XInterval(lo, hi);
    }

    XInterval intersect(const XInterval& o) const {
        if (empty_ || o.empty_) return empty();
        ExtReal lo = std::max(lo_.as_double(), o.lo_.as_double());
        ExtReal hi = std::min(hi_.as_double(), o.hi_.as_double());
        if (lo > hi) return empty();
        return XInterval(lo, hi);
    }

    /// a - b in the Minkowski sense, {x - y : x in a, y in b}.
    static XInterval minkowski_diff(const XInterval& a, const XInterval& b);

private:
    XInterval() : lo_(0), hi_(0), empty_(true) {}
    ExtReal lo_, hi_;
    bool empty_;
};

inline XInterval XInterval::minkowski_diff(const XInterval& a, const XInterval& b) {
    if (a.is_empty() || b.is_empty()) return XInterval::empty();
    double lo = a.lo().as_double() - b.hi().as_double();
    double hi = a.hi().as_double() - b.lo().as_double();
    // inf - inf along the same ray stretches to the whole line
    if (std::isnan(lo)) lo = -std::numeric_limits<double>::infinity();
    if (std::isnan(hi)) hi = std::numeric_limits<double>::infinity();
    return XInterval(lo, hi);
}

struct GridAxis {
    double lo;
    double hi;
    double step;
    int count;  // number of points, (hi - lo) / step + 1
};

/// Uniform axis-aligned grid in dimension <= 3. (hi - lo) / step must be a
/// positive integer per axis so points enumerate exactly.
class Grid {
public:
    Grid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
        if (axes_.empty() || axes_.size() > 3) throw Error("Grid: dim must be 1..3");
        for (auto& ax : axes_) {
            if (!(ax.step > 0) || !(ax.hi > ax.lo)) throw Error("Grid: bad axis");
            double n = (ax.hi - ax.lo) / ax.step;
            double rn = std::round(n);
            if (rn < 1 || std::abs(n - rn) > 1e-9 * std::max(1.0, rn))
                throw Error("Grid: (hi - lo) / step is not a positive integer");
            ax.count = static_cast<int>(rn) + 1;
        }
    }

    static Grid uniform(int dim, double lo, double hi, int cells) {
        std::vector<GridAxis> axes(dim, GridAxis{lo, hi, (hi - lo) / cells, cells + 1});
        return Grid(std::move(axes));
    }

    int dim() const { return static_cast<int>(axes_.size()); }
    const std::vector<GridAxis>& axes() const { return axes_; }

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& ax : axes_) n *= static_cast<std::size_t>(ax.count);
        return n;
    }

    Vec point(std::size_t idx) const {
        Vec p(dim());
        for (int d = 0; d < dim(); ++d) {
            auto c = static_cast<std::size_t>(axes_[d].count);
            p[d] = axes_[d].lo + axes_[d].step * static_cast<double>(idx % c);
            idx /= c;
        }
        return p;
    }

    double max_step() const {
        double s = 0;
        for (const auto& ax : axes_) s = std::max(s, ax.step);
        return s;
    }

    /// True when the point lies on the boundary of the grid box (any axis at
    /// its first or last sample, up to half a step).
    bool on_boundary(const Vec& p) const {
        for (int d = 0; d < dim(); ++d) {
            const auto& ax = axes_[d];
            if (p[d] <= ax.lo + 0.5 * ax.step || p[d] >= ax.hi - 0.5 * ax.step) return true;
        }
        return false;
    }

private:
    std::vector<GridAxis> axes_;
};

/// Global tolerance/window policy. All unbounded-set comparisons happen after
/// clipping to [-R, R]^n; the eta ladder realizes intersections over eta > 0.
struct Tolerances {
    double set_tol = 5e-3;
    double window_radius = 10.0;
    std::vector<double> eta_ladder = {1.0, 1e-1, 1e-2, 1e-3, 1e-4};
    int gamma_splits = 33;
    int support_dirs = 64;

    void validate() const {
        if (!(set_tol > 0) || !(window_radius > 0)) throw Error("Tolerances: positivity");
        if (gamma_splits < 3) throw Error("Tolerances: gamma_splits >= 3");
        if (support_dirs < 8) throw Error("Tolerances: support_dirs >= 8");
        for (std::size_t i = 0; i < eta_ladder.size(); ++i) {
            if (!(eta_ladder[i] > 0)) throw Error("Tolerances: eta_ladder positive");
            if (i > 0 && !(eta_ladder[i] < eta_ladder[i - 1]))
                throw Error("Tolerances: eta_ladder strictly decreasing");
        }
    }
};

/// Conjugate comparison tolerance for a given sampling resolution. The sweep
/// misses the true maximizer by at most one cell; the sqrt term absorbs
/// square-root-type kinks at domain boundaries.
inline double conj_tol_for_step(double step) { return 2.0 * std::sqrt(step) + 2.0 * step; }

/// Hausdorff-on-window equality of intervals: clip both to [-R, R] and compare
/// endpoints. EMPTY equals only EMPTY.
inline bool interval_hausdorff_on_window(const XInterval& a, const XInterval& b,
                                         const Tolerances& tol) {
    XInterval ca = a.clipped(tol.window_radius);
    XInterval cb = b.clipped(tol.window_radius);
    if (ca.is_empty() || cb.is_empty()) return ca.is_empty() == cb.is_empty();
    return std::abs(ca.lo().as_double() - cb.lo().as_double()) < tol.set_tol &&
           std::abs(ca.hi().as_double() - cb.hi().as_double()) < tol.set_tol;
}

/// Hausdorff distance of the clipped intervals (infinity when exactly one is
/// empty on the window, 0 when both are).
inline double interval_hausdorff_error(const XInterval& a, const XInterval& b,
                                       const Tolerances& tol) {
    XInterval ca = a.clipped(tol.window_radius);
    XInterval cb = b.clipped(tol.window_radius);
    if (ca.is_empty() && cb.is_empty()) return 0.0;
    if (ca.is_empty() || cb.is_empty()) return std::numeric_limits<double>::infinity();
    return std::max(std::abs(ca.lo().as_double() - cb.lo().as_double()),
                    std::abs(ca.hi().as_double() - cb.hi().as_double()));
}

}  // namespace cvxeps
