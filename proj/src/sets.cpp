#include "cvxeps/sets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "cvxeps/transforms.hpp"
#include "nodes.hpp"

namespace cvxeps {

namespace {

std::shared_ptr<SetNode> make_node(SetKind kind, int dim) {
    auto n = std::make_shared<SetNode>();
    n->kind = kind;
    n->dim = dim;
    if (dim < 1 || dim > 4) throw Error("ConvexSetDesc: dim must be 1..4");
    return n;
}

int sweep_cells(int dim) { return dim == 1 ? 2048 : (dim == 2 ? 120 : 40); }

/// Grid points of [-R, R]^dim lying in S, rebuilt when the radius changes.
const std::vector<Vec>& window_members(const SetNode& node, const ConvexSetDesc& self,
                                       double radius) {
    if (!node.member_cache || node.cache_radius != radius) {
        auto pts = std::make_shared<std::vector<Vec>>();
        Grid g = Grid::uniform(node.dim, -radius, radius, sweep_cells(node.dim));
        for (std::size_t i = 0; i < g.size(); ++i) {
            Vec p = g.point(i);
            if (self.contains(p)) pts->push_back(std::move(p));
        }
        node.member_cache = std::move(pts);
        node.cache_radius = radius;
    }
    return *node.member_cache;
}

/// Finite samples (x, f(x)) of an epigraph's underlying function on the window.
const std::vector<std::pair<Vec, double>>& epi_samples(const SetNode& node, double radius) {
    if (!node.graph_cache || node.cache_radius != radius) {
        auto pts = std::make_shared<std::vector<std::pair<Vec, double>>>();
        const ConvexFn& f = *node.fn;
        Grid g = Grid::uniform(f.dim(), -radius, radius, sweep_cells(f.dim()));
        for (std::size_t i = 0; i < g.size(); ++i) {
            Vec p = g.point(i);
            ExtReal v = f(p);
            if (v.is_finite()) pts->emplace_back(std::move(p), v.as_double());
        }
        node.graph_cache = std::move(pts);
        node.cache_radius = radius;
    }
    return *node.graph_cache;
}

bool near_window_boundary(const Vec& p, double radius, double step) {
    for (int i = 0; i < p.size(); ++i)
        if (std::abs(p[i]) >= radius - 0.5 * step) return true;
    return false;
}

ExtReal interval_support(const XInterval& iv, double d) {
    if (iv.is_empty()) return ExtReal::neg_inf();
    if (d > 0) return ext_scale(d, iv.hi());
    if (d < 0) return ext_scale(-d, ext_neg(iv.lo()));
    return ExtReal(0.0);
}

/// Exact conic-hull membership for dim <= 2: is d a nonnegative combination of
/// the given generators?
bool in_conic_hull(const Vec& d, const std::vector<Vec>& gens) {
    const double nd = d.norm();
    if (nd <= 1e-12) return true;
    const int dim = static_cast<int>(d.size());
    if (dim == 1) {
        for (const auto& g : gens)
            if (std::abs(g[0]) > 1e-12 && g[0] * d[0] > 0) return true;
        return false;
    }
    // single generators
    for (const auto& g : gens) {
        double ng = g.norm();
        if (ng <= 1e-12) continue;
        double cross = g[0] * d[1] - g[1] * d[0];
        if (std::abs(cross) <= 1e-9 * ng * nd && g.dot(d) > 0) return true;
    }
    // pairs
    for (std::size_t i = 0; i < gens.size(); ++i) {
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            const Vec& u = gens[i];
            const Vec& v = gens[j];
            double det = u[0] * v[1] - u[1] * v[0];
            if (std::abs(det) <= 1e-12 * std::max(1.0, u.norm() * v.norm())) continue;
            double l1 = (d[0] * v[1] - d[1] * v[0]) / det;
            double l2 = (u[0] * d[1] - u[1] * d[0]) / det;
            if (l1 >= -1e-9 && l2 >= -1e-9) return true;
        }
    }
    return false;
}

/// d in C0 for a polyhedral cone C = {x : <a_i, x> <= 0}: C0 is the conic
/// hull of the normals (exact in dim <= 2, grid sweep in dim 3).
bool cone_polar_contains(const SetNode& node, const ConvexSetDesc& self, const Vec& d,
                         const Tolerances& tol) {
    if (node.dim <= 2) {
        std::vector<Vec> gens;
        gens.reserve(node.rows.size());
        for (const auto& r : node.rows) gens.push_back(r.first);
        return in_conic_hull(d, gens);
    }
    for (const Vec& x : window_members(node, self, tol.window_radius))
        if (d.dot(x) > tol.set_tol * std::max(1.0, d.norm())) return false;
    return true;
}

}  // namespace

// --- factories ---------------------------------------------------------------

ConvexSetDesc ConvexSetDesc::interval(XInterval iv) {
    auto n = make_node(SetKind::Interval, 1);
    n->axes = {std::move(iv)};
    return ConvexSetDesc(n);
}

ConvexSetDesc ConvexSetDesc::box(std::vector<XInterval> axes) {
    auto n = make_node(SetKind::Box, static_cast<int>(axes.size()));
    n->axes = std::move(axes);
    return ConvexSetDesc(n);
}

ConvexSetDesc ConvexSetDesc::ball(Vec center, double radius) {
    if (!(radius >= 0)) throw Error("ball: radius must be >= 0");
    auto n = make_node(SetKind::Ball, static_cast<int>(center.size()));
    n->center = std::move(center);
    n->radius = radius;
    return ConvexSetDesc(n);
}

ConvexSetDesc ConvexSetDesc::halfspaces(int dim, std::vector<std::pair<Vec, double>> rows) {
    auto n = make_node(SetKind::HalfspaceIntersection, dim);
    for (const auto& r : rows)
        if (r.first.size() != dim) throw DimensionMismatch("halfspaces: row dim");
    n->rows = std::move(rows);
    return ConvexSetDesc(n);
}

ConvexSetDesc ConvexSetDesc::cone(int dim, std::vector<Vec> normals) {
    auto n = make_node(SetKind::Cone, dim);
    for (auto& a : normals) {
        if (a.size() != dim) throw DimensionMismatch("cone: normal dim");
        n->rows.emplace_back(std::move(a), 0.0);
    }
    return ConvexSetDesc(n);
}

ConvexSetDesc ConvexSetDesc::singleton(Vec p) {
    auto n = make_node(SetKind::Singleton, static_cast<int>(p.size()));
    n->point = std::move(p);
    return ConvexSetDesc(n);
}

ConvexSetDesc ConvexSetDesc::full_space(int dim) {
    return ConvexSetDesc(make_node(SetKind::FullSpace, dim));
}

ConvexSetDesc ConvexSetDesc::product(ConvexSetDesc a, ConvexSetDesc b) {
    auto n = make_node(SetKind::Product, a.dim() + b.dim());
    n->a = std::move(a);
    n->b = std::move(b);
    return ConvexSetDesc(n);
}

ConvexSetDesc ConvexSetDesc::translate(ConvexSetDesc a, Vec v) {
    if (a.dim() != v.size()) throw DimensionMismatch("translate: offset dim");
    auto n = make_node(SetKind::Translate, a.dim());
    n->inner = std::move(a);
    n->point = std::move(v);
    return ConvexSetDesc(n);
}

ConvexSetDesc ConvexSetDesc::intersection(std::vector<ConvexSetDesc> parts) {
    if (parts.empty()) throw Error("intersection: needs at least one part");
    int d = parts.front().dim();
    for (const auto& p : parts)
        if (p.dim() != d) throw DimensionMismatch("intersection: dims differ");
    auto n = make_node(SetKind::Intersection, d);
    n->parts = std::move(parts);
    return ConvexSetDesc(n);
}

ConvexSetDesc ConvexSetDesc::epigraph_of(ConvexFn f) {
    auto n = make_node(SetKind::Epigraph, f.dim() + 1);
    n->fn = std::move(f);
    return ConvexSetDesc(n);
}

ConvexSetDesc ConvexSetDesc::graph_of(ConvexSetDesc inner, int m, int k) {
    if (inner.dim() != m + k) throw DimensionMismatch("graph_of: m + k != dim");
    auto n = make_node(SetKind::GraphOfG, m + k);
    n->inner = std::move(inner);
    n->m = m;
    n->k = k;
    return ConvexSetDesc(n);
}

int ConvexSetDesc::dim() const { return node_->dim; }
SetKind ConvexSetDesc::kind() const { return node_->kind; }

// --- membership --------------------------------------------------------------

bool ConvexSetDesc::contains(const Vec& x) const {
    const SetNode& n = *node_;
    if (x.size() != n.dim) throw DimensionMismatch("contains: point dim mismatch");
    switch (n.kind) {
        case SetKind::Interval:
            return n.axes[0].contains(x[0]);
        case SetKind::Box:
            for (int i = 0; i < n.dim; ++i)
                if (!n.axes[i].contains(x[i])) return false;
            return true;
        case SetKind::Ball:
            return (x - n.center).norm() <= n.radius + 1e-12;
        case SetKind::HalfspaceIntersection:
        case SetKind::Cone:
            for (const auto& r : n.rows)
                if (r.first.dot(x) > r.second + 1e-12 * std::max(1.0, x.norm())) return false;
            return true;
        case SetKind::Singleton:
            return (x - n.point).lpNorm<Eigen::Infinity>() <= 1e-9;
        case SetKind::FullSpace:
            return true;
        case SetKind::Product:
            return n.a->contains(x.head(n.a->dim())) && n.b->contains(x.tail(n.b->dim()));
        case SetKind::Translate:
            return n.inner->contains(x - n.point);
        case SetKind::Intersection:
            for (const auto& p : n.parts)
                if (!p.contains(x)) return false;
            return true;
        case SetKind::Epigraph: {
            ExtReal v = (*n.fn)(x.head(n.dim - 1));
            return v.is_finite() && x[n.dim - 1] >= v.as_double() - 1e-12;
        }
        case SetKind::GraphOfG:
            return n.inner->contains(x);
    }
    throw Error("contains: unreachable");
}

// --- support function --------------------------------------------------------

SupportValue ConvexSetDesc::support(const Vec& d, const Tolerances& tol) const {
    const SetNode& n = *node_;
    if (d.size() != n.dim) throw DimensionMismatch("support: direction dim mismatch");
    switch (n.kind) {
        case SetKind::Interval:
            return {interval_support(n.axes[0], d[0]), false};
        case SetKind::Box: {
            ExtReal s(0.0);
            for (int i = 0; i < n.dim; ++i) s = ext_add(s, interval_support(n.axes[i], d[i]));
            return {s, false};
        }
        case SetKind::Ball:
            return {ExtReal(n.center.dot(d) + n.radius * d.norm()), false};
        case SetKind::Singleton:
            return {ExtReal(n.point.dot(d)), false};
        case SetKind::FullSpace:
            return {d.norm() <= 1e-12 ? ExtReal(0.0) : ExtReal::pos_inf(), false};
        case SetKind::Product: {
            SupportValue sa = n.a->support(d.head(n.a->dim()), tol);
            SupportValue sb = n.b->support(d.tail(n.b->dim()), tol);
            return {ext_add(sa.value, sb.value), sa.window_flagged || sb.window_flagged};
        }
        case SetKind::Translate: {
            SupportValue si = n.inner->support(d, tol);
            if (!si.value.is_finite()) return si;
            return {ExtReal(si.value.as_double() + n.point.dot(d)), si.window_flagged};
        }
        case SetKind::Cone:
            // sup over a cone with apex 0 is 0 on the polar and +inf elsewhere
            return {cone_polar_contains(n, *this, d, tol) ? ExtReal(0.0)
                                                          : ExtReal::pos_inf(),
                    false};
        case SetKind::GraphOfG:
            return n.inner->support(d, tol);
        case SetKind::Epigraph: {
            const double da = d[n.dim - 1];
            if (da > 1e-12) return {ExtReal::pos_inf(), false};
            const Vec dx = d.head(n.dim - 1);
            if (da < -1e-12) {
                // Exact route: sup over the epigraph of <dx, x> + da * alpha
                // with alpha >= f(x) is |da| * f*(dx / |da|).
                ExtReal c = conjugate_eval(*n.fn, Vec(dx / -da), tol);
                if (!c.is_finite()) return {c, false};
                return {ExtReal(-da * c.as_double()), false};
            }
            const auto& samples = epi_samples(n, tol.window_radius);
            if (samples.empty()) return {ExtReal::neg_inf(), true};
            double best = -std::numeric_limits<double>::infinity();
            const Vec* argmax = nullptr;
            const double a_coeff = da < -1e-12 ? da : 0.0;
            for (const auto& [x, fx] : samples) {
                double v = dx.dot(x) + a_coeff * fx;
                if (v > best) {
                    best = v;
                    argmax = &x;
                }
            }
            double step = 2 * tol.window_radius / sweep_cells(n.dim - 1);
            bool flag = argmax && near_window_boundary(*argmax, tol.window_radius, step);
            return {ExtReal(best), flag};
        }
        case SetKind::HalfspaceIntersection:
        case SetKind::Intersection: {
            const auto& members = window_members(n, *this, tol.window_radius);
            if (members.empty()) return {ExtReal::neg_inf(), true};
            double best = -std::numeric_limits<double>::infinity();
            const Vec* argmax = nullptr;
            for (const Vec& x : members) {
                double v = d.dot(x);
                if (v > best) {
                    best = v;
                    argmax = &x;
                }
            }
            double step = 2 * tol.window_radius / sweep_cells(n.dim);
            bool flag = argmax && near_window_boundary(*argmax, tol.window_radius, step);
            return {ExtReal(best), flag};
        }
    }
    throw Error("support: unreachable");
}

// --- box view ----------------------------------------------------------------

std::optional<std::vector<XInterval>> ConvexSetDesc::as_box() const {
    const SetNode& n = *node_;
    switch (n.kind) {
        case SetKind::Interval:
        case SetKind::Box:
            return n.axes;
        case SetKind::FullSpace:
            return std::vector<XInterval>(static_cast<std::size_t>(n.dim), XInterval::whole());
        case SetKind::Singleton: {
            std::vector<XInterval> axes;
            for (int i = 0; i < n.dim; ++i) axes.push_back(XInterval::point(n.point[i]));
            return axes;
        }
        case SetKind::Product: {
            auto ba = n.a->as_box();
            auto bb = n.b->as_box();
            if (!ba || !bb) return std::nullopt;
            ba->insert(ba->end(), bb->begin(), bb->end());
            return ba;
        }
        case SetKind::Translate: {
            auto bi = n.inner->as_box();
            if (!bi) return std::nullopt;
            for (int i = 0; i < n.dim; ++i) {
                const XInterval& iv = (*bi)[i];
                if (iv.is_empty()) continue;
                (*bi)[i] = XInterval(ext_add(iv.lo(), ExtReal(n.point[i])),
                                     ext_add(iv.hi(), ExtReal(n.point[i])));
            }
            return bi;
        }
        case SetKind::Intersection: {
            auto acc = n.parts.front().as_box();
            if (!acc) return std::nullopt;
            for (std::size_t i = 1; i < n.parts.size(); ++i) {
                auto bi = n.parts[i].as_box();
                if (!bi) return std::nullopt;
                for (int d = 0; d < n.dim; ++d) (*acc)[d] = (*acc)[d].intersect((*bi)[d]);
            }
            return acc;
        }
        default:
            return std::nullopt;
    }
}

// --- DualSet -----------------------------------------------------------------

XInterval DualSet::interval_from_membership(const std::function<bool(const Vec&)>& m,
                                            const Tolerances& tol) {
    const double R = tol.window_radius;
    const int N = 1024;
    const double step = 2 * R / N;
    int first = -1, last = -1;
    for (int i = 0; i <= N; ++i) {
        if (m(vec1(-R + step * i))) {
            if (first < 0) first = i;
            last = i;
        }
    }
    if (first < 0) return XInterval::empty();

    auto bisect = [&](double inside, double outside) {
        for (int it = 0; it < 50; ++it) {
            double mid = 0.5 * (inside + outside);
            (m(vec1(mid)) ? inside : outside) = mid;
        }
        return inside;
    };
    ExtReal lo = first == 0 ? ExtReal::neg_inf()
                            : ExtReal(bisect(-R + step * first, -R + step * (first - 1)));
    ExtReal hi = last == N ? ExtReal::pos_inf()
                           : ExtReal(bisect(-R + step * last, -R + step * (last + 1)));
    return XInterval(lo, hi);
}

DualSet DualSet::from_membership(int dim, std::function<bool(const Vec&)> m,
                                 const Tolerances& tol) {
    DualSet s;
    s.dim = dim;
    s.member = std::move(m);
    if (dim == 1) s.interval_1d = interval_from_membership(s.member, tol);
    return s;
}

namespace {

struct Raster {
    int dim;
    int cells;
    double radius;
    std::vector<std::uint8_t> bits;

    double step() const { return 2 * radius / cells; }
    std::size_t size() const {
        std::size_t n = 1;
        for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(cells + 1);
        return n;
    }
    Vec point(std::size_t idx) const {
        Vec p(dim);
        auto c = static_cast<std::size_t>(cells + 1);
        for (int d = 0; d < dim; ++d) {
            p[d] = -radius + step() * static_cast<double>(idx % c);
            idx /= c;
        }
        return p;
    }
};

Raster rasterize(const DualSet& s, double radius, int cells) {
    Raster r{s.dim, cells, radius, {}};
    r.bits.resize(r.size());
    for (std::size_t i = 0; i < r.bits.size(); ++i) r.bits[i] = s.member(r.point(i)) ? 1 : 0;
    return r;
}

Raster dilate(const Raster& r) {
    Raster out = r;
    auto c = static_cast<std::size_t>(r.cells + 1);
    for (std::size_t i = 0; i < r.bits.size(); ++i) {
        if (r.bits[i]) continue;
        std::size_t rem = i;
        int coord[3] = {0, 0, 0};
        for (int d = 0; d < r.dim; ++d) {
            coord[d] = static_cast<int>(rem % c);
            rem /= c;
        }
        bool hit = false;
        int span = r.dim == 1 ? 3 : (r.dim == 2 ? 9 : 27);
        for (int nb = 0; nb < span && !hit; ++nb) {
            std::size_t j = 0, mult = 1;
            bool ok = true;
            int t = nb;
            for (int d = 0; d < r.dim; ++d) {
                int off = t % 3 - 1;
                t /= 3;
                int cc = coord[d] + off;
                if (cc < 0 || cc > r.cells) {
                    ok = false;
                    break;
                }
                j += mult * static_cast<std::size_t>(cc);
                mult *= c;
            }
            if (ok && r.bits[j]) hit = true;
        }
        out.bits[i] = hit ? 1 : 0;
    }
    return out;
}

XInterval view_interval(const DualSet& s, const Tolerances& tol) {
    if (s.interval_1d) return *s.interval_1d;
    return DualSet::interval_from_membership(s.member, tol);
}

}  // namespace

bool dual_equal_window(const DualSet& a, const DualSet& b, const Tolerances& tol,
                       int cells_per_axis) {
    if (a.dim != b.dim) return false;
    if (a.dim == 1)
        return interval_hausdorff_on_window(view_interval(a, tol), view_interval(b, tol), tol);
    Raster ra = rasterize(a, tol.window_radius, cells_per_axis);
    Raster rb = rasterize(b, tol.window_radius, cells_per_axis);
    Raster da = dilate(ra);
    Raster db = dilate(rb);
    for (std::size_t i = 0; i < ra.bits.size(); ++i) {
        if (ra.bits[i] && !db.bits[i]) return false;
        if (rb.bits[i] && !da.bits[i]) return false;
    }
    return true;
}

double dual_window_error(const DualSet& a, const DualSet& b, const Tolerances& tol,
                         int cells_per_axis) {
    if (a.dim != b.dim) return std::numeric_limits<double>::infinity();
    if (a.dim == 1)
        return interval_hausdorff_error(view_interval(a, tol), view_interval(b, tol), tol);
    Raster ra = rasterize(a, tol.window_radius, cells_per_axis);
    Raster rb = rasterize(b, tol.window_radius, cells_per_axis);
    std::vector<Vec> ma, mb;
    for (std::size_t i = 0; i < ra.bits.size(); ++i) {
        if (ra.bits[i]) ma.push_back(ra.point(i));
        if (rb.bits[i]) mb.push_back(rb.point(i));
    }
    if (ma.empty() && mb.empty()) return 0.0;
    if (ma.empty() || mb.empty()) return std::numeric_limits<double>::infinity();
    auto one_sided = [](const std::vector<Vec>& from, const std::vector<Vec>& to) {
        double worst = 0;
        for (const Vec& p : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec& q : to) best = std::min(best, (p - q).lpNorm<Eigen::Infinity>());
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(ma, mb), one_sided(mb, ma));
}

// --- dual-set constructions --------------------------------------------------

namespace {

/// Probe a handful of directions to surface window flags from sweep supports.
bool probe_flags(const ConvexSetDesc& S, const Tolerances& tol) {
    bool flagged = false;
    int dirs = std::min(tol.support_dirs, 16);
    for (int i = 0; i < dirs && !flagged; ++i) {
        Vec d(S.dim());
        for (int j = 0; j < S.dim(); ++j)
            d[j] = std::cos(2 * M_PI * i / dirs + j * 1.1);
        flagged = S.support(d, tol).window_flagged;
    }
    return flagged;
}

}  // namespace

DualSet polar(const ConvexSetDesc& A, const Tolerances& tol) {
    const double slack = 0.5 * tol.set_tol;
    auto member = [A, tol, slack](const Vec& d) {
        SupportValue h = A.support(d, tol);
        return h.value <= ExtReal(1.0 + slack);
    };
    DualSet s = DualSet::from_membership(A.dim(), member, tol);
    s.window_flagged = probe_flags(A, tol);
    return s;
}

DualSet eps_normal_set(const ConvexSetDesc& C, const Vec& x_bar, double eps,
                       const Tolerances& tol) {
    if (!C.contains(x_bar)) throw Error("eps_normal_set: x_bar not in C");
    if (eps < 0) throw Error("eps_normal_set: eps must be >= 0");
    const double slack = 0.5 * tol.set_tol;
    auto member = [C, x_bar, eps, tol, slack](const Vec& d) {
        SupportValue h = C.support(d, tol);
        if (h.value.is_pos_inf()) return false;
        if (h.value.is_neg_inf()) return true;
        return h.value.as_double() - d.dot(x_bar) <= eps + slack;
    };
    DualSet s = DualSet::from_membership(C.dim(), member, tol);
    s.window_flagged = probe_flags(C, tol);
    return s;
}

DualSet normal_cone_limit(const ConvexSetDesc& C, const Vec& x_bar, double eps,
                          const Tolerances& tol) {
    if (!C.contains(x_bar)) throw Error("normal_cone_limit: x_bar not in C");
    const double slack = 0.5 * tol.set_tol;
    // x* in eta N_eps iff h_{C - x_bar}(x*) <= eta (eps + slack); the ladder
    // intersection is the test at the smallest eta
    double eta_min = tol.eta_ladder.back();
    auto member = [C, x_bar, eps, tol, slack, eta_min](const Vec& d) {
        SupportValue h = C.support(d, tol);
        if (h.value.is_pos_inf()) return false;
        if (h.value.is_neg_inf()) return true;
        return h.value.as_double() - d.dot(x_bar) <= eta_min * (eps + slack) + slack * 1e-3;
    };
    DualSet s = DualSet::from_membership(C.dim(), member, tol);
    s.window_flagged = probe_flags(C, tol);
    return s;
}

DualSet cone_eps_normals(const ConvexSetDesc& C, const Vec& x_bar, double eps,
                         const Tolerances& tol) {
    if (C.kind() != SetKind::Cone) throw Error("cone_eps_normals: set is not a Cone node");
    if (!C.contains(x_bar)) throw Error("cone_eps_normals: x_bar not in C");
    if (eps < 0) throw Error("cone_eps_normals: eps must be >= 0");
    const double slack = 0.5 * tol.set_tol;
    auto member = [C, x_bar, eps, tol, slack](const Vec& d) {
        const SetNode& n = C.node();
        if (!cone_polar_contains(n, C, d, tol)) return false;
        return d.dot(x_bar) >= -eps - slack;
    };
    return DualSet::from_membership(C.dim(), member, tol);
}

DualSet minkowski_sum(const DualSet& a, const DualSet& b, const Grid& split_grid,
                      const Tolerances& tol) {
    if (a.dim != b.dim) throw DimensionMismatch("minkowski_sum: dims differ");
    auto ma = a.member;
    auto mb = b.member;
    Grid g = split_grid;
    auto member = [ma, mb, g](const Vec& z) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            Vec u = g.point(i);
            if (ma(u) && mb(z - u)) return true;
        }
        return false;
    };
    DualSet s = DualSet::from_membership(a.dim, member, tol);
    s.window_flagged = a.window_flagged || b.window_flagged;
    return s;
}

DualSet scale_dual(double lambda, const DualSet& a, const Tolerances& tol) {
    if (!(lambda > 0)) throw Error("scale_dual: lambda must be > 0");
    auto ma = a.member;
    auto member = [ma, lambda](const Vec& z) { return ma(z / lambda); };
    DualSet s = DualSet::from_membership(a.dim, member, tol);
    // A sharp source interval stays sharp under scaling; prefer it over the
    // slack-widened membership rescan.
    if (a.dim == 1 && a.interval_1d) {
        if (a.interval_1d->is_empty())
            s.interval_1d = XInterval::empty();
        else
            s.interval_1d = XInterval(ext_scale(lambda, a.interval_1d->lo()),
                                      ext_scale(lambda, a.interval_1d->hi()));
    }
    s.window_flagged = a.window_flagged;
    return s;
}

DualSet intersect_dual(std::vector<DualSet> parts, const Tolerances& tol) {
    if (parts.empty()) throw Error("intersect_dual: empty");
    int dim = parts.front().dim;
    bool flagged = false;
    for (const auto& p : parts) {
        if (p.dim != dim) throw DimensionMismatch("intersect_dual: dims differ");
        flagged = flagged || p.window_flagged;
    }
    auto member = [parts](const Vec& z) {
        for (const auto& p : parts)
            if (!p.member(z)) return false;
        return true;
    };
    DualSet s = DualSet::from_membership(dim, member, tol);
    s.window_flagged = flagged;
    return s;
}

}  // namespace cvxeps
