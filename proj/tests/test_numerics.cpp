#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cvxeps/numerics.hpp"

using namespace cvxeps;

TEST_CASE("ExtReal total order and infinity queries") {
    ExtReal a(1.5), p = ExtReal::pos_inf(), n = ExtReal::neg_inf();
    CHECK(a.is_finite());
    CHECK_FALSE(p.is_finite());
    CHECK(p.is_pos_inf());
    CHECK(n.is_neg_inf());
    CHECK(n < a);
    CHECK(a < p);
    CHECK(n < p);
    CHECK(a == ExtReal(1.5));
    CHECK(a.as_double() == doctest::Approx(1.5));
}

TEST_CASE("ext_add guards opposite infinities") {
    CHECK(ext_add(ExtReal(2.0), ExtReal(3.0)) == ExtReal(5.0));
    CHECK(ext_add(ExtReal::pos_inf(), ExtReal(3.0)).is_pos_inf());
    CHECK(ext_add(ExtReal::neg_inf(), ExtReal::neg_inf()).is_neg_inf());
    CHECK_THROWS_AS(ext_add(ExtReal::pos_inf(), ExtReal::neg_inf()), OppositeInfinities);
    CHECK_THROWS_AS(ext_add(ExtReal::neg_inf(), ExtReal::pos_inf()), OppositeInfinities);
}

TEST_CASE("ext_scale uses the 0 * inf = 0 convention") {
    CHECK(ext_scale(0.0, ExtReal::pos_inf()) == ExtReal(0.0));
    CHECK(ext_scale(0.0, ExtReal::neg_inf()) == ExtReal(0.0));
    CHECK(ext_scale(2.0, ExtReal(3.0)) == ExtReal(6.0));
    CHECK(ext_scale(2.0, ExtReal::pos_inf()).is_pos_inf());
    CHECK(ext_neg(ExtReal::pos_inf()).is_neg_inf());
}

TEST_CASE("XInterval construction, membership, clipping") {
    XInterval iv(-1.0, 2.0);
    CHECK(iv.contains(0.0));
    CHECK(iv.contains(-1.0));
    CHECK_FALSE(iv.contains(2.0001));
    CHECK_THROWS_AS(XInterval(2.0, 1.0), Error);

    XInterval ray(ExtReal::neg_inf(), ExtReal(-0.25));
    CHECK(ray.contains(-100.0));
    XInterval clipped = ray.clipped(10.0);
    CHECK(clipped.lo().as_double() == doctest::Approx(-10.0));
    CHECK(clipped.hi().as_double() == doctest::Approx(-0.25));

    // A ray entirely outside the window clips to empty.
    XInterval far_ray(ExtReal::neg_inf(), ExtReal(-1000.0));
    CHECK(far_ray.clipped(10.0).is_empty());

    CHECK(XInterval::empty().is_empty());
    CHECK(XInterval::whole().contains(1e308));
    CHECK(XInterval::point(3.0).contains(3.0));
}

TEST_CASE("XInterval intersection and Minkowski difference") {
    XInterval a(-1.0, 2.0), b(1.0, 5.0);
    XInterval c = a.intersect(b);
    CHECK(c.lo().as_double() == doctest::Approx(1.0));
    CHECK(c.hi().as_double() == doctest::Approx(2.0));
    CHECK(a.intersect(XInterval(3.0, 4.0)).is_empty());
    CHECK(a.intersect(XInterval::empty()).is_empty());

    XInterval d = XInterval::minkowski_diff(a, b);
    CHECK(d.lo().as_double() == doctest::Approx(-6.0));
    CHECK(d.hi().as_double() == doctest::Approx(1.0));
    // inf - inf along the same ray stretches to the whole line
    XInterval w = XInterval::minkowski_diff(XInterval::whole(), XInterval::whole());
    CHECK(w.lo().is_neg_inf());
    CHECK(w.hi().is_pos_inf());
    CHECK(XInterval::minkowski_diff(a, XInterval::empty()).is_empty());
}

TEST_CASE("Grid enumerates uniform points exactly") {
    Grid g = Grid::uniform(1, -1.0, 1.0, 4);
    CHECK(g.dim() == 1);
    CHECK(g.size() == 5);
    CHECK(g.point(0)[0] == doctest::Approx(-1.0));
    CHECK(g.point(2)[0] == doctest::Approx(0.0));
    CHECK(g.point(4)[0] == doctest::Approx(1.0));
    CHECK(g.max_step() == doctest::Approx(0.5));
    CHECK(g.on_boundary(vec1(-1.0)));
    CHECK(g.on_boundary(vec1(0.8)));
    CHECK_FALSE(g.on_boundary(vec1(0.0)));

    Grid g2 = Grid::uniform(2, 0.0, 1.0, 2);
    CHECK(g2.size() == 9);
    Vec last = g2.point(8);
    CHECK(last[0] == doctest::Approx(1.0));
    CHECK(last[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(Grid(std::vector<GridAxis>{}), Error);
    CHECK_THROWS_AS(Grid({GridAxis{0.0, 1.0, 0.3, 0}}), Error);  // non-integer cell count
    CHECK_THROWS_AS(Grid({GridAxis{1.0, 0.0, 0.5, 0}}), Error);  // hi < lo
}

TEST_CASE("Tolerances validation") {
    Tolerances tol;
    CHECK_NOTHROW(tol.validate());

    Tolerances bad = tol;
    bad.set_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = tol;
    bad.eta_ladder = {1.0, 1.0};  // not strictly decreasing
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = tol;
    bad.eta_ladder = {1.0, -0.1};
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = tol;
    bad.gamma_splits = 2;
    CHECK_THROWS_AS(bad.validate(), Error);

    bad = tol;
    bad.support_dirs = 4;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("conj_tol_for_step dominates one-cell sweep error") {
    CHECK(conj_tol_for_step(0.01) == doctest::Approx(2.0 * 0.1 + 0.02));
    CHECK(conj_tol_for_step(1e-4) > 0.02);
    CHECK(conj_tol_for_step(1e-6) < conj_tol_for_step(1e-2));
}

TEST_CASE("interval window comparison") {
    Tolerances tol;
    XInterval ray(ExtReal::neg_inf(), ExtReal(-0.25));
    XInterval boxed(-10.0, -0.25);
    CHECK(interval_hausdorff_on_window(ray, boxed, tol));
    CHECK(interval_hausdorff_error(ray, boxed, tol) == doctest::Approx(0.0));

    XInterval off(-10.0, -0.35);
    CHECK_FALSE(interval_hausdorff_on_window(ray, off, tol));
    CHECK(interval_hausdorff_error(ray, off, tol) == doctest::Approx(0.1));

    // Empty-on-window matches only empty-on-window.
    XInterval far_ray(ExtReal::neg_inf(), ExtReal(-1000.0));
    CHECK(interval_hausdorff_on_window(far_ray, XInterval::empty(), tol));
    CHECK_FALSE(interval_hausdorff_on_window(far_ray, boxed, tol));
    CHECK(std::isinf(interval_hausdorff_error(far_ray, boxed, tol)));
}
