#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cvxeps/functions.hpp"
#include "cvxeps/sets.hpp"

using namespace cvxeps;

TEST_CASE("affine evaluation") {
    ConvexFn f = ConvexFn::affine(vec2(1.0, -2.0), 3.0);
    CHECK(f.dim() == 2);
    CHECK(f.kind() == FnKind::Affine);
    CHECK(f(vec2(2.0, 1.0)).as_double() == doctest::Approx(3.0));
    CHECK(ConvexFn::zero(1).eval1(7.0) == ExtReal(0.0));
}

TEST_CASE("quad_diag evaluation with shift") {
    ConvexFn f = ConvexFn::quad_diag(vec2(1.0, 2.0), vec2(0.0, 1.0));
    CHECK(f(vec2(2.0, 0.0)).as_double() == doctest::Approx(4.0 + 2.0));
    CHECK_THROWS_AS(ConvexFn::quad_diag(vec1(-1.0), vec1(0.0)), Error);
}

TEST_CASE("abs_norm evaluation") {
    ConvexFn f = ConvexFn::abs_norm(vec2(1.0, 3.0));
    CHECK(f(vec2(-2.0, 1.0)).as_double() == doctest::Approx(5.0));
    CHECK_THROWS_AS(ConvexFn::abs_norm(vec1(0.0)), Error);
}

TEST_CASE("neg_sqrt and neg_recip are a conjugate-shaped pair") {
    ConvexFn f = ConvexFn::neg_sqrt();
    CHECK(f.eval1(4.0).as_double() == doctest::Approx(-2.0));
    CHECK(f.eval1(0.0).as_double() == doctest::Approx(0.0));
    CHECK(f.eval1(-0.5).is_pos_inf());

    ConvexFn g = ConvexFn::neg_recip();
    CHECK(g.eval1(-1.0).as_double() == doctest::Approx(0.25));
    CHECK(g.eval1(-0.25).as_double() == doctest::Approx(1.0));
    CHECK(g.eval1(0.0).is_pos_inf());
    CHECK(g.eval1(1.0).is_pos_inf());
}

TEST_CASE("indicator evaluation and effective domain") {
    ConvexSetDesc C = ConvexSetDesc::interval(XInterval(-1.0, 1.0));
    ConvexFn f = ConvexFn::indicator(C);
    CHECK(f.eval1(0.5) == ExtReal(0.0));
    CHECK(f.eval1(1.5).is_pos_inf());
    CHECK(f.effective_domain().contains(vec1(0.5)));
    CHECK_FALSE(f.effective_domain().contains(vec1(1.5)));
}

TEST_CASE("sum, scale, separable evaluation") {
    ConvexFn q = ConvexFn::quad_diag(vec1(1.0), vec1(0.0));
    ConvexFn a = ConvexFn::abs_norm(vec1(1.0));
    ConvexFn s = ConvexFn::sum(q, a);
    CHECK(s.eval1(-2.0).as_double() == doctest::Approx(6.0));

    ConvexFn sc = ConvexFn::scale(3.0, q);
    CHECK(sc.eval1(2.0).as_double() == doctest::Approx(12.0));
    CHECK_THROWS_AS(ConvexFn::scale(0.0, q), Error);

    ConvexFn sep = ConvexFn::separable(q, a);
    CHECK(sep.dim() == 2);
    CHECK(sep(vec2(2.0, -1.0)).as_double() == doctest::Approx(5.0));

    // +inf propagates through sums without NaN surprises
    ConvexFn ind = ConvexFn::indicator(ConvexSetDesc::singleton(vec1(0.0)));
    CHECK(ConvexFn::sum(ind, ConvexFn::neg_sqrt()).eval1(1.0).is_pos_inf());
    CHECK(ConvexFn::sum(ind, ConvexFn::neg_sqrt()).eval1(0.0).as_double() ==
          doctest::Approx(0.0));
}

TEST_CASE("sum rejects dimension mismatch") {
    ConvexFn f1 = ConvexFn::abs_norm(vec1(1.0));
    ConvexFn f2 = ConvexFn::abs_norm(vec2(1.0, 1.0));
    CHECK_THROWS_AS(ConvexFn::sum(f1, f2), DimensionMismatch);
}

TEST_CASE("sampled functions certify convexity at construction") {
    Grid g = Grid::uniform(1, -1.0, 1.0, 4);
    std::vector<ExtReal> vals;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x = g.point(i)[0];
        vals.push_back(ExtReal(x * x));
    }
    ConvexFn f = ConvexFn::sampled(g, vals);
    CHECK(f.eval1(0.0).as_double() == doctest::Approx(0.0));
    CHECK(f.eval1(1.0).as_double() == doctest::Approx(1.0));
    // linear interpolation between samples
    CHECK(f.eval1(0.25).as_double() == doctest::Approx(0.125));
    // +inf outside the sampled box
    CHECK(f.eval1(2.0).is_pos_inf());

    // concave data is rejected
    std::vector<ExtReal> bad = {ExtReal(0.0), ExtReal(1.0), ExtReal(1.2), ExtReal(1.0),
                                ExtReal(0.0)};
    CHECK_THROWS_AS(ConvexFn::sampled(g, bad), Error);

    // +inf samples model restricted domains and still certify
    std::vector<ExtReal> dom = {ExtReal::pos_inf(), ExtReal(1.0), ExtReal(0.0), ExtReal(1.0),
                                ExtReal::pos_inf()};
    CHECK_NOTHROW(ConvexFn::sampled(g, dom));
}

TEST_CASE("epigraph membership is exact") {
    ConvexFn f = ConvexFn::abs_norm(vec1(1.0));
    ConvexSetDesc epi = epigraph(f);
    CHECK(epi.dim() == 2);
    CHECK(epi.contains(vec2(1.0, 1.0)));
    CHECK(epi.contains(vec2(-1.0, 2.5)));
    CHECK_FALSE(epi.contains(vec2(1.0, 0.5)));
}

TEST_CASE("lsc grid screen accepts closed functions, flags open jumps") {
    Tolerances tol;
    Grid g = Grid::uniform(1, -2.0, 2.0, 400);
    CHECK(check_lsc_on_grid(ConvexFn::quad_diag(vec1(1.0), vec1(0.0)), g, tol));
    CHECK(check_lsc_on_grid(ConvexFn::neg_sqrt(), g, tol));

    // An upward jump at an interior point fails the screen.
    Grid gs = Grid::uniform(1, -1.0, 1.0, 4);
    std::vector<ExtReal> vals = {ExtReal(0.0), ExtReal(0.0), ExtReal(0.0), ExtReal(0.0),
                                 ExtReal(50.0)};
    ConvexFn jump = ConvexFn::sampled(gs, vals);
    CHECK_FALSE(check_lsc_on_grid(jump, gs, tol));
}
