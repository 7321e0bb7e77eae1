#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>

#include "cvxeps/oracle.hpp"
#include "cvxeps/subdiff.hpp"

using namespace cvxeps;

namespace {

Tolerances default_tol() { return Tolerances{}; }

double oracle_slack_1d(const Tolerances& tol) {
    return OracleConfig::standard(1, tol).slack;
}

}  // namespace

TEST_CASE("oracle eps-subdifferential of the square brackets the closed form") {
    Tolerances tol = default_tol();
    ConvexFn f = ConvexFn::quad_diag(vec1(1.0), vec1(0.0));
    OracleConfig cfg = OracleConfig::standard(1, tol);
    for (double eps : {0.25, 1.0}) {
        DualSet got = oracle_eps_subdiff(f, vec1(0.0), eps, cfg, tol);
        REQUIRE(got.interval_1d.has_value());
        double r_exact = 2.0 * std::sqrt(eps);
        double r_outer = 2.0 * std::sqrt(eps + cfg.slack);
        // the oracle quantifier slack can only enlarge the set
        CHECK(got.interval_1d->contains(r_exact - 1e-6));
        CHECK(got.interval_1d->contains(-r_exact + 1e-6));
        CHECK(got.interval_1d->hi().as_double() <= r_outer + 0.02);
        CHECK(got.interval_1d->lo().as_double() >= -r_outer - 0.02);
    }
}

TEST_CASE("computed eps-subdifferentials sit inside the oracle set") {
    Tolerances tol = default_tol();
    OracleConfig cfg = OracleConfig::standard(1, tol);
    struct Case {
        ConvexFn f;
        double x_bar;
        double eps;
    };
    std::vector<Case> cases{
        {ConvexFn::quad_diag(vec1(1.0), vec1(0.0)), 0.0, 1.0},
        {ConvexFn::abs_norm(vec1(1.0)), 1.0, 0.5},
        {ConvexFn::sum(ConvexFn::quad_diag(vec1(1.0), vec1(0.0)),
                       ConvexFn::abs_norm(vec1(1.0))),
         0.0, 0.5},
    };
    for (const Case& c : cases) {
        DualSet computed = eps_subdiff_set(c.f, vec1(c.x_bar), c.eps, tol);
        DualSet oracle = oracle_eps_subdiff(c.f, vec1(c.x_bar), c.eps, cfg, tol);
        // dense dual probe: membership agreement up to the oracle slack band
        for (int i = 0; i <= 80; ++i) {
            double p = -10.0 + 20.0 * i / 80.0;
            if (computed.contains1(p)) CHECK(oracle.contains1(p));
        }
        REQUIRE(computed.interval_1d.has_value());
        REQUIRE(oracle.interval_1d.has_value());
        XInterval ci = computed.interval_1d->clipped(tol.window_radius);
        XInterval oi = oracle.interval_1d->clipped(tol.window_radius);
        REQUIRE_FALSE(ci.is_empty());
        REQUIRE_FALSE(oi.is_empty());
        // the slack band widens endpoints by at most slack / sqrt(eps)-ish
        double band = oracle_slack_1d(tol) / std::sqrt(c.eps) + 0.05;
        CHECK(std::abs(ci.hi().as_double() - oi.hi().as_double()) <= band);
        CHECK(std::abs(ci.lo().as_double() - oi.lo().as_double()) <= band);
    }
}

TEST_CASE("oracle eps-normal directions at an interval endpoint") {
    Tolerances tol = default_tol();
    OracleConfig cfg = OracleConfig::standard(1, tol);
    ConvexSetDesc C = ConvexSetDesc::interval(XInterval(0.0, 1.0));
    DualSet got = oracle_eps_normal(C, vec1(1.0), 0.5, cfg, tol);
    REQUIRE(got.interval_1d.has_value());
    // exact set is [-1/2, +inf); the slack can push the left endpoint down
    CHECK(got.contains1(-0.5 + 1e-6));
    CHECK(got.contains1(5.0));
    CHECK_FALSE(got.contains1(-0.5 - cfg.slack - 0.02));
    CHECK(got.interval_1d->hi().as_double() >= tol.window_radius - 1e-6);
}

TEST_CASE("oracle polar of an interval and of the shifted disk") {
    Tolerances tol = default_tol();
    OracleConfig cfg1 = OracleConfig::standard(1, tol);
    DualSet p1 = oracle_polar(ConvexSetDesc::interval(XInterval(-2.0, 2.0)), cfg1, tol);
    REQUIRE(p1.interval_1d.has_value());
    CHECK(p1.contains1(0.5 - 1e-6));
    CHECK(p1.contains1(-0.5 + 1e-6));
    CHECK(p1.interval_1d->hi().as_double() <= 0.5 + 0.5 * cfg1.slack + 0.02);
    CHECK(p1.interval_1d->lo().as_double() >= -0.5 - 0.5 * cfg1.slack - 0.02);

    // 2D: the oracle is coarse (slack ~ grid step x window) but must stay an
    // outer approximation of the exact polar x*_1 + |x*| <= 1
    OracleConfig cfg2 = OracleConfig::standard(2, tol);
    DualSet p2 = oracle_polar(ConvexSetDesc::ball(vec2(1.0, 0.0), 1.0), cfg2, tol);
    for (int iy = -5; iy <= 5; ++iy)
        for (int ix = -5; ix <= 5; ++ix) {
            Vec p = vec2(ix * 0.2, iy * 0.2);
            if (p[0] + p.norm() <= 1.0) CHECK(p2.contains(p));
        }
    CHECK_FALSE(p2.contains(vec2(5.0, 0.0)));
    CHECK_FALSE(p2.contains(vec2(0.0, 8.0)));
}

TEST_CASE("oracle value function is the exact grid minimum") {
    Tolerances tol = default_tol();
    ParametricProblem p{ConvexFn::separable(ConvexFn::quad_diag(vec1(1.0), vec1(0.0)),
                                            ConvexFn::abs_norm(vec1(1.0))),
                        std::nullopt, 1, 1};
    Grid x_grid = Grid::uniform(1, -2.0, 2.0, 40);
    Grid y_grid = Grid::uniform(1, -10.0, 10.0, 400);
    std::vector<ExtReal> mu = oracle_value_fn(p, x_grid, y_grid);
    REQUIRE(mu.size() == x_grid.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double x = x_grid.point(i)[0];
        REQUIRE(mu[i].is_finite());
        // y = 0 is a grid point, so the inner minimum is exact
        CHECK(std::abs(mu[i].as_double() - x * x) < 1e-12);
    }

    ParametricProblem boxed{p.phi,
                            ConvexSetDesc::box({XInterval(0.0, 1.0), XInterval(0.0, 1.0)}),
                            1, 1};
    std::vector<ExtReal> mu2 = oracle_value_fn(boxed, Grid::uniform(1, 4.0, 5.0, 2), y_grid);
    for (const ExtReal& v : mu2) CHECK(v.is_pos_inf());
}

TEST_CASE("oracle preconditions") {
    Tolerances tol = default_tol();
    OracleConfig cfg1 = OracleConfig::standard(1, tol);
    CHECK_THROWS_AS(oracle_eps_subdiff(ConvexFn::zero(2), vec2(0.0, 0.0), 0.5, cfg1, tol),
                    DimensionMismatch);
    CHECK_THROWS_AS(
        oracle_eps_subdiff(ConvexFn::neg_sqrt(), vec1(-1.0), 0.5, cfg1, tol), Error);
    CHECK_THROWS_AS(oracle_eps_normal(ConvexSetDesc::interval(XInterval(0.0, 1.0)),
                                      vec1(2.0), 0.5, cfg1, tol),
                    Error);
}
