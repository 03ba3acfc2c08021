#include <catch2/catch_amalgamated.hpp>

#include "ltm/expansion.hpp"
#include "ltm/periodic.hpp"
#include "ltm/thresholds.hpp"

using namespace ltm;

TEST_CASE("expansion factors") {
    Params par = make_params(2.1319);
    CHECK(expansion_factor(1, par) == Catch::Approx(1.43507).margin(1e-5));
    CHECK(1.0 / expansion_factor(1, par) == Catch::Approx(-par.L).margin(1e-12));
    CHECK(expansion_factor(3, par) == Catch::Approx(5.69887).margin(1e-5));

    // toward the critical shear E_1 -> 1
    Params near2 = make_params(2.0001);
    CHECK(expansion_factor(1, near2) > 1.0);
    CHECK(expansion_factor(1, near2) < 1.02);

    for (int k = 1; k < 10; ++k)
        CHECK(expansion_factor(k + 1, par) > expansion_factor(k, par));
    CHECK_THROWS_AS(expansion_factor(0, par), domain_error);
}

TEST_CASE("growth sums") {
    double a0 = solve_threshold(ThresholdId::alpha0).value;
    Params par0 = make_params(a0);
    CHECK(growth_sum({1, 3, 4}, par0) == Catch::Approx(1.0).margin(1e-9));

    Params par = make_params(2.37);
    CHECK(growth_sum({1}, par) == Catch::Approx(-par.L).margin(1e-14));
    CHECK(growth_sum({1}, par) < 1.0);

    Params par25 = make_params(2.5);
    CHECK(growth_sum({1, 3, 4}, par25) < 1.0);
    CHECK_THROWS_AS(growth_sum({}, par25), domain_error);
}

TEST_CASE("the [1,3,4] growth sum decreases in alpha") {
    double prev = 1e300;
    for (double a = 2.02; a < 2.99; a += 0.02) {
        double s = growth_sum({1, 3, 4}, make_params(a));
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("periodic point closed form and composed derivative") {
    Params par = make_params(2.4);
    PeriodicData pd = periodic_point(par);
    CHECK(pd.z_p.x == Catch::Approx(0.0359195).margin(1e-7));
    CHECK(pd.z_p.y == Catch::Approx(0.1867816).margin(1e-7));

    TorusPoint z{pd.z_p.x, pd.z_p.y};
    CHECK(torus_dist(z, apply_map(MapId::H, 4, z, par)) < 1e-12);

    double a2 = par.alpha * par.alpha;
    CHECK(pd.DH4.trace() == Catch::Approx(3.0 * a2 * a2 - 8.0 * a2 + 2.0).margin(1e-9));
    CHECK(pd.DH4.det() == Catch::Approx(1.0).margin(1e-10));
    CHECK(pd.lambda_plus * pd.lambda_minus == Catch::Approx(1.0).margin(1e-9));

    // the composed top-right entry is 4a - 3a^3; the printed one is recorded
    double a = par.alpha;
    CHECK(pd.composed_top_right == Catch::Approx(4.0 * a - 3.0 * a * a * a).margin(1e-9));
    CHECK(pd.printed_top_right == Catch::Approx(3.0 * a * a * a + 4.0 * a).margin(1e-12));
}

TEST_CASE("eigenvector slopes solve the eigen equation") {
    for (double alpha : {2.1, 2.4, 2.8}) {
        Params par = make_params(alpha);
        PeriodicData pd = periodic_point(par);
        for (double g : {pd.g_plus, pd.g_minus}) {
            double vx = 1.0, vy = g;
            pd.DH4.apply(vx, vy);
            // image parallel to (1, g): cross product relative to magnitudes
            double cross = vx * g - vy;
            CHECK(std::abs(cross) / std::hypot(vx, vy) < 1e-9);
        }
    }
}

TEST_CASE("discriminant identity of the composed matrix") {
    for (double alpha : {2.05, 2.4, 2.9}) {
        Params par = make_params(alpha);
        PeriodicData pd = periodic_point(par);
        double tr = pd.DH4.trace();
        double a2 = alpha * alpha;
        double a4 = a2 * a2;
        double rhs = a2 * (9.0 * a4 * a2 - 48.0 * a4 + 76.0 * a2 - 32.0);
        CHECK((tr * tr - 4.0) == Catch::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("composed eigen-slopes match the closed form across the window") {
    for (int i = 0; i < 50; ++i) {
        double alpha = 2.05 + (2.95 - 2.05) * i / 49.0;
        Params par = make_params(alpha);
        PeriodicData pd = periodic_point(par);
        auto [gp, gm] = g_closed_form(par);
        CHECK(pd.g_plus == Catch::Approx(gp).margin(1e-9));
        CHECK(pd.g_minus == Catch::Approx(gm).margin(1e-9));
    }
}

TEST_CASE("orbit pattern A3, B1*, A1*, B1") {
    Params par = make_params(2.4);
    Vec2 zp = periodic_point_location(par);
    TorusPoint z{zp.x, zp.y};
    TorusPoint f3 = apply_map(MapId::F, 3, z, par);
    TorusPoint gf3 = apply_map(MapId::G, 1, f3, par);
    TorusPoint fgf3 = apply_map(MapId::F, 1, gf3, par);
    CHECK(make_cell({Side::F, 3, false, false}, par).poly.contains({z.x, z.y}, 1e-9));
    CHECK(make_cell({Side::G, 1, false, true}, par).poly.contains({f3.x, f3.y}, 1e-9));
    CHECK(make_cell({Side::F, 1, false, true}, par).poly.contains({gf3.x, gf3.y}, 1e-9));
    CHECK(make_cell({Side::G, 1, false, false}, par).poly.contains({fgf3.x, fgf3.y}, 1e-9));
}

TEST_CASE("region M carries a constant derivative") {
    Params par = make_params(2.15);
    PeriodicData pd = periodic_point(par);
    REQUIRE(pd.M.size() >= 3);
    Vec2 c = pd.M.centroid();
    for (const Vec2& v : pd.M.v) {
        Vec2 inward = lerp(v, c, 1e-4);
        Mat2 j = jacobian_along_orbit(MapId::H, 4, {inward.x, inward.y}, par);
        CHECK(j.a == Catch::Approx(pd.DH4.a).epsilon(1e-9));
        CHECK(j.b == Catch::Approx(pd.DH4.b).epsilon(1e-9));
        CHECK(j.c == Catch::Approx(pd.DH4.c).epsilon(1e-9));
        CHECK(j.d == Catch::Approx(pd.DH4.d).epsilon(1e-9));
    }
}

TEST_CASE("M boundary lines match their closed forms at alpha 2.15") {
    // anchors from the pullback algebra: M1 has slope (a^2-1)/(4a-3a^3), M2
    // has slope (2a-a^3)/(3a^4-7a^2+1), with the stated axis crossings
    double a = 2.15;
    Params par = make_params(a);
    double a2 = a * a, a3 = a2 * a, a4 = a2 * a2;
    Line m1 = boundary_line({Family::M1, 0, false}, par);
    Line m2 = boundary_line({Family::M2, 0, false}, par);
    double den1 = 4.0 * a - 3.0 * a3;
    CHECK(m1.contains({0.0, (1.0 - a) * (a + 2.0) / den1}, 1e-10));
    CHECK(m1.contains({1.0, (1.0 - a) / den1}, 1e-10));
    double den2 = 3.0 * a4 - 7.0 * a2 + 1.0;
    CHECK(m2.contains({0.0, (a3 + a2 - 3.0 * a - 1.0) / den2}, 1e-10));
    CHECK(m2.contains({1.0, (a2 - a - 1.0) / den2}, 1e-10));
}

TEST_CASE("gamma_s runs from bdS1 to scrL_2 and stays inside M") {
    Params par = make_params(2.15);
    PeriodicData pd = periodic_point(par);
    const Segment& gs = pd.gamma_s;
    double e0 = std::min(gs.p0.x, gs.p1.x);
    CHECK(e0 < 1e-9);  // one endpoint on the left boundary of S
    Line l2 = boundary_line({Family::scrL_k, 2, false}, par);
    double r = std::min(std::abs(l2.eval(gs.p0)), std::abs(l2.eval(gs.p1)));
    CHECK(r < 1e-9);  // the other on scrL_2
    CHECK(pd.M.contains(gs.p0, 1e-9));
    CHECK(pd.M.contains(gs.p1, 1e-9));
    CHECK(pd.M.contains(pd.z_p, -1e-12));
}

TEST_CASE("gamma_u crosses scrL_3^2 and scrL") {
    for (double alpha : {2.15, 2.5, 2.8}) {
        Params par = make_params(alpha);
        PeriodicData pd = periodic_point(par);
        Line l = boundary_line({Family::scrL, 0, false}, par);
        Line l32 = boundary_line({Family::scrL_k2, 3, false}, par);
        auto straddles = [&](const Line& ln) {
            return (ln.eval(pd.gamma_u.p0) > 0.0) != (ln.eval(pd.gamma_u.p1) > 0.0);
        };
        CHECK(straddles(l));
        CHECK(straddles(l32));
    }
}

TEST_CASE("thresholds reproduce the published approximations") {
    struct Row {
        ThresholdId id;
        double value;
        double tol;
    };
    const Row rows[] = {
        {ThresholdId::alpha0, 2.1319, 5e-5},  {ThresholdId::alpha1, 2.125, 5e-4},
        {ThresholdId::alpha2, 2.127, 5e-4},   {ThresholdId::alpha3, 2.694, 5e-4},
        {ThresholdId::alpha4, 2.1239, 5e-5},  {ThresholdId::alpha5, 2.124, 5e-4},
        {ThresholdId::alpha7, 2.072, 5e-4},   {ThresholdId::alpha8, 2.012, 5e-4},
    };
    for (const Row& row : rows) {
        ThresholdResult r = solve_threshold(row.id);
        INFO(threshold_name(row.id));
        CHECK(std::abs(r.value - row.value) < row.tol);
        CHECK(r.residual < 1e-12);
    }
}

TEST_CASE("threshold ordering") {
    auto v = [](ThresholdId id) { return solve_threshold(id).value; };
    double a8 = v(ThresholdId::alpha8), a7 = v(ThresholdId::alpha7), a4 = v(ThresholdId::alpha4),
           a5 = v(ThresholdId::alpha5), a1 = v(ThresholdId::alpha1), a2 = v(ThresholdId::alpha2),
           a0 = v(ThresholdId::alpha0), a3 = v(ThresholdId::alpha3);
    CHECK(a8 < a7);
    CHECK(a7 < a4);
    CHECK(a4 < a5);
    CHECK(a5 < a1);
    CHECK(a1 < a2);
    CHECK(a2 < a0);
    CHECK(a0 < a3);
}

TEST_CASE("bisect requires a sign change") {
    CHECK_THROWS_AS(bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0), no_bracket);
    double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    CHECK(r == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
}

TEST_CASE("f_alpha margin") {
    double a8 = solve_threshold(ThresholdId::alpha8).value;
    CHECK(std::abs(f_alpha(7, make_params(a8))) < 1e-9);

    CHECK(f_alpha(7, make_params(2.1319)) > 0.0);
    CHECK(f_alpha(7, make_params(a8 - 0.004)) < 0.0);
    for (double alpha : {2.1319, 2.5}) {
        Params par = make_params(alpha);
        for (int k = 7; k <= 21; k += 2) CHECK(f_alpha(k, par) > 0.0);
    }
    CHECK_THROWS_AS(f_alpha(6, make_params(2.5)), domain_error);
    CHECK_THROWS_AS(f_alpha(5, make_params(2.5)), domain_error);
}

TEST_CASE("sign of f_alpha is the sign at k = 7") {
    for (double alpha : {2.05, 2.5, 2.9}) {
        Params par = make_params(alpha);
        bool pos7 = f_alpha(7, par) > 0.0;
        for (int k = 9; k <= 41; k += 2) CHECK((f_alpha(k, par) > 0.0) == pos7);
    }
}

TEST_CASE("y_m geometric construction agrees with the displayed fraction") {
    for (double alpha : {2.05, 2.15, 2.3}) {
        Params par = make_params(alpha);
        PeriodicData pd = periodic_point(par);
        CHECK(y_m(par, pd) == Catch::Approx(y_m_closed(par, pd)).margin(1e-12));
    }
}

TEST_CASE("base-case margin is positive above alpha7") {
    double a7 = solve_threshold(ThresholdId::alpha7).value;
    Params above = make_params(a7 + 0.01);
    CHECK(base_case_margin(above, periodic_point(above)) > 0.0);
    Params below = make_params(a7 - 0.01);
    CHECK(base_case_margin(below, periodic_point(below)) < 0.0);
}

TEST_CASE("threshold functions change sign across their roots") {
    for (ThresholdId id : {ThresholdId::alpha0, ThresholdId::alpha2, ThresholdId::alpha3,
                           ThresholdId::alpha4, ThresholdId::alpha5}) {
        double root = solve_threshold(id).value;
        double lo = threshold_function(id, root - 1e-3);
        double hi = threshold_function(id, root + 1e-3);
        CHECK((lo < 0.0) != (hi < 0.0));
    }
}
