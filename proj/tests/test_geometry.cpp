#include <catch2/catch_amalgamated.hpp>

#include "ltm/core.hpp"
#include "ltm/families.hpp"
#include "ltm/geometry.hpp"
#include "ltm/rng.hpp"

using namespace ltm;

TEST_CASE("line normalization invariant") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        double a = rng.uniform(-5, 5), b = rng.uniform(-5, 5), c = rng.uniform(-5, 5);
        if (std::abs(a) + std::abs(b) < 1e-3) continue;
        Line l(a, b, c);
        CHECK(std::hypot(l.a, l.b) == Catch::Approx(1.0).margin(1e-12));
        bool first_positive = (std::abs(l.a) > kGeoTol) ? l.a > 0.0 : l.b > 0.0;
        CHECK(first_positive);
    }
    CHECK_THROWS_AS(Line(0.0, 0.0, 1.0), domain_error);
}

TEST_CASE("line_intersect on the axes and on parallels") {
    auto o = line_intersect(Line(1, 0, 0), Line(0, 1, 0));
    REQUIRE(o.has_value());
    CHECK(o->x == 0.0);
    CHECK(o->y == 0.0);
    CHECK_FALSE(line_intersect(Line::vertical(0.0), Line::vertical(1.0)).has_value());
}

TEST_CASE("scrL_3 meets scrL at height y_2") {
    Params par = make_params(2.8);
    // independent oracle: Cramer's rule on x + 3ay = 1, x + ay = 1/a
    double a = par.alpha;
    double det = 1.0 * a - 3.0 * a * 1.0;
    double x_or = (1.0 * a - par.inv_alpha * 3.0 * a) / det;
    double y_or = (1.0 * par.inv_alpha - 1.0 * 1.0) / det;
    auto p = line_intersect(boundary_line({Family::scrL_k, 3, false}, par),
                            boundary_line({Family::scrL, 0, false}, par));
    REQUIRE(p.has_value());
    CHECK(p->x == Catch::Approx(x_or).margin(1e-12));
    CHECK(p->y == Catch::Approx(y_or).margin(1e-12));
    CHECK(p->y == Catch::Approx(0.1147959).margin(1e-7));
    CHECK(p->y == Catch::Approx(y_meet(2, par)).margin(1e-13));
}

TEST_CASE("cone membership on the boundary rays") {
    Params par = make_params(2.5);
    CHECK(cone_contains(ConeId::C, {0.0, 1.0}, par));
    CHECK(cone_contains(ConeId::C, {par.L * 0.37, 0.37}, par));
    CHECK_FALSE(cone_contains(ConeId::C, {1.0, 0.0}, par));
    CHECK_FALSE(cone_contains(ConeId::C, {-1.0, 0.5}, par));
    CHECK(cone_contains(ConeId::Cs, {1.0, par.L * 0.999}, par));
    CHECK_FALSE(cone_contains(ConeId::Cs, {0.0, 1.0}, par));
    CHECK_THROWS_AS(cone_contains(ConeId::C, {0.0, 0.0}, par), domain_error);
}

TEST_CASE("DF pushes the cone into Cprime") {
    Params par = make_params(2.8);
    Vec2 v{-0.2, 1.0};
    REQUIRE(cone_contains(ConeId::C, v, par));
    Mat2 df = shear_F(par.alpha);
    df.apply(v.x, v.y);
    CHECK(v.x == Catch::Approx(2.6).margin(1e-15));
    CHECK(cone_contains(ConeId::Cprime, v, par));
    CHECK(v.x / v.y >= par.L + par.alpha - 1e-12);
}

TEST_CASE("cone invariance under DF^k and DG^l") {
    for (double alpha : {2.15, 2.5, 2.8}) {
        Params par = make_params(alpha);
        Rng rng(41);
        int violations = 0;
        for (int i = 0; i < 10000; ++i) {
            double s = rng.uniform(par.L, 0.0);
            int k = 1 + static_cast<int>(rng.uniform01() * 10);
            Vec2 v{s, 1.0};
            Vec2 w{v.x + k * par.alpha * v.y, v.y};  // DF^k v
            if (!cone_contains(ConeId::Cprime, w, par)) ++violations;

            double g = rng.uniform(0.0, -par.L);  // gradient range of Cprime
            int l = 1 + static_cast<int>(rng.uniform01() * 10);
            Vec2 vp{1.0, g};
            Vec2 wp{vp.x, vp.y - l * par.alpha * vp.x};  // DG^l v'
            if (!cone_contains(ConeId::C, wp, par)) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("segment heights and diameter") {
    Segment s({0.0, 0.0}, {0.3, 0.1});
    auto [lv, lh] = segment_heights(s);
    CHECK(lv == Catch::Approx(0.1));
    CHECK(lh == Catch::Approx(0.3));
    CHECK(s.diameter() == Catch::Approx(0.3));

    Params par = make_params(2.8);
    Segment v({0.21, 0.0}, {0.2, par.inv_alpha});
    CHECK(v.ell_v() == Catch::Approx(par.inv_alpha).margin(1e-15));

    Segment h({0.0, 0.1}, {0.4, 0.1});
    CHECK(h.ell_v() == 0.0);

    CHECK_THROWS_AS(Segment({0.1, 0.1}, {0.1, 0.1}), domain_error);
}

TEST_CASE("clip segment to polygon") {
    Polygon square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});

    auto full = clip_segment_to_polygon(Segment({-0.5, 0.4}, {1.5, 0.6}), square);
    REQUIRE(full.has_value());
    CHECK(full->p0.x == Catch::Approx(0.0).margin(1e-12));
    CHECK(full->p1.x == Catch::Approx(1.0).margin(1e-12));

    auto inside = clip_segment_to_polygon(Segment({0.2, 0.2}, {0.4, 0.5}), square);
    REQUIRE(inside.has_value());
    CHECK((inside->p0 - Vec2{0.2, 0.2}).norm() < 1e-12);
    CHECK((inside->p1 - Vec2{0.4, 0.5}).norm() < 1e-12);

    Params par = make_params(2.8);
    double w = par.inv_alpha;
    Polygon sq({{0, 0}, {w, 0}, {w, w}, {0, w}});
    auto clipped = clip_segment_to_polygon(Segment({-0.1, 0.05}, {0.2, 0.05}), sq);
    REQUIRE(clipped.has_value());
    CHECK(clipped->p0.x == Catch::Approx(0.0).margin(1e-12));
    CHECK(clipped->p1.x == Catch::Approx(0.2).margin(1e-12));

    CHECK_FALSE(clip_segment_to_polygon(Segment({2.0, 2.0}, {3.0, 2.5}), square).has_value());
}

TEST_CASE("clipping is idempotent") {
    Polygon tri({{0, 0}, {1, 0}, {0.4, 0.9}});
    Rng rng(43);
    for (int i = 0; i < 2000; ++i) {
        Vec2 a{rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)};
        Vec2 b{rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)};
        if ((b - a).norm() < 1e-6) continue;
        auto once = clip_segment_to_polygon(Segment(a, b), tri);
        if (!once) continue;
        auto twice = clip_segment_to_polygon(*once, tri);
        REQUIRE(twice.has_value());
        CHECK((twice->p0 - once->p0).norm() < 1e-10);
        CHECK((twice->p1 - once->p1).norm() < 1e-10);
    }
}

TEST_CASE("polygon clipping against half planes and polygons") {
    Polygon square({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    Polygon halved = clip_halfplane(square, Line(1.0, 0.0, 0.5), -1);
    CHECK(halved.area() == Catch::Approx(0.5).margin(1e-12));

    Polygon shifted({{0.5, -0.2}, {1.5, -0.2}, {1.5, 0.8}, {0.5, 0.8}});
    Polygon inter = clip_polygon(square, shifted);
    CHECK(inter.area() == Catch::Approx(0.4).margin(1e-12));
    CHECK(inter.is_convex());
}

TEST_CASE("split_mod1 wraps once") {
    auto pieces = split_mod1({0.8, 0.2}, {1.3, 0.2});
    REQUIRE(pieces.size() == 2);
    CHECK(pieces[0].p0.x == Catch::Approx(0.8));
    CHECK(pieces[0].p1.x == Catch::Approx(1.0));
    CHECK(pieces[1].p0.x == Catch::Approx(0.0));
    CHECK(pieces[1].p1.x == Catch::Approx(0.3));
    for (const auto& s : pieces) {
        CHECK(s.p0.y == Catch::Approx(0.2));
    }
}

TEST_CASE("split_mod1 keeps in-square segments whole") {
    auto pieces = split_mod1({0.1, 0.2}, {0.6, 0.9});
    REQUIRE(pieces.size() == 1);
    CHECK(pieces[0].p0.x == Catch::Approx(0.1));
    CHECK(pieces[0].p1.y == Catch::Approx(0.9));
}

TEST_CASE("split_mod1 with two crossings gives three ordered pieces") {
    // the F^3-image of a chord through A3-like coordinates stretched past two
    // integer crossings of x
    auto pieces = split_mod1({0.7, 0.05}, {2.4, 0.12});
    REQUIRE(pieces.size() == 3);
    CHECK(pieces[0].p0.x == Catch::Approx(0.7));
    CHECK(pieces[1].p0.x == Catch::Approx(0.0).margin(1e-12));
    CHECK(pieces[2].p1.y == Catch::Approx(0.12));
}

TEST_CASE("split_mod1 preserves total length") {
    Rng rng(47);
    for (int i = 0; i < 10000; ++i) {
        Vec2 a{rng.uniform(-2, 3), rng.uniform(-2, 3)};
        Vec2 b{rng.uniform(-2, 3), rng.uniform(-2, 3)};
        if ((b - a).norm() < 1e-6) continue;
        double total = 0.0;
        for (const auto& s : split_mod1(a, b)) total += s.length();
        CHECK(total == Catch::Approx((b - a).norm()).margin(1e-10));
    }
}

TEST_CASE("segments store their parent line") {
    Segment s({0.1, 0.2}, {0.5, 0.7});
    CHECK(s.parent.contains(s.p0));
    CHECK(s.parent.contains(s.p1));
    CHECK(s.parent.contains(s.at(0.37)));
}
