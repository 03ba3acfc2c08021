#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "ltm/partition.hpp"
#include "ltm/rng.hpp"

using namespace ltm;

namespace {

// independent brute-force iteration, written directly on the unreduced
// working coordinate (F preserves y, so x_j = x + j*alpha*y)
int f_return_by_hand(Vec2 p, const Params& par, int cap) {
    for (int j = 1; j <= cap; ++j) {
        double xj = p.x + j * par.alpha * p.y;
        xj -= std::floor(xj);
        if (xj <= par.inv_alpha || xj >= 1.0 - 1e-13) return j;
    }
    return -1;
}

Vec2 random_interior_point(const Polygon& poly, Rng& rng) {
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const Vec2& v : poly.v) {
        xlo = std::min(xlo, v.x);
        xhi = std::max(xhi, v.x);
        ylo = std::min(ylo, v.y);
        yhi = std::max(yhi, v.y);
    }
    for (int i = 0; i < 10000; ++i) {
        Vec2 p{rng.uniform(xlo, xhi), rng.uniform(ylo, yhi)};
        if (poly.contains(p, -1e-9)) return p;
    }
    FAIL("no interior point found");
    return {};
}

}  // namespace

TEST_CASE("boundary_line closed forms at alpha 2.8") {
    Params par = make_params(2.8);
    double w = par.inv_alpha;

    Line L = boundary_line({Family::scrL, 0, false}, par);
    CHECK(L.contains({0.0, w * w}, 1e-12));
    CHECK(L.contains({w, 0.0}, 1e-12));

    Line L3 = boundary_line({Family::scrL_k, 3, false}, par);
    auto hit = line_intersect(L3, boundary_line({Family::bdS, 2, false}, par));
    REQUIRE(hit.has_value());
    CHECK(hit->y == Catch::Approx(0.0765306).margin(1e-7));
    CHECK(hit->y == Catch::Approx((w - w * w) / 3.0).margin(1e-13));

    // scrI_2 meets the diagonal at (ybar, ybar); oracle from its own algebra:
    // x = 2*a*x - 1 + 1/a  =>  x = (1 - 1/a)/(2a - 1)
    Line I2 = boundary_line({Family::scrI_k, 2, false}, par);
    double xo = (1.0 - w) / (2.0 * par.alpha - 1.0);
    auto d = line_intersect(I2, Line(1.0, -1.0, 0.0));
    REQUIRE(d.has_value());
    CHECK(d->x == Catch::Approx(xo).margin(1e-13));
    CHECK(d->x == Catch::Approx(0.1397516).margin(1e-7));
    CHECK(d->x == Catch::Approx(y_bar(par)).margin(1e-13));
}

TEST_CASE("boundary_line starred variants are I1 images") {
    Params par = make_params(2.4);
    double w = par.inv_alpha;
    Line l2s = boundary_line({Family::scrL_k, 2, true}, par);
    // I1 image of two points of scrL_2
    Vec2 p{0.0, 1.0 / (2.0 * par.alpha)};
    Vec2 q{w, y_meet(2, par)};
    CHECK(l2s.contains({w - p.x, w - p.y}, 1e-12));
    CHECK(l2s.contains({w - q.x, w - q.y}, 1e-12));

    Line istar = boundary_line({Family::scrI, 0, true}, par);
    // the parent line of scrI*: y = 1/a + a x - 1
    CHECK(istar.contains({(1.0 - w) / par.alpha, 0.0}, 1e-12));
    CHECK(istar.contains({1.0 / par.alpha, w + 1.0 / par.alpha * par.alpha - 1.0}, 1e-9));
}

TEST_CASE("boundary_line rejects invalid indices") {
    Params par = make_params(2.5);
    CHECK_THROWS_AS(boundary_line({Family::scrL_k2, 4, false}, par), domain_error);
    CHECK_THROWS_AS(boundary_line({Family::scrL_k, 1, false}, par), domain_error);
    CHECK_THROWS_AS(boundary_line({Family::bdS, 5, false}, par), domain_error);
}

TEST_CASE("return-time oracle basics") {
    Params par = make_params(2.8);
    auto r1 = return_time_oracle({0.05, 0.05}, MapId::F, 100, par);
    REQUIRE(r1.has_value());
    CHECK(*r1 == 1);

    // point of the period-2 segment L_2 (x in (1/2 + 1/a, 1)) never hits S
    auto r2 = return_time_oracle({0.9, par.half_width()}, MapId::F, 20000, par);
    CHECK_FALSE(r2.has_value());

    // deep in the secondary family near p2: odd return time >= 3
    Vec2 p{0.001, par.half_width() - 0.001};
    auto r3 = return_time_oracle({p.x, p.y}, MapId::F, 20000, par);
    REQUIRE(r3.has_value());
    CHECK(*r3 % 2 == 1);
    CHECK(*r3 >= 3);
    CHECK(*r3 == f_return_by_hand(p, par, 20000));

    CHECK_THROWS_AS(return_time_oracle({0.8, 0.8}, MapId::F, 10, par), domain_error);
}

TEST_CASE("build_partition constructs the documented cells") {
    Params par = make_params(2.8);
    Partition part = build_partition(MapId::F, 15, par);
    const double w = par.inv_alpha;
    CHECK(part.cells.size() == 41);

    // A2 is the band quadrilateral through p2 and p2*
    const PartitionCell* a2 = part.find({Side::F, 2, false, false});
    REQUIRE(a2 != nullptr);
    REQUIRE(a2->poly.size() == 4);
    auto has_vertex = [&](const Polygon& poly, Vec2 v) {
        for (const Vec2& u : poly.v)
            if ((u - v).norm() < 1e-10) return true;
        return false;
    };
    CHECK(has_vertex(a2->poly, {0.0, par.half_width()}));
    CHECK(has_vertex(a2->poly, {w, y_meet(2, par)}));
    CHECK(has_vertex(a2->poly, {w, par.half_width()}));
    CHECK(has_vertex(a2->poly, {0.0, 0.5 * (w + w * w)}));
    auto rt = return_time_oracle({a2->poly.centroid().x, a2->poly.centroid().y}, MapId::F, 100, par);
    REQUIRE(rt.has_value());
    CHECK(*rt == 2);

    const PartitionCell* a1 = part.find({Side::F, 1, false, false});
    REQUIRE(a1 != nullptr);
    CHECK(has_vertex(a1->poly, {0.0, w * w}));

    const PartitionCell* a52 = part.find({Side::F, 5, true, false});
    REQUIRE(a52 != nullptr);
    CHECK(has_vertex(a52->poly, {0.0, Y_meet(5, par)}));
    CHECK(Y_meet(5, par) == Catch::Approx(0.1683673).margin(1e-7));
}

TEST_CASE("build_partition rejects bad inputs") {
    Params par = make_params(2.8);
    CHECK_THROWS_AS(build_partition(MapId::H, 15, par), domain_error);
    CHECK_THROWS_AS(build_partition(MapId::F, 4, par), domain_error);
    Params ext = make_params(3.2, DomainTag::extended);
    CHECK_THROWS_AS(build_partition(MapId::F, 15, ext), domain_error);
}

TEST_CASE("G-side cells are I3 images of the A-side") {
    Params par = make_params(2.5);
    Partition fpart = build_partition(MapId::F, 8, par);
    Partition gpart = build_partition(MapId::G, 8, par);
    const PartitionCell* a4 = fpart.find({Side::F, 4, false, false});
    const PartitionCell* b4 = gpart.find({Side::G, 4, false, false});
    REQUIRE(a4);
    REQUIRE(b4);
    for (const Vec2& v : a4->poly.v) {
        Vec2 img{v.y, par.inv_alpha - v.x};
        bool found = false;
        for (const Vec2& u : b4->poly.v) found = found || (u - img).norm() < 1e-12;
        CHECK(found);
    }
    // B-cell return times under G agree
    auto rt = return_time_oracle({b4->poly.centroid().x, b4->poly.centroid().y}, MapId::G, 100, par);
    REQUIRE(rt.has_value());
    CHECK(*rt == 4);
}

TEST_CASE("cells have constant oracle return time inside") {
    for (double alpha : {2.15, 2.8}) {
        Params par = make_params(alpha);
        Partition part = build_partition(MapId::F, 12, par);
        Rng rng(31);
        for (const auto& c : part.cells) {
            for (int i = 0; i < 20; ++i) {
                Vec2 p = random_interior_point(c.poly, rng);
                auto rt = return_time_oracle({p.x, p.y}, MapId::F, 64 * 12 + 64, par);
                REQUIRE(rt.has_value());
                CHECK(*rt == c.label.k);
            }
        }
    }
}

TEST_CASE("scrL_k maps onto the left boundary after k steps") {
    Params par = make_params(2.8);
    for (int k : {3, 5, 9}) {
        PartitionCell cell = make_cell({Side::F, k, false, false}, par);
        Line lk = boundary_line({Family::scrL_k, k, false}, par);
        std::vector<Vec2> edge;
        for (const Vec2& v : cell.poly.v)
            if (lk.contains(v, 1e-9)) edge.push_back(v);
        REQUIRE(edge.size() == 2);
        for (int i = 1; i < 100; ++i) {
            Vec2 p = lerp(edge[0], edge[1], i / 100.0);
            TorusPoint img = apply_map(MapId::F, k, {p.x, p.y}, par);
            CHECK(circle_dist(img.x, 0.0) < 1e-9);
        }
    }
}

TEST_CASE("scrL_k^2 maps onto the right boundary after k steps") {
    Params par = make_params(2.8);
    for (int k : {5, 7}) {
        PartitionCell cell = make_cell({Side::F, k, true, false}, par);
        Line lk2 = boundary_line({Family::scrL_k2, k, false}, par);
        std::vector<Vec2> edge;
        for (const Vec2& v : cell.poly.v)
            if (lk2.contains(v, 1e-9)) edge.push_back(v);
        REQUIRE(edge.size() == 2);
        for (int i = 1; i < 100; ++i) {
            Vec2 p = lerp(edge[0], edge[1], i / 100.0);
            TorusPoint img = apply_map(MapId::F, k, {p.x, p.y}, par);
            CHECK(circle_dist(img.x, par.inv_alpha) < 1e-9);
        }
    }
}

TEST_CASE("scrL maps onto the right boundary after one step") {
    Params par = make_params(2.15);
    double w = par.inv_alpha;
    for (int i = 1; i < 100; ++i) {
        double y = (i / 100.0) * w * w;
        TorusPoint img = apply_map(MapId::F, 1, {w - par.alpha * y, y}, par);
        CHECK(circle_dist(img.x, w) < 1e-9);
    }
}

TEST_CASE("scrI_k maps onto the top boundary under G^k") {
    // I3-transported preimage property
    Params par = make_params(2.8);
    for (int k : {3, 4}) {
        PartitionCell bcell = make_cell({Side::G, k, false, false}, par);
        Line ik = boundary_line({Family::scrI_k, k, false}, par);
        std::vector<Vec2> edge;
        for (const Vec2& v : bcell.poly.v)
            if (ik.contains(v, 1e-9)) edge.push_back(v);
        REQUIRE(edge.size() == 2);
        for (int i = 1; i < 100; ++i) {
            Vec2 p = lerp(edge[0], edge[1], i / 100.0);
            TorusPoint img = apply_map(MapId::G, k, {p.x, p.y}, par);
            CHECK(circle_dist(img.y, par.inv_alpha) < 1e-9);
        }
    }
}

TEST_CASE("scrL_k^2 meets bdS1 at Y_k and scrL_2 at Y_(k-2)") {
    for (double alpha : {2.15, 2.5, 2.8}) {
        Params par = make_params(alpha);
        for (int k : {5, 7, 9, 11}) {
            Line lk2 = boundary_line({Family::scrL_k2, k, false}, par);
            auto s1 = line_intersect(lk2, boundary_line({Family::bdS, 1, false}, par));
            REQUIRE(s1.has_value());
            CHECK(s1->y == Catch::Approx(Y_meet(k, par)).margin(1e-12));
            auto l2 = line_intersect(lk2, boundary_line({Family::scrL_k, 2, false}, par));
            REQUIRE(l2.has_value());
            CHECK(l2->y == Catch::Approx(Y_meet(k - 2, par)).margin(1e-12));
            CHECK(l2->x == Catch::Approx((alpha - 2.0) / ((k - 2) * alpha)).margin(1e-12));
        }
    }
}

TEST_CASE("classification of known points") {
    Params par = make_params(2.8);
    Partition part = build_partition(MapId::F, 15, par);

    const PartitionCell* a3 = part.find({Side::F, 3, false, false});
    REQUIRE(a3);
    ClassifyResult c = classify(a3->poly.centroid(), part);
    REQUIRE(c.kind == ClassifyKind::Cell);
    CHECK(c.cell->label.str() == "A3");

    ClassifyResult c2 = classify({0.05, 0.05}, part);
    REQUIRE(c2.kind == ClassifyKind::Cell);
    CHECK(c2.cell->label.str() == "A1");
    auto rt = return_time_oracle({0.05, 0.05}, MapId::F, 100, par);
    CHECK(*rt == c2.cell->label.k);

    // accumulation point p2 sits on the singularity closure
    ClassifyResult c3 = classify({0.0, par.half_width()}, part);
    CHECK(c3.kind != ClassifyKind::Cell);

    CHECK_THROWS_AS(classify({0.9, 0.9}, part), domain_error);
}

TEST_CASE("starred symmetry of classification") {
    Params par = make_params(2.5);
    Partition part = build_partition(MapId::F, 15, par);
    Rng rng(37);
    int checked = 0;
    while (checked < 1000) {
        Vec2 p{rng.uniform(0.0, par.inv_alpha), rng.uniform(0.0, par.inv_alpha)};
        ClassifyResult c = classify(p, part);
        Vec2 ps{par.inv_alpha - p.x, par.inv_alpha - p.y};
        ClassifyResult cs = classify(ps, part);
        if (c.kind != ClassifyKind::Cell || cs.kind != ClassifyKind::Cell) continue;
        ++checked;
        CellLabel expect = c.cell->label;
        if (expect.k != 2) expect.starred = !expect.starred;
        CHECK(cs.cell->label == expect);
    }
}

TEST_CASE("locate_cell agrees with polygon membership") {
    Params par = make_params(2.3);
    Partition part = build_partition(MapId::F, 15, par);
    Rng rng(53);
    for (int i = 0; i < 2000; ++i) {
        Vec2 p{rng.uniform(0.0, par.inv_alpha), rng.uniform(0.0, par.inv_alpha)};
        ClassifyResult c = classify(p, part);
        if (c.kind != ClassifyKind::Cell) continue;
        auto lb = locate_cell(p, Side::F, par);
        REQUIRE(lb.has_value());
        CHECK(*lb == c.cell->label);
    }
}

TEST_CASE("validation against the oracle") {
    Params par = make_params(2.8);
    Partition part = build_partition(MapId::F, 15, par);
    ValidationReport rep = validate_partition(part, 10000, par, 42);
    CHECK(rep.disagreements.empty());
    CHECK(rep.agreement_fraction() == 1.0);
    CHECK(rep.checked + rep.boundary_flags + rep.tail_flags == rep.samples);
    CHECK(rep.tail_consistent == rep.tail_flags);

    ValidationReport empty = validate_partition(part, 0, par, 42);
    CHECK(empty.samples == 0);
    CHECK(empty.agreement_fraction() == 1.0);
}

TEST_CASE("tail wedges are small and reported") {
    Params par = make_params(2.8);
    Partition part = build_partition(MapId::F, 15, par);
    CHECK(part.tails.size() == 4);
    CHECK(part.tail_area > 0.0);
    CHECK(part.tail_area < 0.01 * par.inv_alpha * par.inv_alpha);  // < 1% of |S|
}

TEST_CASE("partition CSV export") {
    Params par = make_params(2.5);
    Partition part = build_partition(MapId::F, 8, par);
    std::ostringstream os;
    export_partition_csv(part, os);
    std::string text = os.str();
    CHECK(text.find("# alpha=2.5") != std::string::npos);
    CHECK(text.find("label,k,vertices") != std::string::npos);
    size_t rows = 0;
    for (char ch : text)
        if (ch == '\n') ++rows;
    CHECK(rows == part.cells.size() + 2);
}

TEST_CASE("oracle equivalence holds at a low shear too") {
    Params par = make_params(2.15);
    Partition part = build_partition(MapId::F, 15, par);
    ValidationReport rep = validate_partition(part, 10000, par, 7);
    CHECK(rep.disagreements.empty());
}
