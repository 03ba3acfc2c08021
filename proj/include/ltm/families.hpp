#pragma once

#include <cmath>
#include <string>

#include "ltm/core.hpp"
#include "ltm/geometry.hpp"

namespace ltm {

// Singularity-line families of the F-return map and friends. Constants below
// use the working coordinate u_k(x,y) = x + k*alpha*y, in which
//   scrL     : u_1 = 1/a            (F^-1 ∂S2)
//   scrL_k   : u_k = 1              (F^-k ∂S1), k >= 2
//   scrL_k2  : u_k = (k-1)/2 + 1/a  (F^-k ∂S2), odd k >= 3
// and starred variants are I1-images.
enum class Family { scrL, scrL_k, scrL_k2, scrI, scrI_k, bdS, M1, M2, tilde_scrL, bar_scrL, L2star_image };

struct LineSpec {
    Family family = Family::scrL;
    int k = 0;  // family index, or boundary index 1..4 for bdS
    bool starred = false;
};

// Meeting height of scrL_k with ∂S2: y_k = (1/k)(1/a - 1/a^2).
inline double y_meet(int k, const Params& par) {
    return (par.inv_alpha - par.inv_alpha * par.inv_alpha) / k;
}

// Meeting height of scrL_k2 with ∂S1: Y_k = ((k-1)a + 2) / (2 k a^2).
inline double Y_meet(int k, const Params& par) {
    double a = par.alpha;
    return ((k - 1) * a + 2.0) / (2.0 * k * a * a);
}

inline double y_bar(const Params& par) {
    double a = par.alpha;
    return (a - 1.0) / (2.0 * a * a - a);
}
inline double x_bar(const Params& par) { return par.inv_alpha - par.alpha * y_bar(par); }

// Period-4 point of H inside A3.
inline Vec2 periodic_point_location(const Params& par) {
    double a = par.alpha;
    double den = 3.0 * a * a * a - 8.0 * a;
    return {(2.0 * a - 4.0) / den, (a * a + a - 4.0) / den};
}

// DF·DG·DF^3, the derivative of the first seven H-steps along the orbit of
// the period-4 point (all but the final G).
inline Mat2 dfdgdf3(const Params& par) {
    return shear_F(par.alpha) * shear_G(par.alpha) * Mat2{1.0, 3.0 * par.alpha, 0.0, 1.0};
}

namespace detail {

inline Line i1_image(const Line& base, const Params& par) {
    // transform two points of the base line through I1 (affine on the S chart)
    const double w = par.inv_alpha;
    Vec2 p, q;
    if (std::abs(base.b) > 0.5) {
        p = {0.0, (base.c - base.a * 0.0) / base.b};
        q = {w, (base.c - base.a * w) / base.b};
    } else {
        p = {(base.c - base.b * 0.0) / base.a, 0.0};
        q = {(base.c - base.b * w) / base.a, w};
    }
    return Line::through({w - p.x, w - p.y}, {w - q.x, w - q.y});
}

}  // namespace detail

inline Line boundary_line(const LineSpec& spec, const Params& par) {
    const double a = par.alpha;
    const double w = par.inv_alpha;
    Line base;
    switch (spec.family) {
        case Family::scrL:
        case Family::tilde_scrL:
        case Family::bar_scrL:
            base = Line(1.0, a, w);
            break;
        case Family::scrL_k:
            if (spec.k < 2) throw domain_error("scrL_k requires k >= 2");
            base = Line(1.0, spec.k * a, 1.0);
            break;
        case Family::scrL_k2:
            if (spec.k < 3 || spec.k % 2 == 0) throw domain_error("scrL_k2 requires odd k >= 3");
            base = Line(1.0, spec.k * a, 0.5 * (spec.k - 1) + w);
            break;
        case Family::scrI:
            base = Line(a, -1.0, 0.0);
            break;
        case Family::scrI_k:
            if (spec.k < 2) throw domain_error("scrI_k requires k >= 2");
            base = Line(spec.k * a, -1.0, 1.0 - w);
            break;
        case Family::bdS:
            switch (spec.k) {
                case 1: base = Line(1.0, 0.0, 0.0); break;
                case 2: base = Line(1.0, 0.0, w); break;
                case 3: base = Line(0.0, 1.0, 0.0); break;
                case 4: base = Line(0.0, 1.0, w); break;
                default: throw domain_error("bdS index must be 1..4");
            }
            break;
        case Family::L2star_image:
            // left boundary line of G^2(B2): y = 1 - 2*alpha*x
            base = Line(2.0 * a, 1.0, 1.0);
            break;
        case Family::M1:
        case Family::M2: {
            // preimage lines of ∂S1 and scrI under DF·DG·DF^3 at the period-4 point
            Mat2 A = dfdgdf3(par);
            Vec2 zp = periodic_point_location(par);
            Vec2 wp{zp.x, zp.y + a * zp.x};  // G^-1 of the fixed point, in B1
            double cx = A.a * zp.x + A.b * zp.y - wp.x;
            double cy = A.c * zp.x + A.d * zp.y - wp.y;
            if (spec.family == Family::M1)
                base = Line(A.a, A.b, cx);
            else
                base = Line(a * A.a - A.c, a * A.b - A.d, a * cx - cy);
            break;
        }
    }
    if (spec.starred) base = detail::i1_image(base, par);
    return base;
}

// The bold sub-segment of scrL whose F^3-image spans from (0, y_2) to
// (3/a - 1, 1/a^2), used in the scrL-to-scrL_2 case analysis.
inline Segment tilde_scrL_segment(const Params& par) {
    double w = par.inv_alpha;
    return Segment({0.0, w * w}, {1.5 * w - 0.5, y_meet(2, par)});
}

// Remaining sub-segment of scrL with y >= y_bar, endpoints (0,1/a^2), (x_bar,y_bar).
inline Segment bar_scrL_segment(const Params& par) {
    double w = par.inv_alpha;
    return Segment({0.0, w * w}, {x_bar(par), y_bar(par)});
}

enum class AccumulationId { p1, p1s, p2, p2s, q1, q1s, q2, q2s };

inline Vec2 accumulation_point(AccumulationId id, const Params& par) {
    const double w = par.inv_alpha;
    const double h = 0.5 * w;
    switch (id) {
        case AccumulationId::p1: return {w, 0.0};
        case AccumulationId::p1s: return {0.0, w};
        case AccumulationId::p2: return {0.0, h};
        case AccumulationId::p2s: return {w, h};
        case AccumulationId::q1: return {0.0, 0.0};
        case AccumulationId::q1s: return {w, w};
        case AccumulationId::q2: return {h, w};
        case AccumulationId::q2s: return {h, 0.0};
    }
    return {};
}

// ---------------------------------------------------------------------------
// Return-time cells.

enum class Side { F, G };  // A-cells (returns under F) vs B-cells (under G)

struct CellLabel {
    Side side = Side::F;
    int k = 0;              // return time
    bool secondary = false; // the A_k^2 family accumulating at p2
    bool starred = false;

    std::string str() const {
        std::string s(1, side == Side::F ? 'A' : 'B');
        s += std::to_string(k);
        if (secondary) s += "^2";
        if (starred) s += "*";
        return s;
    }
    bool operator==(const CellLabel& o) const {
        return side == o.side && k == o.k && secondary == o.secondary && starred == o.starred;
    }
};

namespace detail {

inline Polygon s_square(const Params& par) {
    double w = par.inv_alpha;
    return Polygon({{0.0, 0.0}, {w, 0.0}, {w, w}, {0.0, w}});
}

// u_k functional as a Line, constant c: x + k*alpha*y = c
inline Line u_line(int k, double c, const Params& par) { return Line(1.0, k * par.alpha, c); }

inline Polygon i1_image(const Polygon& poly, const Params& par) {
    const double w = par.inv_alpha;
    Polygon out;
    out.v.reserve(poly.v.size());
    for (const Vec2& p : poly.v) out.v.push_back({w - p.x, w - p.y});
    out.orient_ccw();
    return out;
}

inline Polygon i3_image(const Polygon& poly, const Params& par) {
    const double w = par.inv_alpha;
    Polygon out;
    out.v.reserve(poly.v.size());
    for (const Vec2& p : poly.v) out.v.push_back({p.y, w - p.x});
    out.orient_ccw();
    return out;
}

}  // namespace detail

// Convex polygon of the (unstarred, F-side) cell with return time k; starred
// cells are I1-images, B-cells I3-images. Valid for 2 < alpha < 3 and any k.
inline Polygon cell_polygon(const CellLabel& label, const Params& par) {
    using detail::s_square;
    using detail::u_line;
    if (!par.strict()) throw domain_error("cell_polygon: strict parameter mode required");
    const double w = par.inv_alpha;
    const int k = label.k;
    Polygon poly = s_square(par);
    if (label.secondary) {
        if (k < 5 || k % 2 == 0) throw domain_error("secondary cells need odd k >= 5");
        poly = clip_halfplane(poly, u_line(2, 1.0, par), -1);                        // below scrL_2
        poly = clip_halfplane(poly, u_line(k - 2, 0.5 * (k - 3) + w, par), +1);      // above scrL_(k-2)^2
        poly = clip_halfplane(poly, u_line(k, 0.5 * (k - 1) + w, par), -1);          // below scrL_k^2
        poly = clip_halfplane(poly, u_line(k, 0.5 * (k - 1), par), +1);              // lands past ∂S1
    } else {
        switch (k) {
            case 1:
                poly = clip_halfplane(poly, u_line(1, w, par), -1);
                break;
            case 2:
                poly = clip_halfplane(poly, u_line(2, 1.0, par), +1);
                poly = clip_halfplane(poly, u_line(2, 1.0 + w, par), -1);
                break;
            case 3:
                poly = clip_halfplane(poly, u_line(1, w, par), +1);
                poly = clip_halfplane(poly, u_line(2, 1.0, par), -1);
                poly = clip_halfplane(poly, u_line(3, 1.0, par), +1);
                poly = clip_halfplane(poly, u_line(3, 1.0 + w, par), -1);
                break;
            default:
                if (k < 4) throw domain_error("cell_polygon: invalid k");
                poly = clip_halfplane(poly, u_line(1, w, par), +1);
                poly = clip_halfplane(poly, u_line(k - 1, 1.0, par), -1);
                poly = clip_halfplane(poly, u_line(k, 1.0, par), +1);
                poly = clip_halfplane(poly, u_line(k, 1.0 + w, par), -1);
                break;
        }
    }
    if (label.starred && k != 2) poly = detail::i1_image(poly, par);  // A2 is self-starred
    if (label.side == Side::G) poly = detail::i3_image(poly, par);
    if (poly.empty()) throw domain_error("cell_polygon: empty cell " + label.str());
    return poly;
}

// Integer wrap count of the working coordinate under the return branch:
// F-side branch is (x,y) -> (x + k*alpha*y - wrap, y). I1-conjugation turns a
// wrap-c branch into a wrap-(k-c) branch.
inline int cell_wrap(const CellLabel& label) {
    const int k = label.k;
    int base = label.secondary ? (k - 1) / 2 : (k == 1 ? 0 : 1);
    return label.starred ? k - base : base;
}

struct PartitionCell {
    CellLabel label;
    Polygon poly;
    int wrap = 0;

    // Return-map branch on this cell (F_S for A-cells, G_S for B-cells).
    Vec2 apply_return(const Vec2& p, const Params& par) const {
        double ka = label.k * par.alpha;
        if (label.side == Side::F) return {p.x + ka * p.y - wrap, p.y};
        return {p.x, p.y - ka * p.x + wrap};
    }
    Vec2 apply_return_inverse(const Vec2& p, const Params& par) const {
        double ka = label.k * par.alpha;
        if (label.side == Side::F) return {p.x - ka * p.y + wrap, p.y};
        return {p.x, p.y + ka * p.x - wrap};
    }
};

inline PartitionCell make_cell(const CellLabel& label, const Params& par) {
    return PartitionCell{label, cell_polygon(label, par), cell_wrap(label)};
}

}  // namespace ltm
