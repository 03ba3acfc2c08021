#pragma once

#include <cmath>
#include <optional>

#include "ltm/core.hpp"
#include "ltm/expansion.hpp"
#include "ltm/families.hpp"
#include "ltm/geometry.hpp"

namespace ltm {

struct orbit_pattern_mismatch : domain_error {
    explicit orbit_pattern_mismatch(const std::string& msg) : domain_error(msg) {}
};

// Period-4 point of H with its composed derivative, eigen-data, the region M
// of constant DH^4, and the local manifolds clipped to M and H^4(M).
struct PeriodicData {
    Vec2 z_p;
    Mat2 DH4;  // composed along the orbit, never transcribed
    double composed_top_right = 0.0;
    double printed_top_right = 0.0;  // the published value, recorded for comparison only
    double lambda_plus = 0.0, lambda_minus = 0.0;
    double g_plus = 0.0, g_minus = 0.0;  // eigenvector slopes, directions (1, g)
    Polygon M;
    Polygon H4M;
    Segment gamma_u{Vec2{0.0, 0.0}, Vec2{1.0, 1.0}};
    Segment gamma_s{Vec2{0.0, 0.0}, Vec2{1.0, 1.0}};

    Vec2 h4(const Vec2& z) const {  // the affine branch of H^4 on M
        double dx = z.x - z_p.x, dy = z.y - z_p.y;
        return {z_p.x + DH4.a * dx + DH4.b * dy, z_p.y + DH4.c * dx + DH4.d * dy};
    }
};

// Closed-form eigenvector slopes, used only as a cross-check of the composed
// matrix (tests compare after rationalization).
inline std::pair<double, double> g_closed_form(const Params& par) {
    const double a = par.alpha;
    double a2 = a * a, a4 = a2 * a2, a6 = a4 * a2;
    double rad = std::sqrt(9.0 * a6 - 48.0 * a4 + 76.0 * a2 - 32.0);
    double num = 4.0 - 2.0 * a2;
    double den = 3.0 * a2 * a - 6.0 * a;
    return {num / (den - rad), num / (den + rad)};
}

namespace detail {

inline Polygon affine_preimage(const Polygon& poly, double shear_k_alpha, double wrap, Side side) {
    // inverse of the F-side branch (x,y)->(x+ka*y-w, y) or G-side (x,y)->(x, y-ka*x+w)
    Polygon out;
    out.v.reserve(poly.v.size());
    for (const Vec2& p : poly.v) {
        if (side == Side::F)
            out.v.push_back({p.x - shear_k_alpha * p.y + wrap, p.y});
        else
            out.v.push_back({p.x, p.y + shear_k_alpha * p.x - wrap});
    }
    out.orient_ccw();
    return out;
}

inline Segment long_chord(const Vec2& through, double slope) {
    Vec2 dir{1.0, slope};
    double n = dir.norm();
    dir = {dir.x / n, dir.y / n};
    return Segment(through - dir * 2.0, through + dir * 2.0);
}

}  // namespace detail

inline PeriodicData periodic_point(const Params& par) {
    const double a = par.alpha;
    if (!(a > std::sqrt(8.0 / 5.0)))
        throw domain_error("periodic_point: DH^4 is hyperbolic only for alpha > sqrt(8/5)");

    PeriodicData pd;
    pd.z_p = periodic_point_location(par);

    // the orbit must run A3 -> (F^3) B1* -> (G) A1* -> (F) B1 -> (G) back
    PartitionCell A3 = make_cell({Side::F, 3, false, false}, par);
    PartitionCell A1s = make_cell({Side::F, 1, false, true}, par);
    PartitionCell B1 = make_cell({Side::G, 1, false, false}, par);
    PartitionCell B1s = make_cell({Side::G, 1, false, true}, par);

    TorusPoint z{pd.z_p.x, pd.z_p.y};
    TorusPoint f3 = apply_map(MapId::F, 3, z, par);
    TorusPoint gf3 = apply_map(MapId::G, 1, f3, par);
    TorusPoint fgf3 = apply_map(MapId::F, 1, gf3, par);
    auto inside = [](const PartitionCell& c, const TorusPoint& p) {
        return c.poly.contains({p.x, p.y}, kGeoTol);
    };
    if (!inside(A3, z) || !inside(B1s, f3) || !inside(A1s, gf3) || !inside(B1, fgf3))
        throw orbit_pattern_mismatch("periodic_point: orbit does not follow A3,B1*,A1*,B1");

    pd.DH4 = jacobian_along_orbit(MapId::H, 4, z, par);
    pd.composed_top_right = pd.DH4.b;
    pd.printed_top_right = 3.0 * a * a * a + 4.0 * a;

    double tr = pd.DH4.trace();
    double disc = tr * tr - 4.0;
    if (disc <= 0.0) throw domain_error("periodic_point: DH^4 not hyperbolic");
    pd.lambda_plus = 0.5 * (tr + std::sqrt(disc));
    pd.lambda_minus = 0.5 * (tr - std::sqrt(disc));
    pd.g_plus = (pd.lambda_plus - pd.DH4.a) / pd.DH4.b;
    pd.g_minus = (pd.lambda_minus - pd.DH4.a) / pd.DH4.b;

    // M = F^-3( G^-1( F^-1(B1) ∩ A1* ) ∩ B1* ) ∩ A3, all branches affine
    Polygon W = detail::affine_preimage(B1.poly, a, 1.0, Side::F);       // F on A1* wraps once
    W = clip_polygon(W, A1s.poly);
    W = detail::affine_preimage(W, a, 1.0, Side::G);                     // G on B1* wraps once
    W = clip_polygon(W, B1s.poly);
    W = detail::affine_preimage(W, 3.0 * a, 1.0, Side::F);               // F^3 on A3 wraps once
    pd.M = clip_polygon(W, A3.poly);
    if (pd.M.empty()) throw domain_error("periodic_point: empty region M");
    if (!pd.M.contains(pd.z_p, kGeoTol))
        throw domain_error("periodic_point: z_p not inside M");

    Polygon img;
    img.v.reserve(pd.M.v.size());
    for (const Vec2& v : pd.M.v) img.v.push_back(pd.h4(v));
    img.orient_ccw();
    pd.H4M = img;

    auto gs = clip_segment_to_polygon(detail::long_chord(pd.z_p, pd.g_minus), pd.M);
    auto gu = clip_segment_to_polygon(detail::long_chord(pd.z_p, pd.g_plus), pd.H4M);
    if (!gs || !gu) throw domain_error("periodic_point: manifold clipping failed");
    pd.gamma_s = *gs;
    pd.gamma_u = *gu;
    return pd;
}

// Intersection of gamma_s with the slope-1/L line through scrL_5^2 ∩ scrL_2;
// the lowest point of gamma_s reachable by a cone segment meeting scrL_5^2.
inline double y_m(const Params& par, const PeriodicData& pd) {
    Vec2 q{(par.alpha - 2.0) / (3.0 * par.alpha), Y_meet(3, par)};
    Line gs = Line::point_slope(pd.z_p, pd.g_minus);
    Line cap = Line::point_slope(q, 1.0 / par.L);
    auto pt = line_intersect(gs, cap);
    if (!pt) throw domain_error("y_m: parallel construction lines");
    return pt->y;
}

// The displayed fraction for y_m, used as a cross-check only.
inline double y_m_closed(const Params& par, const PeriodicData& pd) {
    double qx = (par.alpha - 2.0) / (3.0 * par.alpha);
    double Y3 = Y_meet(3, par);
    double g = pd.g_minus;
    return (g * (qx - pd.z_p.x - par.L * Y3) + pd.z_p.y) / (1.0 - par.L * g);
}

// Base-case margin of the growth estimate (traversal of A_5^2): positive for
// alpha past the alpha7 threshold.
inline double base_case_margin(const Params& par, const PeriodicData& pd) {
    double E2 = expansion_factor(2, par);
    double E5 = expansion_factor(5, par);
    double slack = par.half_width() - y_m(par, pd);
    return (Y_meet(5, par) - Y_meet(3, par)) * E5 - slack / (1.0 - 1.0 / E2);
}

}  // namespace ltm
