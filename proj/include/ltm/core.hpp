#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace ltm {

// Tolerances used across the library.
inline constexpr double kSnapTol = 1e-13;      // mod-1 snap of values within this of 1
inline constexpr double kBoundaryTol = 1e-11;  // annulus-boundary ambiguity band (Jacobians)
inline constexpr double kGeoTol = 1e-10;       // geometric predicate tolerance

struct domain_error : std::runtime_error {
    explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct singular_orbit : std::runtime_error {
    explicit singular_orbit(const std::string& msg) : std::runtime_error(msg) {}
};

enum class DomainTag { strict, extended };

// Shear strength alpha with its derived constants. L is the negative root of
// L^2 + alpha*L + 1 = 0, so -1 < L < 0 for alpha > 2 and L*(alpha+L) = -1.
struct Params {
    double alpha = 0.0;
    double inv_alpha = 0.0;  // width of the annuli P, Q
    double L = 0.0;          // cone boundary slope
    DomainTag domain_tag = DomainTag::strict;

    double half_width() const { return 0.5 * inv_alpha; }  // 1/(2*alpha)
    bool strict() const { return domain_tag == DomainTag::strict; }
};

inline Params make_params(double alpha, DomainTag tag = DomainTag::strict) {
    if (!(alpha > 2.0))
        throw domain_error("alpha must exceed 2 (hyperbolicity is lost at alpha = 2)");
    if (tag == DomainTag::strict && !(alpha < 3.0))
        throw domain_error("alpha must lie in (2,3) in strict mode; pass DomainTag::extended to override");
    Params p;
    p.alpha = alpha;
    p.inv_alpha = 1.0 / alpha;
    p.L = 0.5 * (-alpha + std::sqrt(alpha * alpha - 4.0));
    p.domain_tag = tag;
    return p;
}

// Canonical representative in [0,1); values within kSnapTol of 1 snap to 0 so
// orbit coordinates do not drift across repeated reductions.
inline double mod1(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0 - kSnapTol) r = 0.0;
    return r;
}

struct TorusPoint {
    double x = 0.0;
    double y = 0.0;
};

inline TorusPoint reduce(TorusPoint p) { return {mod1(p.x), mod1(p.y)}; }

inline bool in_P(const TorusPoint& p, const Params& par) { return p.y <= par.inv_alpha; }
inline bool in_Q(const TorusPoint& p, const Params& par) { return p.x <= par.inv_alpha; }
inline bool in_S(const TorusPoint& p, const Params& par) { return in_P(p, par) && in_Q(p, par); }
inline bool in_R(const TorusPoint& p, const Params& par) { return in_P(p, par) || in_Q(p, par); }

// Distance of a circle coordinate to the cut points {0, w} of an annulus.
inline double annulus_boundary_dist(double coord, double w) {
    double d = std::min(coord, std::abs(coord - w));
    return std::min(d, 1.0 - coord);
}

inline double circle_dist(double a, double b) {
    double d = std::abs(mod1(a) - mod1(b));
    return std::min(d, 1.0 - d);
}

// Sup-norm distance in the torus metric.
inline double torus_dist(const TorusPoint& a, const TorusPoint& b) {
    return std::max(circle_dist(a.x, b.x), circle_dist(a.y, b.y));
}

struct Mat2 {
    // row-major: [[a, b], [c, d]]
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    void apply(double& vx, double& vy) const {
        double nx = a * vx + b * vy;
        double ny = c * vx + d * vy;
        vx = nx;
        vy = ny;
    }
};

inline Mat2 shear_F(double alpha) { return {1.0, alpha, 0.0, 1.0}; }    // DF on P
inline Mat2 shear_G(double alpha) { return {1.0, 0.0, -alpha, 1.0}; }   // DG on Q
inline Mat2 shear_F_inv(double alpha) { return {1.0, -alpha, 0.0, 1.0}; }
inline Mat2 shear_G_inv(double alpha) { return {1.0, 0.0, alpha, 1.0}; }

enum class MapId { F, G, H, Hinv, calH };

namespace detail {

inline TorusPoint f_step(TorusPoint p, const Params& par) {
    if (in_P(p, par)) p.x = mod1(p.x + par.alpha * p.y);
    return p;
}
inline TorusPoint f_inv_step(TorusPoint p, const Params& par) {
    if (in_P(p, par)) p.x = mod1(p.x - par.alpha * p.y);
    return p;
}
inline TorusPoint g_step(TorusPoint p, const Params& par) {
    if (in_Q(p, par)) p.y = mod1(p.y - par.alpha * p.x);
    return p;
}
inline TorusPoint g_inv_step(TorusPoint p, const Params& par) {
    if (in_Q(p, par)) p.y = mod1(p.y + par.alpha * p.x);
    return p;
}

// One forward application of the map; H = G∘F shares the F and G code paths.
inline TorusPoint map_step(MapId map, TorusPoint p, const Params& par) {
    switch (map) {
        case MapId::F: return f_step(p, par);
        case MapId::G: return g_step(p, par);
        case MapId::H: return g_step(f_step(p, par), par);
        case MapId::Hinv: return f_inv_step(g_inv_step(p, par), par);
        case MapId::calH: return f_step(g_step(p, par), par);
    }
    return p;
}

inline TorusPoint map_step_inv(MapId map, TorusPoint p, const Params& par) {
    switch (map) {
        case MapId::F: return f_inv_step(p, par);
        case MapId::G: return g_inv_step(p, par);
        case MapId::H: return f_inv_step(g_inv_step(p, par), par);
        case MapId::Hinv: return g_step(f_step(p, par), par);
        case MapId::calH: return g_inv_step(f_inv_step(p, par), par);
    }
    return p;
}

}  // namespace detail

inline TorusPoint apply_map(MapId map, long power, TorusPoint p, const Params& par) {
    p = reduce(p);
    if (!in_R(p, par)) throw domain_error("apply_map: point outside R = P ∪ Q");
    if (power >= 0) {
        for (long i = 0; i < power; ++i) p = detail::map_step(map, p, par);
    } else {
        for (long i = 0; i < -power; ++i) p = detail::map_step_inv(map, p, par);
    }
    return p;
}

namespace detail {

inline void require_P_unambiguous(const TorusPoint& p, const Params& par) {
    if (annulus_boundary_dist(p.y, par.inv_alpha) < kBoundaryTol)
        throw singular_orbit("orbit point within the ambiguity band of ∂P");
}
inline void require_Q_unambiguous(const TorusPoint& p, const Params& par) {
    if (annulus_boundary_dist(p.x, par.inv_alpha) < kBoundaryTol)
        throw singular_orbit("orbit point within the ambiguity band of ∂Q");
}

inline Mat2 f_jac(TorusPoint& p, const Params& par) {
    require_P_unambiguous(p, par);
    Mat2 j = in_P(p, par) ? shear_F(par.alpha) : Mat2{};
    p = f_step(p, par);
    return j;
}
inline Mat2 f_inv_jac(TorusPoint& p, const Params& par) {
    require_P_unambiguous(p, par);
    Mat2 j = in_P(p, par) ? shear_F_inv(par.alpha) : Mat2{};
    p = f_inv_step(p, par);
    return j;
}
inline Mat2 g_jac(TorusPoint& p, const Params& par) {
    require_Q_unambiguous(p, par);
    Mat2 j = in_Q(p, par) ? shear_G(par.alpha) : Mat2{};
    p = g_step(p, par);
    return j;
}
inline Mat2 g_inv_jac(TorusPoint& p, const Params& par) {
    require_Q_unambiguous(p, par);
    Mat2 j = in_Q(p, par) ? shear_G_inv(par.alpha) : Mat2{};
    p = g_inv_step(p, par);
    return j;
}

inline Mat2 step_jac(MapId map, TorusPoint& p, const Params& par) {
    switch (map) {
        case MapId::F: return f_jac(p, par);
        case MapId::G: return g_jac(p, par);
        case MapId::H: {
            Mat2 jf = f_jac(p, par);
            Mat2 jg = g_jac(p, par);
            return jg * jf;
        }
        case MapId::Hinv: {
            Mat2 jg = g_inv_jac(p, par);
            Mat2 jf = f_inv_jac(p, par);
            return jf * jg;
        }
        case MapId::calH: {
            Mat2 jg = g_jac(p, par);
            Mat2 jf = f_jac(p, par);
            return jf * jg;
        }
    }
    return {};
}

}  // namespace detail

// Product of the per-step shear matrices along the first n steps of the orbit.
// Throws singular_orbit if any iterate is boundary-ambiguous.
inline Mat2 jacobian_along_orbit(MapId map, int n, TorusPoint p, const Params& par) {
    if (n < 1) throw domain_error("jacobian_along_orbit: n must be >= 1");
    p = reduce(p);
    if (!in_R(p, par)) throw domain_error("jacobian_along_orbit: point outside R");
    Mat2 acc;
    for (int i = 0; i < n; ++i) acc = detail::step_jac(map, p, par) * acc;
    return acc;
}

// The four symmetry transformations of §-style case analysis:
//   I1(x,y) = (1/a - x, 1/a - y),  I2(x,y) = (x, 1/a - y),
//   I3(x,y) = (y, 1/a - x),        I4(x,y) = (y, x),
// coordinates mod 1. I1, I2, I4 are involutions; I3^2 = I1.
inline TorusPoint involution(int i, TorusPoint p, const Params& par) {
    p = reduce(p);
    if (!in_R(p, par)) throw domain_error("involution: point outside R");
    const double w = par.inv_alpha;
    switch (i) {
        case 1: return {mod1(w - p.x), mod1(w - p.y)};
        case 2: return {p.x, mod1(w - p.y)};
        case 3: return {p.y, mod1(w - p.x)};
        case 4: return {p.y, p.x};
        default: throw domain_error("involution: index must be in 1..4");
    }
}

enum class Relation { a, b, c, d, e };

// Residual of the commutation relation at p for the given power:
//   (a) I1 ∘ F^n = F^n ∘ I1 and likewise for G,
//   (b) I2 ∘ G^n = G^-n ∘ I2,
//   (c) I3 ∘ F^n = G^n ∘ I3,
//   (d) I3 ∘ H^n = calH^n ∘ I3,
//   (e) I4 ∘ H^n = H^-n ∘ I4.
inline double check_relation(Relation rel, TorusPoint p, long power, const Params& par) {
    const long n = power;
    switch (rel) {
        case Relation::a: {
            double rf = torus_dist(involution(1, apply_map(MapId::F, n, p, par), par),
                                   apply_map(MapId::F, n, involution(1, p, par), par));
            double rg = torus_dist(involution(1, apply_map(MapId::G, n, p, par), par),
                                   apply_map(MapId::G, n, involution(1, p, par), par));
            return std::max(rf, rg);
        }
        case Relation::b:
            return torus_dist(involution(2, apply_map(MapId::G, n, p, par), par),
                              apply_map(MapId::G, -n, involution(2, p, par), par));
        case Relation::c:
            return torus_dist(involution(3, apply_map(MapId::F, n, p, par), par),
                              apply_map(MapId::G, n, involution(3, p, par), par));
        case Relation::d:
            return torus_dist(involution(3, apply_map(MapId::H, n, p, par), par),
                              apply_map(MapId::calH, n, involution(3, p, par), par));
        case Relation::e:
            return torus_dist(involution(4, apply_map(MapId::H, n, p, par), par),
                              apply_map(MapId::H, -n, involution(4, p, par), par));
    }
    return 0.0;
}

}  // namespace ltm
