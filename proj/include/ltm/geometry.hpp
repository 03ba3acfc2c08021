#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "ltm/core.hpp"

namespace ltm {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline Vec2 lerp(const Vec2& a, const Vec2& b, double t) {
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

// Affine line {a*x + b*y = c}, normalized so a^2 + b^2 = 1 and the first
// nonzero of (a, b) is positive.
struct Line {
    double a = 0.0, b = 0.0, c = 0.0;

    Line() = default;
    Line(double a_, double b_, double c_) : a(a_), b(b_), c(c_) { normalize(); }

    static Line through(const Vec2& p, const Vec2& q) {
        // normal is perpendicular to q - p
        return Line(p.y - q.y, q.x - p.x, (p.y - q.y) * p.x + (q.x - p.x) * p.y);
    }
    static Line point_slope(const Vec2& p, double slope) {
        // y - p.y = slope (x - p.x)
        return Line(-slope, 1.0, p.y - slope * p.x);
    }
    static Line vertical(double x0) { return Line(1.0, 0.0, x0); }

    void normalize() {
        double n = std::hypot(a, b);
        if (n == 0.0) throw domain_error("Line: zero normal");
        a /= n;
        b /= n;
        c /= n;
        bool flip = (std::abs(a) > kGeoTol) ? (a < 0.0) : (b < 0.0);
        if (flip) {
            a = -a;
            b = -b;
            c = -c;
        }
    }

    // Signed distance; |eval| < kGeoTol means "on the line".
    double eval(const Vec2& p) const { return a * p.x + b * p.y - c; }
    bool contains(const Vec2& p, double tol = kGeoTol) const { return std::abs(eval(p)) <= tol; }
};

// Intersection point, or nullopt when the lines are parallel within tolerance.
inline std::optional<Vec2> line_intersect(const Line& l1, const Line& l2) {
    double det = l1.a * l2.b - l2.a * l1.b;
    if (std::abs(det) < 1e-12) return std::nullopt;
    return Vec2{(l1.c * l2.b - l2.c * l1.b) / det, (l1.a * l2.c - l2.a * l1.c) / det};
}

// Closed line segment in a fundamental-domain chart (endpoints not mod-1 reduced).
struct Segment {
    Vec2 p0, p1;
    Line parent;

    Segment(const Vec2& a, const Vec2& b) : p0(a), p1(b), parent(Line::through(a, b)) {
        if ((b - a).norm() < 1e-14) throw domain_error("Segment: degenerate endpoints");
    }

    Vec2 at(double t) const { return lerp(p0, p1, t); }
    Vec2 dir() const { return p1 - p0; }
    double length() const { return dir().norm(); }
    double ell_v() const { return std::abs(p1.y - p0.y); }  // height
    double ell_h() const { return std::abs(p1.x - p0.x); }  // width
    double diameter() const { return std::max(ell_v(), ell_h()); }
};

inline std::pair<double, double> segment_heights(const Segment& s) {
    return {s.ell_v(), s.ell_h()};
}

// Convex polygon, vertices counter-clockwise.
struct Polygon {
    std::vector<Vec2> v;

    Polygon() = default;
    explicit Polygon(std::vector<Vec2> verts) : v(std::move(verts)) {}

    size_t size() const { return v.size(); }
    bool empty() const { return v.size() < 3; }

    double area() const {
        double s = 0.0;
        for (size_t i = 0; i < v.size(); ++i) {
            const Vec2& p = v[i];
            const Vec2& q = v[(i + 1) % v.size()];
            s += p.cross(q);
        }
        return 0.5 * s;
    }

    Vec2 centroid() const {
        double s = 0.0;
        Vec2 c{0.0, 0.0};
        for (size_t i = 0; i < v.size(); ++i) {
            const Vec2& p = v[i];
            const Vec2& q = v[(i + 1) % v.size()];
            double w = p.cross(q);
            s += w;
            c.x += (p.x + q.x) * w;
            c.y += (p.y + q.y) * w;
        }
        if (std::abs(s) < 1e-300) return v.empty() ? c : v[0];
        return {c.x / (3.0 * s), c.y / (3.0 * s)};
    }

    void orient_ccw() {
        if (area() < 0.0) std::reverse(v.begin(), v.end());
    }

    bool is_convex(double tol = 1e-12) const {
        if (v.size() < 3) return false;
        for (size_t i = 0; i < v.size(); ++i) {
            Vec2 e1 = v[(i + 1) % v.size()] - v[i];
            Vec2 e2 = v[(i + 2) % v.size()] - v[(i + 1) % v.size()];
            if (e1.cross(e2) < -tol) return false;
        }
        return true;
    }

    bool contains(const Vec2& p, double tol = kGeoTol) const {
        for (size_t i = 0; i < v.size(); ++i) {
            Vec2 e = v[(i + 1) % v.size()] - v[i];
            if (e.cross(p - v[i]) < -tol) return false;
        }
        return !empty();
    }

    // Distance from p to the nearest edge (0 if on the boundary).
    double boundary_dist(const Vec2& p) const {
        double best = 1e300;
        for (size_t i = 0; i < v.size(); ++i) {
            const Vec2& a = v[i];
            const Vec2& b = v[(i + 1) % v.size()];
            Vec2 ab = b - a;
            double t = std::clamp((p - a).dot(ab) / ab.dot(ab), 0.0, 1.0);
            best = std::min(best, (p - (a + ab * t)).norm());
        }
        return best;
    }
};

// Sutherland–Hodgman clip against the half-plane eval(p) <= 0 of `cut`
// (keeps the side where the functional is non-positive).
inline Polygon clip_halfplane(const Polygon& poly, const Line& cut, int keep_sign) {
    Polygon out;
    size_t n = poly.v.size();
    if (n == 0) return out;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& cur = poly.v[i];
        const Vec2& nxt = poly.v[(i + 1) % n];
        double dc = cut.eval(cur) * keep_sign;
        double dn = cut.eval(nxt) * keep_sign;
        if (dc >= -kGeoTol) out.v.push_back(cur);
        if ((dc > kGeoTol && dn < -kGeoTol) || (dc < -kGeoTol && dn > kGeoTol)) {
            double t = dc / (dc - dn);
            out.v.push_back(lerp(cur, nxt, t));
        }
    }
    // drop duplicate vertices introduced by on-boundary cases
    Polygon dedup;
    for (const Vec2& p : out.v) {
        if (dedup.v.empty() || (p - dedup.v.back()).norm() > 1e-13) dedup.v.push_back(p);
    }
    while (dedup.v.size() > 1 && (dedup.v.front() - dedup.v.back()).norm() <= 1e-13)
        dedup.v.pop_back();
    if (dedup.v.size() < 3 || std::abs(dedup.area()) < 1e-24) return Polygon{};
    return dedup;
}

inline Polygon clip_polygon(Polygon subject, const Polygon& clip) {
    for (size_t i = 0; i < clip.v.size() && !subject.empty(); ++i) {
        const Vec2& a = clip.v[i];
        const Vec2& b = clip.v[(i + 1) % clip.v.size()];
        Line edge = Line::through(a, b);
        // interior of a CCW polygon lies where eval has the centroid's sign
        int keep = edge.eval(clip.centroid()) >= 0.0 ? +1 : -1;
        subject = clip_halfplane(subject, edge, keep);
    }
    return subject;
}

// Intersection of a segment with a convex polygon; nullopt when empty or a
// single point. Endpoint-on-boundary cases are resolved toward inclusion.
inline std::optional<Segment> clip_segment_to_polygon(const Segment& seg, const Polygon& poly) {
    double t0 = 0.0, t1 = 1.0;
    size_t n = poly.v.size();
    Vec2 d = seg.dir();
    int interior = poly.area() >= 0.0 ? +1 : -1;
    for (size_t i = 0; i < n; ++i) {
        const Vec2& a = poly.v[i];
        const Vec2& b = poly.v[(i + 1) % n];
        Vec2 e = (b - a) * static_cast<double>(interior);
        double denom = e.cross(d);
        double num = e.cross(seg.p0 - a);
        // inside means e.cross(p - a) >= 0
        if (std::abs(denom) < 1e-15) {
            if (num < -kGeoTol) return std::nullopt;
            continue;
        }
        double t = -num / denom;
        if (denom > 0.0)
            t0 = std::max(t0, t);
        else
            t1 = std::min(t1, t);
        if (t0 > t1) return std::nullopt;
    }
    if ((t1 - t0) * seg.length() < 1e-13) return std::nullopt;
    return Segment(seg.at(t0), seg.at(t1));
}

enum class ConeId { C, Cprime, Cs };

// Closed cone membership by the defining slope inequality:
//   C       : L <= v1/v2 <= 0   (unstable input cone)
//   Cprime  : v1/v2 >= L + alpha  (horizontal vectors included)
//   Cs      : L <= v2/v1 <= 0   (stable cone)
inline bool cone_contains(ConeId cone, Vec2 v, const Params& par) {
    if (v.norm() == 0.0) throw domain_error("cone_contains: zero vector");
    switch (cone) {
        case ConeId::C: {
            if (v.y == 0.0) return false;
            double s = v.x / v.y;
            return s >= par.L - kGeoTol && s <= kGeoTol;
        }
        case ConeId::Cprime: {
            if (v.y == 0.0) return true;
            double s = v.x / v.y;
            return s >= par.L + par.alpha - kGeoTol;
        }
        case ConeId::Cs: {
            if (v.x == 0.0) return false;
            double s = v.y / v.x;
            return s >= par.L - kGeoTol && s <= kGeoTol;
        }
    }
    return false;
}

// Split the (unreduced) segment p0 -> p1 at integer crossings of either
// coordinate and translate each piece into [0,1)^2, preserving order along
// the original parameterization.
inline std::vector<Segment> split_mod1(Vec2 p0, Vec2 p1) {
    if ((p1 - p0).norm() < 1e-14) throw domain_error("split_mod1: degenerate segment");
    std::vector<double> ts{0.0, 1.0};
    auto add_crossings = [&](double c0, double c1) {
        double lo = std::min(c0, c1), hi = std::max(c0, c1);
        for (double k = std::ceil(lo); k <= std::floor(hi); k += 1.0) {
            if (std::abs(c1 - c0) < 1e-15) continue;
            double t = (k - c0) / (c1 - c0);
            if (t > 1e-13 && t < 1.0 - 1e-13) ts.push_back(t);
        }
    };
    add_crossings(p0.x, p1.x);
    add_crossings(p0.y, p1.y);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-13; }),
             ts.end());

    std::vector<Segment> out;
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
        Vec2 a = lerp(p0, p1, ts[i]);
        Vec2 b = lerp(p0, p1, ts[i + 1]);
        Vec2 mid = lerp(a, b, 0.5);
        double ox = std::floor(mid.x);
        double oy = std::floor(mid.y);
        Vec2 a2{a.x - ox, a.y - oy};
        Vec2 b2{b.x - ox, b.y - oy};
        if ((b2 - a2).norm() < 1e-14) continue;
        out.emplace_back(a2, b2);
    }
    return out;
}

}  // namespace ltm
