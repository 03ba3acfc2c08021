#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ltm/core.hpp"
#include "ltm/expansion.hpp"
#include "ltm/families.hpp"
#include "ltm/geometry.hpp"
#include "ltm/partition.hpp"
#include "ltm/rng.hpp"

namespace ltm {

inline bool is_v_segment(const Segment& s, const Params& par, double tol = kGeoTol) {
    const double w = par.inv_alpha;
    if (s.p0.x < -tol || s.p0.x > w + tol || s.p1.x < -tol || s.p1.x > w + tol) return false;
    double ylo = std::min(s.p0.y, s.p1.y);
    double yhi = std::max(s.p0.y, s.p1.y);
    return ylo <= tol && yhi >= w - tol;
}

inline bool is_h_segment(const Segment& s, const Params& par, double tol = kGeoTol) {
    const double w = par.inv_alpha;
    if (s.p0.y < -tol || s.p0.y > w + tol || s.p1.y < -tol || s.p1.y > w + tol) return false;
    double xlo = std::min(s.p0.x, s.p1.x);
    double xhi = std::max(s.p0.x, s.p1.x);
    return xlo <= tol && xhi >= w - tol;
}

// One constant-return-time sub-segment and its image under the return map.
struct CellPiece {
    CellLabel label;
    Segment pre{Vec2{0.0, 0.0}, Vec2{1.0, 1.0}};
    std::optional<Segment> image;  // empty for tail pieces (carried, not mapped)
    bool tail = false;
};

namespace detail {

inline Vec2 i3_fwd(const Vec2& p, const Params& par) { return {p.y, par.inv_alpha - p.x}; }
inline Vec2 i3_inv(const Vec2& p, const Params& par) { return {par.inv_alpha - p.y, p.x}; }

// Crossing parameters of the segment with the family u_k = c0 + c1*k for
// integer k in [kmin, kcap] with the given stride; at most max_hits are
// collected (the rest of an accumulating fan is left to tail handling).
inline void family_crossings(std::vector<double>& ts, const Segment& seg, const Params& par,
                             double c0, double c1, int kmin, int stride, int kcap,
                             int max_hits = 4096) {
    const double a = par.alpha;
    const double g0c = seg.p0.x - c0, g0l = a * seg.p0.y - c1;  // g_k(0) = g0c + k*g0l
    const double g1c = seg.p1.x - c0, g1l = a * seg.p1.y - c1;

    double klo = kmin, khi = kcap;
    const bool deg0 = std::abs(g0l) <= 1e-14;
    const bool deg1 = std::abs(g1l) <= 1e-14;
    if (deg0 && deg1) {
        // both endpoint functionals k-independent: either no crossing, or all
        // family lines meet the segment at the single common point
        if ((g0c > 0.0) == (g1c > 0.0)) return;
        double t = -g0c / (g1c - g0c);
        if (t > 1e-12 && t < 1.0 - 1e-12) ts.push_back(t);
        return;
    }
    if (deg0 || deg1) {
        // one endpoint fixed in sign; crossings live on the side of the other
        // endpoint's root where its sign opposes the fixed one
        double gc_fixed = deg0 ? g0c : g1c;
        double gl_var = deg0 ? g1l : g0l;
        double rc = deg0 ? -g1c / g1l : -g0c / g0l;
        if ((gl_var > 0.0) != (gc_fixed > 0.0))
            klo = std::max(klo, std::floor(rc) - 1.0);
        else
            khi = std::min(khi, std::ceil(rc) + 1.0);
    } else {
        double r0 = -g0c / g0l;
        double r1 = -g1c / g1l;
        klo = std::max(klo, std::floor(std::min(r0, r1)) - 1.0);
        khi = std::min(khi, std::ceil(std::max(r0, r1)) + 1.0);
    }
    if (khi < klo) return;

    int k0 = std::max(kmin, static_cast<int>(klo));
    int rem = (k0 - kmin) % stride;
    if (rem != 0) k0 += stride - rem;
    int hits = 0;
    for (int k = k0; k <= static_cast<int>(khi) && hits < max_hits; k += stride) {
        double g0 = g0c + k * g0l;
        double g1 = g1c + k * g1l;
        if ((g0 > 0.0) == (g1 > 0.0)) continue;
        double denom = g1 - g0;
        if (std::abs(denom) < 1e-300) continue;
        double t = -g0 / denom;
        if (t > 1e-12 && t < 1.0 - 1e-12) {
            ts.push_back(t);
            ++hits;
        }
    }
}

inline std::vector<double> breakpoints(const Segment& seg, const Params& par, int kcap) {
    const double w = par.inv_alpha;
    std::vector<double> ts;
    family_crossings(ts, seg, par, w, 0.0, 1, 1, 1);            // scrL
    family_crossings(ts, seg, par, 1.0, 0.0, 1, 1, 1);          // scrL* (= A1* hypotenuse)
    family_crossings(ts, seg, par, 1.0, 0.0, 2, 1, kcap);       // scrL_k
    family_crossings(ts, seg, par, w - 1.0, 1.0, 2, 1, kcap);   // scrL_k*
    family_crossings(ts, seg, par, w - 0.5, 0.5, 3, 2, kcap);   // scrL_k^2
    family_crossings(ts, seg, par, 0.5, 0.5, 3, 2, kcap);       // scrL_k^2*
    ts.push_back(0.0);
    ts.push_back(1.0);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double x, double y) { return std::abs(x - y) < 1e-12; }),
             ts.end());
    return ts;
}

inline std::vector<CellPiece> split_f_side(const Segment& seg, const Params& par, int kcap,
                                           int tail_threshold) {
    std::vector<double> ts = breakpoints(seg, par, kcap);
    std::vector<CellPiece> out;
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
        Vec2 a = seg.at(ts[i]);
        Vec2 b = seg.at(ts[i + 1]);
        if ((b - a).norm() < 1e-13) continue;
        Vec2 mid = lerp(a, b, 0.5);
        auto label = locate_cell(mid, Side::F, par, kcap);
        bool tail = !label || label->k > tail_threshold;
        if (!out.empty() && !out.back().tail && !tail && out.back().label == *label) {
            out.back().pre = Segment(out.back().pre.p0, b);  // merge same-cell runs
            continue;
        }
        if (!out.empty() && out.back().tail && tail) {
            out.back().pre = Segment(out.back().pre.p0, b);
            continue;
        }
        CellPiece piece;
        piece.pre = Segment(a, b);
        piece.tail = tail;
        if (!tail) piece.label = *label;
        out.push_back(piece);
    }
    for (CellPiece& piece : out) {
        if (piece.tail) continue;
        int wrap = cell_wrap(piece.label);
        double ka = piece.label.k * par.alpha;
        auto fwd = [&](const Vec2& p) { return Vec2{p.x + ka * p.y - wrap, p.y}; };
        piece.image = Segment(fwd(piece.pre.p0), fwd(piece.pre.p1));
    }
    return out;
}

}  // namespace detail

// Piecewise application of the return map F_S (map = F) or G_S (map = G) to a
// cone-aligned segment in S. Pieces with return time beyond the partition's
// k_max are carried unmapped as tail pieces; the tracer passes extend = true
// to push the analytic cell construction to the hard cap instead.
inline std::vector<CellPiece> map_segment_through(const Segment& seg, MapId map,
                                                  const Params& par, const Partition& part,
                                                  bool extend = false) {
    if (map != MapId::F && map != MapId::G)
        throw domain_error("map_segment_through: map must be F or G");
    int tail_threshold = extend ? kCellHardCap : part.k_max;
    if (map == MapId::F) return detail::split_f_side(seg, par, kCellHardCap, tail_threshold);

    // conjugate through I3: B-cells are I3-images of A-cells and G_S = I3 F_S I3^-1
    Segment conj(detail::i3_inv(seg.p0, par), detail::i3_inv(seg.p1, par));
    std::vector<CellPiece> pieces = detail::split_f_side(conj, par, kCellHardCap, tail_threshold);
    for (CellPiece& piece : pieces) {
        piece.label.side = Side::G;
        piece.pre = Segment(detail::i3_fwd(piece.pre.p0, par), detail::i3_fwd(piece.pre.p1, par));
        if (piece.image)
            piece.image = Segment(detail::i3_fwd(piece.image->p0, par),
                                  detail::i3_fwd(piece.image->p1, par));
    }
    return pieces;
}

// Monte Carlo segment source: base point uniform in S, slope v1/v2 uniform in
// [L, 0], length uniform in [1e-4, 1e-2], clipped to S by shortening (never by
// clamping coordinates, which would bend the slope out of the cone).
inline Segment random_cone_segment(Rng& rng, const Params& par) {
    const double w = par.inv_alpha;
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vec2 base{rng.uniform(0.0, w), rng.uniform(0.0, w)};
        double s = rng.uniform(par.L, 0.0);
        double len = rng.uniform(1e-4, 1e-2);
        Vec2 dir{s, 1.0};
        double n = dir.norm();
        dir = {dir.x / n, dir.y / n};
        for (int flip = 0; flip < 2; ++flip) {
            double tmax = len;
            if (dir.x < 0.0) tmax = std::min(tmax, base.x / -dir.x);
            if (dir.x > 0.0) tmax = std::min(tmax, (w - base.x) / dir.x);
            if (dir.y < 0.0) tmax = std::min(tmax, base.y / -dir.y);
            if (dir.y > 0.0) tmax = std::min(tmax, (w - base.y) / dir.y);
            if (tmax > 1e-6) return Segment(base, base + dir * tmax);
            dir = {-dir.x, -dir.y};
        }
    }
    throw domain_error("random_cone_segment: could not place a segment");
}

enum class TraceOutcome { C1, C2, C3, Budget };

struct TraceStep {
    Side side = Side::F;
    CellLabel chosen;
    int pieces = 0;
    int tail_pieces = 0;
    double growth_sum = 0.0;
    double best_ratio = 0.0;
    int h_power_after = 0;
    Segment image{Vec2{0, 0}, Vec2{1, 1}};
};

struct TraceResult {
    TraceOutcome outcome = TraceOutcome::Budget;
    double delta = 0.0;           // expansion margin when C1
    double growth_sum0 = 0.0;     // crossed-cell sum of the input segment
    int k_bridge = 0;             // C2 family index
    bool bridge_starred = false;
    int h_power = 0;              // H-iterates consumed up to the decision
    int steps_used = 0;           // composite return-map steps
    bool tail_annotation = false;
    std::vector<TraceStep> steps;
    std::optional<Segment> produced;  // the v-segment when C3
};

namespace detail {

inline bool on_line(const Vec2& p, const Line& l, double tol) {
    return std::abs(l.eval(p)) <= tol;
}

inline bool endpoints_on_pair(const Segment& s, const Line& l1, const Line& l2, double tol) {
    return (on_line(s.p0, l1, tol) && on_line(s.p1, l2, tol)) ||
           (on_line(s.p0, l2, tol) && on_line(s.p1, l1, tol));
}

struct InputClass {
    bool precursor = false;  // configurations that resolve to a v-segment under iteration
    int bridge_k = 0;        // smallest k >= 4 with a scrL_(k-1) -- scrL_k traversal
    bool bridge_starred = false;
};

// Classify the input segment from its pieces: cell-traversals are read off
// piece endpoints lying on the cell's bounding family lines.
inline InputClass classify_input(const std::vector<CellPiece>& pieces, const Params& par) {
    constexpr double tol = 1e-9;
    InputClass out;
    for (const CellPiece& piece : pieces) {
        if (piece.tail) continue;
        const CellLabel& lb = piece.label;
        const bool st = lb.starred;
        if (lb.secondary) continue;
        if (lb.k == 2) {
            Line l2 = boundary_line({Family::scrL_k, 2, false}, par);
            Line l2s = boundary_line({Family::scrL_k, 2, true}, par);
            if (endpoints_on_pair(piece.pre, l2, l2s, tol)) out.precursor = true;
        } else if (lb.k == 3) {
            // scrL_2--scrL_3 and scrL_3--scrL_3^2 traversals map to v-segments
            // within a few iterates; segments crossing from A1 into A2 (the
            // remaining low-family case) have growth sum >= 1/E1+1/E2+1/E3 > 1
            // and route through the continuation branch by themselves.
            Line l2 = boundary_line({Family::scrL_k, 2, st}, par);
            Line l3 = boundary_line({Family::scrL_k, 3, st}, par);
            Line l32 = boundary_line({Family::scrL_k2, 3, st}, par);
            if (endpoints_on_pair(piece.pre, l2, l3, tol) ||
                endpoints_on_pair(piece.pre, l3, l32, tol))
                out.precursor = true;
        } else if (lb.k >= 4) {
            Line lk1 = boundary_line({Family::scrL_k, lb.k - 1, st}, par);
            Line lk = boundary_line({Family::scrL_k, lb.k, st}, par);
            if (endpoints_on_pair(piece.pre, lk1, lk, tol)) {
                if (out.bridge_k == 0 || lb.k < out.bridge_k) {
                    out.bridge_k = lb.k;
                    out.bridge_starred = st;
                }
            }
        }
    }
    return out;
}

// Greedy choice: maximize the expanding extent of the image, ties toward the
// smaller return time.
inline const CellPiece* best_piece(const std::vector<CellPiece>& pieces, Side side) {
    const CellPiece* best = nullptr;
    double best_len = -1.0;
    for (const CellPiece& piece : pieces) {
        if (piece.tail || !piece.image) continue;
        double len = (side == Side::F) ? piece.image->ell_h() : piece.image->ell_v();
        if (len > best_len + 1e-15 ||
            (len > best_len - 1e-15 && best && piece.label.k < best->label.k)) {
            best = &piece;
            best_len = len;
        }
    }
    return best;
}

}  // namespace detail

// Growth-trichotomy tracer. The input segment is classified as
//   C2  when it traverses some A_k between scrL_(k-1) and scrL_k, k >= 4
//        (or the starred pair),
//   C1  when its crossed-cell growth sum is below 1 (the best piece then
//        expands by a definite margin delta > 0),
//   C3  when iterating the alternating F_S/G_S greedy scheme produces an
//        actual v-segment within the budget; traversals of A_2 and the
//        low-family bridges (scrL_2--scrL_3, scrL--scrL_2, scrL_3--scrL_3^2,
//        and starred) are routed here directly.
// Budget is returned when no case resolves within `budget` composite steps.
inline TraceResult trace_segment(Segment seg, int budget, const Params& par,
                                 const Partition& part) {
    if (budget < 1) throw domain_error("trace_segment: budget must be >= 1");
    const double w = par.inv_alpha;
    for (const Vec2& p : {seg.p0, seg.p1})
        if (p.x < -kGeoTol || p.x > w + kGeoTol || p.y < -kGeoTol || p.y > w + kGeoTol)
            throw domain_error("trace_segment: segment not inside S");
    if (!cone_contains(ConeId::C, seg.dir(), par))
        throw domain_error("trace_segment: segment not aligned with the cone C");

    TraceResult res;
    Segment cur = seg;
    int h_power = 0;

    for (int m = 0; m < budget; ++m) {
        if (is_v_segment(cur, par)) {
            res.outcome = TraceOutcome::C3;
            res.produced = cur;
            res.h_power = h_power;
            res.steps_used = m;
            return res;
        }

        std::vector<CellPiece> fp = map_segment_through(cur, MapId::F, par, part, true);
        int tails = 0;
        double gsum = 0.0;
        for (const CellPiece& piece : fp) {
            if (piece.tail) {
                ++tails;
                continue;
            }
            gsum += 1.0 / expansion_factor(piece.label.k, par);
        }
        if (tails > 0) res.tail_annotation = true;

        if (m == 0) {
            res.growth_sum0 = gsum;
            detail::InputClass ic = detail::classify_input(fp, par);
            if (!ic.precursor) {
                if (ic.bridge_k >= 4) {
                    res.outcome = TraceOutcome::C2;
                    res.k_bridge = ic.bridge_k;
                    res.bridge_starred = ic.bridge_starred;
                    res.h_power = 0;
                    res.steps_used = 0;
                    return res;
                }
                const CellPiece* bp = detail::best_piece(fp, Side::F);
                if (gsum < 1.0 && tails == 0 && bp) {
                    res.outcome = TraceOutcome::C1;
                    res.delta = bp->image->ell_h() / cur.ell_v() - 1.0;
                    res.h_power = 0;
                    res.steps_used = 0;
                    TraceStep st;
                    st.side = Side::F;
                    st.chosen = bp->label;
                    st.pieces = static_cast<int>(fp.size());
                    st.growth_sum = gsum;
                    st.best_ratio = bp->image->ell_h() / cur.ell_v();
                    st.image = *bp->image;
                    res.steps.push_back(st);
                    return res;
                }
            }
        }

        const CellPiece* fbest = detail::best_piece(fp, Side::F);
        if (!fbest) {
            res.outcome = TraceOutcome::Budget;
            res.h_power = h_power;
            res.steps_used = m;
            return res;
        }
        TraceStep fstep;
        fstep.side = Side::F;
        fstep.chosen = fbest->label;
        fstep.pieces = static_cast<int>(fp.size());
        fstep.tail_pieces = tails;
        fstep.growth_sum = gsum;
        fstep.best_ratio = fbest->image->ell_h() / cur.ell_v();
        fstep.image = *fbest->image;
        const int k_ret = fbest->label.k;

        Segment lam = *fbest->image;
        std::vector<CellPiece> gp = map_segment_through(lam, MapId::G, par, part, true);
        int gtails = 0;
        for (const CellPiece& piece : gp)
            if (piece.tail) ++gtails;
        if (gtails > 0) res.tail_annotation = true;
        const CellPiece* gbest = detail::best_piece(gp, Side::G);
        if (!gbest) {
            fstep.h_power_after = h_power;
            res.steps.push_back(fstep);
            res.outcome = TraceOutcome::Budget;
            res.h_power = h_power;
            res.steps_used = m + 1;
            return res;
        }
        const int l_ret = gbest->label.k;
        h_power += k_ret + l_ret - 1;

        fstep.h_power_after = h_power;
        res.steps.push_back(fstep);
        TraceStep gstep;
        gstep.side = Side::G;
        gstep.chosen = gbest->label;
        gstep.pieces = static_cast<int>(gp.size());
        gstep.tail_pieces = gtails;
        gstep.best_ratio = gbest->image->ell_v() / lam.ell_h();
        gstep.h_power_after = h_power;
        gstep.image = *gbest->image;
        res.steps.push_back(gstep);

        cur = *gbest->image;
    }

    if (is_v_segment(cur, par)) {
        res.outcome = TraceOutcome::C3;
        res.produced = cur;
        res.h_power = h_power;
        res.steps_used = budget;
        return res;
    }
    res.outcome = TraceOutcome::Budget;
    res.h_power = h_power;
    res.steps_used = budget;
    return res;
}

}  // namespace ltm
