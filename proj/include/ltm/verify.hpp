#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ltm/core.hpp"
#include "ltm/expansion.hpp"
#include "ltm/families.hpp"
#include "ltm/geometry.hpp"
#include "ltm/partition.hpp"
#include "ltm/rng.hpp"
#include "ltm/thresholds.hpp"
#include "ltm/tracer.hpp"
#include "ltm/version.hpp"

namespace ltm {

using json = nlohmann::ordered_json;

struct construction_failure : domain_error {
    explicit construction_failure(const std::string& msg) : domain_error(msg) {}
};

struct VerifyReport {
    std::string id;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::size_t passes = 0;
    std::vector<json> failures;
    json extra = json::object();

    bool ok() const { return failures.empty() && passes == samples; }

    json to_json() const {
        json j;
        j["id"] = id;
        j["alpha"] = alpha;
        j["seed"] = seed;
        j["samples"] = samples;
        j["passes"] = passes;
        j["failures"] = failures;
        if (!extra.empty()) j["extra"] = extra;
        return j;
    }
};

inline json segment_json(const Segment& s) {
    return json{{"x0", s.p0.x}, {"y0", s.p0.y}, {"x1", s.p1.x}, {"y1", s.p1.y}};
}

namespace detail {

// Random segment bridging the `from` and `to` edges of a cell: base point on
// the from-edge, cone slope, endpoint where the to-line is hit. Fails only
// when the cell geometry admits no such chord at this alpha.
inline std::optional<Segment> bridge_in_cell(const PartitionCell& cell, const Line& from,
                                             const Line& to, Rng& rng, const Params& par) {
    // locate the from-edge as the vertex pair on `from`
    std::vector<Vec2> on_from;
    for (const Vec2& v : cell.poly.v)
        if (std::abs(from.eval(v)) < 1e-9) on_from.push_back(v);
    if (on_from.size() < 2) return std::nullopt;

    for (int attempt = 0; attempt < 64; ++attempt) {
        Vec2 p = lerp(on_from[0], on_from[1], rng.uniform(0.05, 0.95));
        double s = rng.uniform(par.L, 0.0);
        Vec2 d{s, 1.0};
        double along = to.a * d.x + to.b * d.y;
        if (std::abs(along) < 1e-12) continue;
        double t = -to.eval(p) / along;
        Vec2 q = p + d * t;
        if (!cell.poly.contains(q, 1e-9)) continue;
        if ((q - p).norm() < 1e-10) continue;
        return Segment(p, q);
    }
    return std::nullopt;
}

inline Vec2 i3_point(const Vec2& p, const Params& par) { return {p.y, par.inv_alpha - p.x}; }

inline Segment i3_segment(const Segment& s, const Params& par) {
    return Segment(i3_point(s.p0, par), i3_point(s.p1, par));
}

// Does the segment cross the line at a point lying on the actual edge of the
// given cell (the singular segment, not the infinite line)?
inline bool crosses_on_cell_edge(const Segment& s, const Line& l, const PartitionCell& cell) {
    double e0 = l.eval(s.p0);
    double e1 = l.eval(s.p1);
    if ((e0 > 1e-12) == (e1 > 1e-12) && std::abs(e0) > 1e-12 && std::abs(e1) > 1e-12)
        return false;
    double t = (std::abs(e0 - e1) < 1e-300) ? 0.5 : e0 / (e0 - e1);
    Vec2 x = s.at(std::clamp(t, 0.0, 1.0));
    return cell.poly.contains(x, 1e-9);
}

}  // namespace detail

// Lemma-1 style bridge mapping: segments connecting scrL_(k-1) to scrL_k map
// under F_S onto segments connecting scrI_(k-2) to scrI_(k-1) (traversing
// B_(k-1)). transport = true runs the I3-conjugated statement instead:
// bridges of scrI_(k-1)--scrI_k in B_k map under G_S across the starred
// scrL pair (the G_S growth analogue).
inline VerifyReport verify_lemma1(int k, std::size_t n_samples, const Params& par,
                                  std::uint64_t seed = 42, bool transport = false) {
    if (k < 4) throw domain_error("verify_lemma1: k must be >= 4");
    VerifyReport rep;
    rep.id = transport ? "lemma1_I3" : "lemma1";
    rep.alpha = par.alpha;
    rep.seed = seed;
    rep.samples = n_samples;
    rep.extra["k"] = k;

    PartitionCell cell = make_cell({Side::F, k, false, false}, par);
    Line from = boundary_line({Family::scrL_k, k, false}, par);
    Line to = boundary_line({Family::scrL_k, k - 1, false}, par);
    PartitionCell target = make_cell({Side::G, k - 1, false, false}, par);
    Line i_km2 = boundary_line({Family::scrI_k, k - 2, false}, par);
    Line i_km1 = boundary_line({Family::scrI_k, k - 1, false}, par);
    // I3-conjugated counterparts
    PartitionCell target_star = make_cell({Side::F, k - 1, false, true}, par);
    Line ls_km2 = boundary_line({Family::scrL_k, k - 2, true}, par);
    Line ls_km1 = boundary_line({Family::scrL_k, k - 1, true}, par);

    double ylo_bound = y_meet(k - 1, par);
    double yhi_bound = y_meet(k - 2, par);

    std::vector<json> fails(n_samples);
    std::vector<char> okv(n_samples, 0);
    parallel_for(n_samples, [&](std::size_t i) {
        Rng rng = sample_rng(seed, i);
        auto br = detail::bridge_in_cell(cell, from, to, rng, par);
        if (!br) {
            fails[i] = json{{"sample", i}, {"reason", "construction"}};
            return;
        }
        // endpoint on scrL_(k-1) and the bound chain y_(k-1) <= y <= y_(k-2)
        Vec2 zk1 = (std::abs(to.eval(br->p0)) < std::abs(to.eval(br->p1))) ? br->p0 : br->p1;
        bool bound_ok = zk1.y >= ylo_bound - 1e-9 && zk1.y <= yhi_bound + 1e-9;

        Segment pre = *br;
        PartitionCell tgt = target;
        Line c1 = i_km2, c2 = i_km1;
        if (transport) {
            pre = detail::i3_segment(pre, par);  // bridges scrI_(k-1)--scrI_k in B_k
            tgt = target_star;
            c1 = ls_km2;
            c2 = ls_km1;
        }
        CellLabel lb{transport ? Side::G : Side::F, k, false, false};
        PartitionCell branch{lb, Polygon{}, cell_wrap(lb)};
        Segment image(branch.apply_return(pre.p0, par), branch.apply_return(pre.p1, par));

        bool hit1 = detail::crosses_on_cell_edge(image, c1, tgt);
        bool hit2 = detail::crosses_on_cell_edge(image, c2, tgt);
        if (hit1 && hit2 && bound_ok) {
            okv[i] = 1;
        } else {
            fails[i] = json{{"sample", i},
                            {"segment", segment_json(*br)},
                            {"image", segment_json(image)},
                            {"crosses_lower", hit1},
                            {"crosses_upper", hit2},
                            {"bound_ok", bound_ok},
                            {"y_witness", zk1.y},
                            {"y_lo", ylo_bound},
                            {"y_hi", yhi_bound}};
        }
    });
    for (std::size_t i = 0; i < n_samples; ++i) {
        if (okv[i])
            ++rep.passes;
        else if (rep.failures.size() < 32)
            rep.failures.push_back(fails[i]);
    }
    rep.extra["bound_lo"] = ylo_bound;
    rep.extra["bound_hi"] = yhi_bound;
    return rep;
}

// Segments crossing from A1 into A2 (so connecting scrL to scrL_2) produce a
// v-segment under finitely many iterates; verified by tracing to C3.
inline VerifyReport verify_lemma3(std::size_t n_samples, const Params& par,
                                  const Partition& part, std::uint64_t seed = 42,
                                  int budget = 200) {
    VerifyReport rep;
    rep.id = "lemma3";
    rep.alpha = par.alpha;
    rep.seed = seed;
    rep.samples = n_samples;

    const double w = par.inv_alpha;
    struct Row {
        char code = 0;  // p=pass, f=fail, c=construction
        int steps = 0;
        int h_power = 0;
        Segment seg{Vec2{0, 0}, Vec2{1, 1}};
    };
    std::vector<Row> rows(n_samples);
    parallel_for(n_samples, [&](std::size_t i) {
        Rng rng = sample_rng(seed, i);
        Row& row = rows[i];
        for (int attempt = 0; attempt < 64; ++attempt) {
            double yc = rng.uniform(0.05, 0.95) * w * w;  // crossing height on scrL
            Vec2 p{w - par.alpha * yc, yc};
            double s = rng.uniform(par.L, 0.0);
            Vec2 d{s, 1.0};
            Line l2 = boundary_line({Family::scrL_k, 2, false}, par);
            double along = l2.a * d.x + l2.b * d.y;
            if (std::abs(along) < 1e-12) continue;
            double t2 = -l2.eval(p) / along;
            if (t2 <= 0.0) continue;
            Vec2 q = p + d * (t2 * 1.05);  // past scrL_2 into A2
            Vec2 r = p + d * (-0.05 * t2); // below scrL into A1
            if (q.x < 0 || q.x > w || q.y < 0 || q.y > w) continue;
            if (r.x < 0 || r.x > w || r.y < 0 || r.y > w) continue;
            Segment seg(r, q);
            TraceResult tr = trace_segment(seg, budget, par, part);
            row.seg = seg;
            row.steps = tr.steps_used;
            row.h_power = tr.h_power;
            row.code = (tr.outcome == TraceOutcome::C3) ? 'p' : 'f';
            return;
        }
        row.code = 'c';
    });
    double max_h = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const Row& row = rows[i];
        if (row.code == 'p') {
            ++rep.passes;
            max_h = std::max(max_h, static_cast<double>(row.h_power));
        } else if (rep.failures.size() < 32) {
            rep.failures.push_back(json{{"sample", i},
                                        {"reason", row.code == 'c' ? "construction" : "no v-segment"},
                                        {"segment", segment_json(row.seg)},
                                        {"steps", row.steps}});
        }
    }
    rep.extra["max_h_power"] = max_h;
    return rep;
}

// Growth-lemma Monte Carlo: every random cone-aligned segment classifies as
// C1, C2 or C3 within the budget, with valid C1 margins.
inline VerifyReport verify_growth(std::size_t n_samples, const Params& par,
                                  const Partition& part, std::uint64_t seed = 42,
                                  int budget = 200) {
    VerifyReport rep;
    rep.id = "growth";
    rep.alpha = par.alpha;
    rep.seed = seed;
    rep.samples = n_samples;

    struct Row {
        char outcome = 0;
        double delta = 0.0;
        double gsum = 0.0;
        bool margin_ok = true;
        int steps = 0;
        Segment seg{Vec2{0, 0}, Vec2{1, 1}};
    };
    std::vector<Row> rows(n_samples);
    parallel_for(n_samples, [&](std::size_t i) {
        Rng rng = sample_rng(seed, i);
        Segment seg = random_cone_segment(rng, par);
        TraceResult tr = trace_segment(seg, budget, par, part);
        Row& row = rows[i];
        row.seg = seg;
        row.steps = tr.steps_used;
        row.delta = tr.delta;
        row.gsum = tr.growth_sum0;
        switch (tr.outcome) {
            case TraceOutcome::C1:
                row.outcome = '1';
                row.margin_ok = tr.delta > 0.0 && tr.growth_sum0 < 1.0;
                break;
            case TraceOutcome::C2: row.outcome = '2'; break;
            case TraceOutcome::C3: row.outcome = '3'; break;
            default: row.outcome = 'b'; break;
        }
    });
    std::size_t c1 = 0, c2 = 0, c3 = 0;
    int max_steps = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const Row& row = rows[i];
        bool pass = row.outcome != 'b' && row.margin_ok;
        if (pass) {
            ++rep.passes;
            c1 += row.outcome == '1';
            c2 += row.outcome == '2';
            c3 += row.outcome == '3';
            max_steps = std::max(max_steps, row.steps);
        } else if (rep.failures.size() < 32) {
            rep.failures.push_back(json{{"sample", i},
                                        {"segment", segment_json(row.seg)},
                                        {"outcome", std::string(1, row.outcome)},
                                        {"delta", row.delta},
                                        {"growth_sum", row.gsum}});
        }
    }
    rep.extra["c1"] = c1;
    rep.extra["c2"] = c2;
    rep.extra["c3"] = c3;
    rep.extra["max_steps"] = max_steps;
    return rep;
}

// ---------------------------------------------------------------------------
// Theorem pipeline: v-segments inside G^2(B2) reproduce themselves under H^3
// and H^4, covering every H-power m > 8 (and m in {3,6,7}) via 3k + 4l.

// Bounding lines of the band G^2(B2): left y = 1 - 2 a x, right y = 1 + 1/a - 2 a x.
inline Line g2b2_left(const Params& par) { return boundary_line({Family::L2star_image, 0, false}, par); }
inline Line g2b2_right(const Params& par) { return Line(2.0 * par.alpha, 1.0, 1.0 + par.inv_alpha); }

inline bool in_g2b2_band(const Vec2& p, const Params& par, double tol = 1e-9) {
    double a = par.alpha;
    return p.y >= (1.0 - 2.0 * a * p.x) - tol && p.y <= (1.0 + par.inv_alpha - 2.0 * a * p.x) + tol;
}

namespace detail {

// v-segment -> next v-segment in G^2(B2) through the A2->B2 route (3 H-steps)
// or the A3->B2 route of the scrL_2--scrL_3 bridge (4 H-steps).
inline std::optional<Segment> reproduce_v(const Segment& v, int route, const Params& par) {
    CellLabel alab{Side::F, route == 3 ? 2 : 3, false, false};
    PartitionCell acell = make_cell(alab, par);
    auto apiece = clip_segment_to_polygon(v, acell.poly);
    if (!apiece) return std::nullopt;
    PartitionCell abranch{alab, Polygon{}, cell_wrap(alab)};
    Segment h(abranch.apply_return(apiece->p0, par), abranch.apply_return(apiece->p1, par));

    CellLabel blab{Side::G, 2, false, false};
    PartitionCell bcell = make_cell(blab, par);
    auto bpiece = clip_segment_to_polygon(h, bcell.poly);
    if (!bpiece) return std::nullopt;
    PartitionCell bbranch{blab, Polygon{}, cell_wrap(blab)};
    return Segment(bbranch.apply_return(bpiece->p0, par), bbranch.apply_return(bpiece->p1, par));
}

}  // namespace detail

// Construct a v-segment in G^2(B2) via the A2 -> B2 route from a plain
// vertical v-segment.
inline Segment make_g2b2_vsegment(const Params& par, double x_frac = 0.55) {
    const double w = par.inv_alpha;
    Segment v0({x_frac * w, 0.0}, {x_frac * w, w});
    auto out = detail::reproduce_v(v0, 3, par);
    if (!out || !is_v_segment(*out, par, 1e-9))
        throw construction_failure("make_g2b2_vsegment: A2->B2 route failed");
    return *out;
}

inline VerifyReport verify_pipeline(const Params& par, int m_max = 20) {
    VerifyReport rep;
    rep.id = "pipeline";
    rep.alpha = par.alpha;
    rep.samples = 0;

    const double w = par.inv_alpha;
    Segment g2 = make_g2b2_vsegment(par);
    bool band0 = in_g2b2_band(g2.p0, par) && in_g2b2_band(g2.p1, par);

    // (i) scrL_3 ∩ scrL lies left of the band's left boundary, so the witness
    // crosses scrL_2 and scrL_3 on their singular segments
    double y2 = y_meet(2, par);
    Vec2 l3l{w - par.alpha * y2, y2};
    double band_left_x = (1.0 - y2) / (2.0 * par.alpha);
    bool ineq = l3l.x <= band_left_x + 1e-12;

    PartitionCell a3 = make_cell({Side::F, 3, false, false}, par);
    Line l2 = boundary_line({Family::scrL_k, 2, false}, par);
    Line l3 = boundary_line({Family::scrL_k, 3, false}, par);
    bool crosses_l2 = detail::crosses_on_cell_edge(g2, l2, a3);
    bool crosses_l3 = detail::crosses_on_cell_edge(g2, l3, a3);

    auto check = [&](const std::string& name, bool ok, json detail_j = json::object()) {
        ++rep.samples;
        if (ok) {
            ++rep.passes;
        } else {
            detail_j["check"] = name;
            rep.failures.push_back(detail_j);
        }
        rep.extra["checks"][name] = ok;
    };
    check("witness_in_band", band0, segment_json(g2));
    check("l3_meets_l_left_of_band", ineq,
          json{{"x_corner", l3l.x}, {"x_band_left", band_left_x}});
    check("witness_crosses_scrL2", crosses_l2, segment_json(g2));
    check("witness_crosses_scrL3", crosses_l3, segment_json(g2));

    // (ii) self-reproduction under H^3 and H^4 from the same witness
    auto s3 = detail::reproduce_v(g2, 3, par);
    auto s4 = detail::reproduce_v(g2, 4, par);
    auto good = [&](const std::optional<Segment>& s) {
        return s && is_v_segment(*s, par, 1e-9) && in_g2b2_band(s->p0, par) &&
               in_g2b2_band(s->p1, par);
    };
    check("H3_reproduces", good(s3), s3 ? segment_json(*s3) : json::object());
    check("H4_reproduces", good(s4), s4 ? segment_json(*s4) : json::object());

    // witnesses for every representable power m = 3k + 4l <= m_max
    json witnesses = json::array();
    for (int m = 3; m <= m_max; ++m) {
        int a = -1, b = -1;
        for (int kk = m / 3; kk >= 1; --kk) {
            if ((m - 3 * kk) % 4 == 0) {
                a = kk;
                b = (m - 3 * kk) / 4;
                break;
            }
        }
        if (a < 0) continue;
        std::optional<Segment> cur = g2;
        bool ok = true;
        for (int i = 0; i < a && ok; ++i) {
            cur = detail::reproduce_v(*cur, 3, par);
            ok = good(cur);
        }
        for (int i = 0; i < b && ok; ++i) {
            cur = detail::reproduce_v(*cur, 4, par);
            ok = good(cur);
        }
        check("m_" + std::to_string(m), ok, json{{"m", m}, {"threes", a}, {"fours", b}});
        if (ok)
            witnesses.push_back(json{{"m", m}, {"segment", segment_json(*cur)}});
    }
    rep.extra["witnesses"] = witnesses;

    // stable-direction counterpart: I4 turns the v-segment into an h-segment
    Segment i4seg(Vec2{g2.p0.y, g2.p0.x}, Vec2{g2.p1.y, g2.p1.x});
    check("I4_maps_v_to_h", is_h_segment(i4seg, par, 1e-9), segment_json(i4seg));
    return rep;
}

}  // namespace ltm
