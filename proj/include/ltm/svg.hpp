#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "ltm/core.hpp"
#include "ltm/families.hpp"
#include "ltm/geometry.hpp"
#include "ltm/partition.hpp"
#include "ltm/periodic.hpp"
#include "ltm/verify.hpp"
#include "ltm/version.hpp"

namespace ltm {

// Minimal deterministic SVG emitter: a world rectangle mapped onto a 600x600
// viewBox, y up. Fixed number formatting keeps repeat renders byte-identical.
class SvgWriter {
  public:
    SvgWriter(Vec2 world_lo, Vec2 world_hi, double alpha, std::uint64_t seed)
        : lo_(world_lo), hi_(world_hi) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "<!-- alpha=%.6f seed=%llu tool=ltm %s -->\n", alpha,
                      static_cast<unsigned long long>(seed), kVersion);
        header_ = buf;
    }

    void style(const std::string& css) { css_ += css; }

    void polygon(const Polygon& poly, const std::string& cls) {
        body_ += "<polygon class=\"" + cls + "\" points=\"";
        for (size_t i = 0; i < poly.v.size(); ++i) {
            if (i) body_ += " ";
            body_ += fmt(tx(poly.v[i]));
        }
        body_ += "\"/>\n";
    }

    void line(const Vec2& a, const Vec2& b, const std::string& cls) {
        Vec2 ta = tx(a), tb = tx(b);
        char buf[200];
        std::snprintf(buf, sizeof(buf),
                      "<line class=\"%s\" x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\"/>\n",
                      cls.c_str(), ta.x, ta.y, tb.x, tb.y);
        body_ += buf;
    }

    // clip an infinite line to the world rectangle and draw it
    void clipped_line(const Line& l, const std::string& cls) {
        Polygon box({{lo_.x, lo_.y}, {hi_.x, lo_.y}, {hi_.x, hi_.y}, {lo_.x, hi_.y}});
        if (auto s = line_in_polygon(l, box)) line(s->p0, s->p1, cls);
    }

    static std::optional<Segment> line_in_polygon(const Line& l, const Polygon& poly) {
        Vec2 dir{-l.b, l.a};
        Vec2 foot{l.a * l.c, l.b * l.c};
        Segment chord(foot - dir * 8.0, foot + dir * 8.0);
        return clip_segment_to_polygon(chord, poly);
    }

    void segment(const Segment& s, const std::string& cls) { line(s.p0, s.p1, cls); }

    void dot(const Vec2& p, const std::string& cls, double r = 3.0) {
        Vec2 t = tx(p);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "<circle class=\"%s\" cx=\"%.3f\" cy=\"%.3f\" r=\"%.1f\"/>\n",
                      cls.c_str(), t.x, t.y, r);
        body_ += buf;
    }

    void text(const Vec2& p, const std::string& s, const std::string& cls) {
        Vec2 t = tx(p);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "<text class=\"%s\" x=\"%.3f\" y=\"%.3f\">", cls.c_str(),
                      t.x, t.y);
        body_ += buf;
        body_ += s;
        body_ += "</text>\n";
    }

    std::string finish() const {
        std::string out = header_;
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 600 600\" "
               "width=\"600\" height=\"600\">\n<style>\n";
        out += css_;
        out += "</style>\n";
        out += body_;
        out += "</svg>\n";
        return out;
    }

  private:
    Vec2 lo_, hi_;
    std::string header_, css_, body_;

    Vec2 tx(const Vec2& p) const {
        double sx = 600.0 / (hi_.x - lo_.x);
        double sy = 600.0 / (hi_.y - lo_.y);
        return {(p.x - lo_.x) * sx, 600.0 - (p.y - lo_.y) * sy};
    }
    static std::string fmt(const Vec2& t) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3f,%.3f", t.x, t.y);
        return buf;
    }
};

enum class FigureId { fig2, fig3a, fig3b, fig4 };

struct FigureSpec {
    FigureId id = FigureId::fig2;
    double alpha = 2.8;
    std::string out_path;
    std::uint64_t seed = 42;
};

namespace detail {

inline const char* base_css() {
    return ".cell{stroke:#333;stroke-width:0.6;fill-opacity:0.55}\n"
           ".cellA{fill:#cfe3f5}.cellA2{fill:#f5d9cf}.cellAs{fill:#d9f0d3}.cellA2s{fill:#f2e6b8}\n"
           ".cellB{fill:#cfe3f5}.cellB2{fill:#f5d9cf}.cellBs{fill:#d9f0d3}.cellB2s{fill:#f2e6b8}\n"
           ".tail{fill:#999;fill-opacity:0.5;stroke:none}\n"
           ".frame{fill:none;stroke:#000;stroke-width:1.6}\n"
           ".fam{stroke:#555;stroke-width:0.5;fill:none}\n"
           ".famBold{stroke:#000;stroke-width:2.0;fill:none}\n"
           ".band{fill:#bbb;fill-opacity:0.6;stroke:none}\n"
           ".gu{stroke:#c22;stroke-width:1.6;fill:none}\n"
           ".gs{stroke:#c22;stroke-width:1.6;stroke-dasharray:6 4;fill:none}\n"
           ".mline{stroke:#06c;stroke-width:1.0;fill:none}\n"
           ".mark{stroke:#000;stroke-width:0.8;stroke-dasharray:3 3;fill:none}\n"
           ".acc{fill:#000}\n"
           ".lbl{font:italic 15px serif;fill:#000;text-anchor:middle}\n"
           ".lblS{font:italic 11px serif;fill:#333;text-anchor:middle}\n";
}

inline std::string cell_class(const CellLabel& lb) {
    std::string c = lb.side == Side::F ? "cell cellA" : "cell cellB";
    if (lb.secondary) c += "2";
    if (lb.starred) c += "s";
    return c;
}

inline void draw_partition(SvgWriter& svg, const Partition& part) {
    for (const auto& t : part.tails) svg.polygon(t, "tail");
    for (const auto& c : part.cells) svg.polygon(c.poly, cell_class(c.label));
    for (const auto& c : part.cells) {
        if (c.label.k <= 4 && !c.label.secondary)
            svg.text(c.poly.centroid(), c.label.str(), "lbl");
        else if (c.label.k <= 6)
            svg.text(c.poly.centroid(), std::to_string(c.label.k), "lblS");
    }
}

inline void figure_partition(SvgWriter& svg, const Params& par, Side side) {
    const double w = par.inv_alpha;
    Partition part = build_partition(side == Side::F ? MapId::F : MapId::G, 15, par);
    draw_partition(svg, part);
    svg.polygon(Polygon({{0, 0}, {w, 0}, {w, w}, {0, w}}), "frame");
    if (side == Side::F) {
        for (auto id : {AccumulationId::p1, AccumulationId::p1s, AccumulationId::p2,
                        AccumulationId::p2s})
            svg.dot(accumulation_point(id, par), "acc");
    } else {
        for (auto id : {AccumulationId::q1, AccumulationId::q1s, AccumulationId::q2,
                        AccumulationId::q2s})
            svg.dot(accumulation_point(id, par), "acc");
    }
}

inline void figure_band(SvgWriter& svg, const Params& par) {
    const double w = par.inv_alpha;
    Polygon sq({{0, 0}, {w, 0}, {w, w}, {0, w}});
    Polygon band = clip_halfplane(sq, g2b2_left(par), +1);   // y >= 1 - 2ax side
    band = clip_halfplane(band, g2b2_right(par), -1);
    svg.polygon(band, "band");
    svg.polygon(sq, "frame");
    svg.clipped_line(g2b2_left(par), "fam");
    svg.clipped_line(g2b2_right(par), "fam");
    svg.clipped_line(boundary_line({Family::scrL_k, 2, false}, par), "fam");
    // scrL_3 drawn only along its singular extent (the A3/A4 edge)
    PartitionCell a3 = make_cell({Side::F, 3, false, false}, par);
    if (auto s = SvgWriter::line_in_polygon(boundary_line({Family::scrL_k, 3, false}, par), a3.poly))
        svg.segment(*s, "fam");
    Segment g2seg = make_g2b2_vsegment(par);
    svg.segment(g2seg, "famBold");
    svg.dot({w - par.alpha * y_meet(2, par), y_meet(2, par)}, "acc");
    svg.text({0.03 * w, 0.6 * w}, "S1", "lbl");
    svg.text({0.97 * w, 0.6 * w}, "S2", "lbl");
    svg.text({0.5 * w, 0.035 * w}, "S3", "lbl");
    svg.text({0.5 * w, 0.985 * w}, "S4", "lbl");
    svg.text({0.62 * w, 0.12 * w}, "G2(B2)", "lbl");
}

inline void figure_closeup(SvgWriter& svg, const Params& par) {
    PeriodicData pd = periodic_point(par);
    const double w = par.inv_alpha;
    // singularity families near p2
    for (int k = 2; k <= 160; ++k) svg.clipped_line(boundary_line({Family::scrL_k, k, false}, par), "fam");
    for (int k = 3; k <= 81; k += 2)
        svg.clipped_line(boundary_line({Family::scrL_k2, k, false}, par), "fam");
    svg.clipped_line(boundary_line({Family::scrL, 0, false}, par), "fam");
    svg.polygon(pd.M, "band");
    svg.clipped_line(boundary_line({Family::M1, 0, false}, par), "mline");
    svg.clipped_line(boundary_line({Family::M2, 0, false}, par), "mline");
    svg.segment(bar_scrL_segment(par), "famBold");
    svg.segment(pd.gamma_u, "gu");
    svg.segment(pd.gamma_s, "gs");
    double xb = x_bar(par);
    double xs = gamma_s_meets_scrL2(par, pd).x;
    svg.line({xb, y_bar(par)}, {xb, 0.88 * w}, "mark");
    svg.line({xs, gamma_s_meets_scrL2(par, pd).y}, {xs, 0.88 * w}, "mark");
    svg.dot(pd.z_p, "acc", 2.0);
    svg.dot({0.0, par.half_width()}, "acc");
    svg.text({xb, 0.905 * w}, "x-bar", "lblS");
    svg.text({xs, 0.905 * w}, "x-s", "lblS");
    svg.text({0.45 * xb, 0.92 * y_bar(par)}, "L-bar", "lblS");
}

}  // namespace detail

inline std::string render_figure_string(const FigureSpec& spec) {
    Params par = make_params(spec.alpha);  // rejects non-strict alpha
    const double w = par.inv_alpha;
    Vec2 lo{-0.04 * w, -0.04 * w}, hi{1.04 * w, 1.04 * w};
    if (spec.id == FigureId::fig4) {
        double xmax = std::max(x_bar(par), gamma_s_meets_scrL2(par, periodic_point(par)).x);
        lo = {-0.02 * w, y_bar(par) * 0.9};
        hi = {xmax * 1.35, par.half_width() * 1.04};
    }
    SvgWriter svg(lo, hi, spec.alpha, spec.seed);
    svg.style(detail::base_css());
    switch (spec.id) {
        case FigureId::fig2: detail::figure_partition(svg, par, Side::F); break;
        case FigureId::fig3a: detail::figure_partition(svg, par, Side::G); break;
        case FigureId::fig3b: detail::figure_band(svg, par); break;
        case FigureId::fig4: detail::figure_closeup(svg, par); break;
    }
    return svg.finish();
}

inline void render_figure(const FigureSpec& spec) {
    std::string out = render_figure_string(spec);
    std::ofstream os(spec.out_path, std::ios::binary);
    if (!os) throw domain_error("render_figure: cannot open " + spec.out_path);
    os << out;
}

}  // namespace ltm
