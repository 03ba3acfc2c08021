#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <tuple>
#include <vector>

#include "ltm/core.hpp"
#include "ltm/families.hpp"
#include "ltm/geometry.hpp"
#include "ltm/rng.hpp"
#include "ltm/version.hpp"

namespace ltm {

inline constexpr int kCellHardCap = 100000;  // beyond this a piece is tail, full stop

// Smallest i >= 1 with map^i(p) in S, by direct iteration. p may lie anywhere
// in the annulus of the map (hitting-time semantics); nullopt when not found
// within max_iter, which flags either a periodic segment or a short budget.
inline std::optional<int> return_time_oracle(TorusPoint p, MapId map, int max_iter,
                                             const Params& par) {
    if (map != MapId::F && map != MapId::G && map != MapId::H)
        throw domain_error("return_time_oracle: map must be F, G or H");
    p = reduce(p);
    if (!in_R(p, par)) throw domain_error("return_time_oracle: point outside R");
    for (int i = 1; i <= max_iter; ++i) {
        p = detail::map_step(map, p, par);
        if (in_S(p, par)) return i;
    }
    return std::nullopt;
}

namespace detail {

// F-side return time plus wrap count of the working coordinate; the pair
// identifies the cell family: wrap 1 = A_k, k-1 = A_k*, (k-1)/2 = A_k^2,
// (k+1)/2 = A_k^2* (k = 1: wrap 0 = A1, 1 = A1*).
struct HitInfo {
    int time = 0;
    int wraps = 0;
};

inline std::optional<HitInfo> f_hit_info(const Vec2& p, const Params& par, int cap) {
    if (p.y < -kGeoTol || p.y > par.inv_alpha + kGeoTol)
        throw domain_error("f_hit_info: point outside P");
    const double ay = par.alpha * p.y;
    for (int i = 1; i <= cap; ++i) {
        double unred = p.x + i * ay;
        double r = mod1(unred);
        if (r <= par.inv_alpha) {
            int wraps = static_cast<int>(std::llround(unred - r));
            return HitInfo{i, wraps};
        }
    }
    return std::nullopt;
}

inline std::optional<CellLabel> label_from_hit(const HitInfo& h) {
    const int k = h.time;
    const int w = h.wraps;
    if (k == 1) {
        if (w == 0) return CellLabel{Side::F, 1, false, false};
        if (w == 1) return CellLabel{Side::F, 1, false, true};
        return std::nullopt;
    }
    if (w == 1) return CellLabel{Side::F, k, false, false};
    if (w == k - 1) return CellLabel{Side::F, k, false, k != 2};
    if (k >= 5 && k % 2 == 1) {
        if (w == (k - 1) / 2) return CellLabel{Side::F, k, true, false};
        if (w == (k + 1) / 2) return CellLabel{Side::F, k, true, true};
    }
    return std::nullopt;
}

}  // namespace detail

// Analytic cell identity of a point of S under the return map of the given
// side, valid for arbitrarily large return times (up to cap).
inline std::optional<CellLabel> locate_cell(Vec2 p, Side side, const Params& par,
                                            int cap = kCellHardCap) {
    if (side == Side::G) p = {par.inv_alpha - p.y, p.x};  // I3^-1 transports B-cells to A-cells
    auto hit = detail::f_hit_info(p, par, cap);
    if (!hit) return std::nullopt;
    auto label = detail::label_from_hit(*hit);
    if (!label) return std::nullopt;
    label->side = side;
    return label;
}

struct Partition {
    Side side = Side::F;
    int k_max = 0;
    Params par;
    std::vector<PartitionCell> cells;
    std::vector<Polygon> tails;  // uncovered wedges at the four accumulation points
    double tail_area = 0.0;

    const PartitionCell* find(const CellLabel& label) const {
        for (const auto& c : cells)
            if (c.label == label) return &c;
        return nullptr;
    }

    // Cells beyond k_max are built on demand from the closed-form families so
    // callers tracing near the accumulation points never starve.
    const PartitionCell* cell_on_demand(const CellLabel& label) const {
        if (const PartitionCell* c = find(label)) return c;
        if (label.k > kCellHardCap) return nullptr;
        std::lock_guard<std::mutex> lock(ext_->mutex);
        auto key = std::make_tuple(label.k, label.secondary, label.starred);
        auto it = ext_->cache.find(key);
        if (it == ext_->cache.end()) {
            CellLabel l = label;
            l.side = side;
            it = ext_->cache.emplace(key, make_cell(l, par)).first;
        }
        return &it->second;
    }

  private:
    struct ExtCache {
        std::mutex mutex;
        std::map<std::tuple<int, bool, bool>, PartitionCell> cache;
    };
    std::unique_ptr<ExtCache> ext_ = std::make_unique<ExtCache>();
};

inline Partition build_partition(MapId map, int k_max, const Params& par) {
    if (map != MapId::F && map != MapId::G)
        throw domain_error("build_partition: map must be F or G");
    if (!par.strict()) throw domain_error("build_partition: strict parameter mode required");
    if (k_max < 5) throw domain_error("build_partition: k_max must be >= 5");
    const Side side = (map == MapId::F) ? Side::F : Side::G;

    Partition part;
    part.side = side;
    part.k_max = k_max;
    part.par = par;

    auto add = [&](int k, bool secondary, bool starred) {
        part.cells.push_back(make_cell(CellLabel{side, k, secondary, starred}, par));
    };
    add(1, false, false);
    add(1, false, true);
    add(2, false, false);  // self-starred central band
    add(3, false, false);
    add(3, false, true);
    for (int k = 4; k <= k_max; ++k) {
        add(k, false, false);
        add(k, false, true);
    }
    for (int k = 5; k <= k_max; k += 2) {
        add(k, true, false);
        add(k, true, true);
    }

    const double h = par.half_width();
    const MapId oracle_map = (side == Side::F) ? MapId::F : MapId::G;
    for (const auto& c : part.cells) {
        if (!c.poly.is_convex()) throw domain_error("build_partition: non-convex cell " + c.label.str());
        Vec2 g = c.poly.centroid();
        auto rt = return_time_oracle({g.x, g.y}, oracle_map, 4 * k_max + 64, par);
        if (!rt || *rt != c.label.k)
            throw domain_error("build_partition: centroid return time mismatch in " + c.label.str());
        if (c.label.side == Side::F && c.label.k != 2) {
            // no cell may cross the symmetry line y = 1/(2a)
            for (const Vec2& v : c.poly.v) {
                bool below = v.y <= h + kGeoTol;
                bool above = v.y >= h - kGeoTol;
                if (c.label.starred ? !above : !below)
                    throw domain_error("build_partition: cell crosses the symmetry line: " + c.label.str());
            }
        }
    }

    // uncovered wedges at p1, p2 and their images
    Polygon sq = detail::s_square(par);
    const double a = par.alpha;
    const double w = par.inv_alpha;
    Polygon t1 = clip_halfplane(sq, Line(1.0, a, w), +1);
    t1 = clip_halfplane(t1, Line(1.0, k_max * a, 1.0), -1);
    int ks = (k_max % 2 == 1) ? k_max : k_max - 1;
    Polygon t2 = clip_halfplane(sq, Line(1.0, 2.0 * a, 1.0), -1);
    t2 = clip_halfplane(t2, Line(1.0, ks * a, 0.5 * (ks - 1) + w), +1);
    for (Polygon* t : {&t1, &t2}) {
        if (t->empty()) continue;
        Polygon starred = detail::i1_image(*t, par);
        Polygon base = *t;
        if (side == Side::G) {
            base = detail::i3_image(base, par);
            starred = detail::i3_image(starred, par);
        }
        part.tails.push_back(base);
        part.tails.push_back(starred);
    }
    part.tail_area = 0.0;
    for (const auto& t : part.tails) part.tail_area += t.area();
    return part;
}

enum class ClassifyKind { Cell, Boundary, Tail };

struct ClassifyResult {
    ClassifyKind kind = ClassifyKind::Tail;
    const PartitionCell* cell = nullptr;
};

// Open-cell classification with an eps ambiguity band: no cell claims its
// boundary, which is the singularity set.
inline ClassifyResult classify(const Vec2& p, const Partition& part) {
    const double w = part.par.inv_alpha;
    if (p.x < -kGeoTol || p.x > w + kGeoTol || p.y < -kGeoTol || p.y > w + kGeoTol)
        throw domain_error("classify: point outside S");
    const PartitionCell* loose = nullptr;
    for (const auto& c : part.cells) {
        if (c.poly.contains(p, -kGeoTol)) return {ClassifyKind::Cell, &c};
        if (!loose && c.poly.contains(p, kGeoTol)) loose = &c;
    }
    if (loose) return {ClassifyKind::Boundary, loose};
    return {ClassifyKind::Tail, nullptr};
}

struct Disagreement {
    Vec2 p;
    std::string cell;
    int cell_k = 0;
    int oracle_k = 0;
};

struct ValidationReport {
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::size_t checked = 0;
    std::size_t agreements = 0;
    std::size_t boundary_flags = 0;
    std::size_t tail_flags = 0;
    std::size_t tail_consistent = 0;
    std::vector<Disagreement> disagreements;

    double agreement_fraction() const {
        return checked ? static_cast<double>(agreements) / static_cast<double>(checked) : 1.0;
    }
};

// Compare the analytic partition against the brute-force oracle on uniform
// random points of S. Sample i is fully determined by (seed, i).
inline ValidationReport validate_partition(const Partition& part, std::size_t n_samples,
                                           const Params& par, std::uint64_t seed = 42) {
    ValidationReport rep;
    rep.seed = seed;
    rep.samples = n_samples;
    if (n_samples == 0) return rep;

    const MapId oracle_map = (part.side == Side::F) ? MapId::F : MapId::G;
    const int max_iter = 64 * part.k_max + 256;

    struct Row {
        char code = 0;  // a=agree, d=disagree, b=boundary, t=tail, T=tail-consistent
        int cell_k = 0;
        int oracle_k = 0;
        Vec2 p;
    };
    std::vector<Row> rows(n_samples);

    parallel_for(n_samples, [&](std::size_t i) {
        Rng rng = sample_rng(seed, i);
        Vec2 p{rng.uniform(0.0, par.inv_alpha), rng.uniform(0.0, par.inv_alpha)};
        Row& row = rows[i];
        row.p = p;
        ClassifyResult cr = classify(p, part);
        if (cr.kind == ClassifyKind::Boundary) {
            row.code = 'b';
            return;
        }
        auto rt = return_time_oracle({p.x, p.y}, oracle_map, max_iter, par);
        if (cr.kind == ClassifyKind::Tail) {
            row.code = (rt && *rt <= part.k_max) ? 't' : 'T';
            row.oracle_k = rt.value_or(-1);
            return;
        }
        row.cell_k = cr.cell->label.k;
        row.oracle_k = rt.value_or(-1);
        row.code = (rt && *rt == cr.cell->label.k) ? 'a' : 'd';
    });

    for (std::size_t i = 0; i < n_samples; ++i) {
        const Row& row = rows[i];
        switch (row.code) {
            case 'b': ++rep.boundary_flags; break;
            case 'T': ++rep.tail_flags; ++rep.tail_consistent; break;
            case 't': ++rep.tail_flags; break;
            case 'a': ++rep.checked; ++rep.agreements; break;
            case 'd':
                ++rep.checked;
                if (rep.disagreements.size() < 16) {
                    Vec2 p = row.p;
                    ClassifyResult cr = classify(p, part);
                    rep.disagreements.push_back(
                        {p, cr.cell ? cr.cell->label.str() : "?", row.cell_k, row.oracle_k});
                }
                break;
            default: break;
        }
    }
    return rep;
}

inline void export_partition_csv(const Partition& part, std::ostream& os) {
    os << "# alpha=" << part.par.alpha << " k_max=" << part.k_max
       << " side=" << (part.side == Side::F ? 'F' : 'G') << " tool=ltm " << kVersion << "\n";
    os << "label,k,vertices\n";
    for (const auto& c : part.cells) {
        os << c.label.str() << "," << c.label.k << ",\"";
        for (size_t i = 0; i < c.poly.v.size(); ++i) {
            if (i) os << ";";
            os << c.poly.v[i].x << " " << c.poly.v[i].y;
        }
        os << "\"\n";
    }
}

}  // namespace ltm
