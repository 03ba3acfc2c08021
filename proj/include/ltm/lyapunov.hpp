#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ltm/core.hpp"
#include "ltm/rng.hpp"

namespace ltm {

struct LyapunovEstimate {
    double lambda = 0.0;        // mean per-iterate log growth over restarts
    int n_iter = 0;
    double ci_halfwidth = 0.0;  // half the spread across restarts
    std::uint64_t seed = 0;
    std::vector<double> per_restart;
};

namespace detail {

inline double lyapunov_single(MapId map, TorusPoint p, int n_iter, const Params& par,
                              double vx, double vy) {
    // renormalize every 16 steps: per-step growth is bounded by ~alpha^2 + 1
    double logsum = 0.0;
    int since_norm = 0;
    for (int i = 0; i < n_iter; ++i) {
        Mat2 j = detail::step_jac(map, p, par);
        j.apply(vx, vy);
        if (++since_norm == 16) {
            double n = std::sqrt(vx * vx + vy * vy);
            logsum += std::log(n);
            vx /= n;
            vy /= n;
            since_norm = 0;
        }
    }
    double n = std::sqrt(vx * vx + vy * vy);
    logsum += std::log(n);
    return logsum / n_iter;
}

inline TorusPoint random_point_in_R(Rng& rng, const Params& par) {
    for (;;) {
        TorusPoint p{rng.uniform01(), rng.uniform01()};
        if (in_R(p, par)) return p;
    }
}

}  // namespace detail

// Largest Lyapunov exponent along the orbit of p, averaged over restarts:
// restart 0 starts at p, further restarts at seeded random points of R, each
// with a random unit tangent. Deterministic for a fixed seed.
inline LyapunovEstimate lyapunov(MapId map, TorusPoint p, int n_iter, const Params& par,
                                 std::uint64_t seed = 42, int restarts = 8) {
    if (n_iter < 1000) throw domain_error("lyapunov: n_iter must be >= 1000");
    if (restarts < 1) throw domain_error("lyapunov: restarts must be >= 1");
    LyapunovEstimate est;
    est.n_iter = n_iter;
    est.seed = seed;
    double lo = 1e300, hi = -1e300, sum = 0.0;
    for (int r = 0; r < restarts; ++r) {
        Rng rng = sample_rng(seed, static_cast<std::uint64_t>(r));
        TorusPoint start = (r == 0) ? reduce(p) : detail::random_point_in_R(rng, par);
        double phi = rng.uniform(0.0, 6.283185307179586);
        double lam = detail::lyapunov_single(map, start, n_iter, par, std::cos(phi), std::sin(phi));
        est.per_restart.push_back(lam);
        sum += lam;
        lo = std::min(lo, lam);
        hi = std::max(hi, lam);
    }
    est.lambda = sum / restarts;
    est.ci_halfwidth = 0.5 * (hi - lo);
    return est;
}

struct OccupancyReport {
    int bins = 0;
    std::uint64_t n_points = 0;
    std::uint64_t n_iter = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> counts;  // bins x bins over the torus, row-major

    std::uint64_t total() const {
        std::uint64_t t = 0;
        for (auto c : counts) t += c;
        return t;
    }
};

// Visit-frequency histogram of an ensemble of H-orbits started uniformly in
// R; every iterate (including t = 0) is binned on a torus grid.
inline OccupancyReport occupancy(int n_points, int n_iter, int bins, const Params& par,
                                 std::uint64_t seed = 42) {
    if (n_points < 1 || n_iter < 0 || bins < 1) throw domain_error("occupancy: bad counts");
    OccupancyReport rep;
    rep.bins = bins;
    rep.n_points = n_points;
    rep.n_iter = n_iter;
    rep.seed = seed;
    rep.counts.assign(static_cast<std::size_t>(bins) * bins, 0);
    for (int ip = 0; ip < n_points; ++ip) {
        Rng rng = sample_rng(seed, static_cast<std::uint64_t>(ip));
        TorusPoint p = detail::random_point_in_R(rng, par);
        for (int t = 0; t <= n_iter; ++t) {
            int bx = std::min(bins - 1, static_cast<int>(p.x * bins));
            int by = std::min(bins - 1, static_cast<int>(p.y * bins));
            ++rep.counts[static_cast<std::size_t>(by) * bins + bx];
            if (t < n_iter) p = detail::map_step(MapId::H, p, par);
        }
    }
    return rep;
}

// Max/min visit ratio over grid cells fully contained in R (cells straddling
// the annulus boundaries are excluded; a cell lies in R iff it lies in P or in Q).
inline double occupancy_ratio(const OccupancyReport& rep, const Params& par) {
    const int b = rep.bins;
    std::uint64_t lo = UINT64_MAX, hi = 0;
    for (int j = 0; j < b; ++j) {
        for (int i = 0; i < b; ++i) {
            bool in_p = (static_cast<double>(j + 1) / b) <= par.inv_alpha + 1e-12;
            bool in_q = (static_cast<double>(i + 1) / b) <= par.inv_alpha + 1e-12;
            if (!in_p && !in_q) continue;
            std::uint64_t c = rep.counts[static_cast<std::size_t>(j) * b + i];
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    }
    if (lo == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(hi) / static_cast<double>(lo);
}

}  // namespace ltm
