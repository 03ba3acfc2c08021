#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "ltm/core.hpp"
#include "ltm/expansion.hpp"
#include "ltm/periodic.hpp"

namespace ltm {

struct no_bracket : domain_error {
    explicit no_bracket(const std::string& msg) : domain_error(msg) {}
};

// Scalar bisection to machine convergence; the defining functions are cheap.
template <typename F>
inline double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw no_bracket("bisect: no sign change on [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

enum class ThresholdId { alpha0, alpha1, alpha2, alpha3, alpha4, alpha5, alpha7, alpha8 };

inline const char* threshold_name(ThresholdId id) {
    switch (id) {
        case ThresholdId::alpha0: return "alpha0";
        case ThresholdId::alpha1: return "alpha1";
        case ThresholdId::alpha2: return "alpha2";
        case ThresholdId::alpha3: return "alpha3";
        case ThresholdId::alpha4: return "alpha4";
        case ThresholdId::alpha5: return "alpha5";
        case ThresholdId::alpha7: return "alpha7";
        case ThresholdId::alpha8: return "alpha8";
    }
    return "?";
}

// gamma_u ∩ scrL as lines (the segment reaches scrL throughout the window).
inline Vec2 gamma_u_meets_scrL(const Params& par, const PeriodicData& pd) {
    Line gu = Line::point_slope(pd.z_p, pd.g_plus);
    Line l = boundary_line({Family::scrL, 0, false}, par);
    auto pt = line_intersect(gu, l);
    if (!pt) throw domain_error("gamma_u parallel to scrL");
    return *pt;
}

// gamma_s ∩ scrL_2 as lines.
inline Vec2 gamma_s_meets_scrL2(const Params& par, const PeriodicData& pd) {
    Line gs = Line::point_slope(pd.z_p, pd.g_minus);
    Line l2 = boundary_line({Family::scrL_k, 2, false}, par);
    auto pt = line_intersect(gs, l2);
    if (!pt) throw domain_error("gamma_s parallel to scrL_2");
    return *pt;
}

// Defining scalar function of each threshold; the root is the threshold. All
// are assembled from the live geometric constructions except alpha1 (explicit
// cubic) and alpha0 (explicit expansion-factor sum).
inline double threshold_function(ThresholdId id, double alpha) {
    if (id == ThresholdId::alpha1)
        return 2.0 * alpha * alpha * alpha - 4.0 * alpha * alpha - alpha + 1.0;
    Params par = make_params(alpha);
    switch (id) {
        case ThresholdId::alpha0:
            return growth_sum({1, 3, 4}, par) - 1.0;
        case ThresholdId::alpha8:
            return f_alpha(7, par);
        default: break;
    }
    PeriodicData pd = periodic_point(par);
    const double a = alpha;
    const double w = par.inv_alpha;
    switch (id) {
        case ThresholdId::alpha2: {
            double yu = gamma_u_meets_scrL(par, pd).y;
            // x-coordinate of gamma_u'' ∩ ∂S4 minus that of I2-image boundary of B2
            return (yu - w + 1.0) / a - 0.5 * (w + w * w);
        }
        case ThresholdId::alpha3:
            return gamma_u_meets_scrL(par, pd).y - y_meet(2, par);
        case ThresholdId::alpha4: {
            double yu = gamma_u_meets_scrL(par, pd).y;
            double xu2 = w + 2.0 * a * yu - 1.0;  // F^3-image of the scrL crossing
            return yu - (w + a * xu2 - 1.0);
        }
        case ThresholdId::alpha5:
            return x_bar(par) - gamma_s_meets_scrL2(par, pd).x;
        case ThresholdId::alpha7:
            return base_case_margin(par, pd);
        default: break;
    }
    throw domain_error("threshold_function: unhandled id");
}

struct ThresholdResult {
    ThresholdId id;
    double value = 0.0;
    double residual = 0.0;
};

inline ThresholdResult solve_threshold(ThresholdId id) {
    double lo = 2.02, hi = 2.4;
    switch (id) {
        case ThresholdId::alpha0: lo = 2.02; hi = 2.5; break;
        case ThresholdId::alpha1: lo = 2.0; hi = 2.5; break;
        case ThresholdId::alpha3: lo = 2.4; hi = 2.95; break;
        case ThresholdId::alpha8: lo = 2.0005; hi = 2.4; break;
        default: break;
    }
    auto f = [id](double a) { return threshold_function(id, a); };
    double root = bisect(f, lo, hi);
    return {id, root, std::abs(f(root))};
}

inline std::vector<ThresholdResult> solve_all_thresholds() {
    std::vector<ThresholdResult> out;
    for (ThresholdId id : {ThresholdId::alpha0, ThresholdId::alpha1, ThresholdId::alpha2,
                           ThresholdId::alpha3, ThresholdId::alpha4, ThresholdId::alpha5,
                           ThresholdId::alpha7, ThresholdId::alpha8})
        out.push_back(solve_threshold(id));
    return out;
}

}  // namespace ltm
