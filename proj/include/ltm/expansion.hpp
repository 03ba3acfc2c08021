#pragma once

#include <vector>

#include "ltm/core.hpp"
#include "ltm/families.hpp"

namespace ltm {

// Minimum sup-norm expansion of cone vectors under DF^k: E_k = k*alpha + L.
// Strictly increasing in k and > 1 for alpha > 2; E_1 = -1/L.
inline double expansion_factor(int k, const Params& par) {
    if (k < 1) throw domain_error("expansion_factor: k must be >= 1");
    return k * par.alpha + par.L;
}

// Sum of reciprocal expansion factors over the return times of the pieces of
// a split segment; below 1 it certifies a definitely-expanding piece.
inline double growth_sum(const std::vector<int>& K, const Params& par) {
    if (K.empty()) throw domain_error("growth_sum: empty return-time list");
    double s = 0.0;
    for (int k : K) s += 1.0 / expansion_factor(k, par);
    return s;
}

// Height cap for segments traversing A_k^2 but not A_(k-4)^2: intersection of
// scrL_(k-4)^2 with the line of slope 1/L through scrL_k^2 ∩ scrL_2.
inline double y_l(int k, const Params& par) {
    if (k < 7 || k % 2 == 0) throw domain_error("y_l: odd k >= 7 required");
    const double a = par.alpha;
    const double L = par.L;
    double qx = (a - 2.0) / ((k - 2) * a);  // x of scrL_k^2 ∩ scrL_2
    return ((k - 4) * a * Y_meet(k - 4, par) - qx + L * Y_meet(k - 2, par)) / (L + (k - 4) * a);
}

// Inductive-step margin of the growth estimate near p2. Positive for all odd
// k >= 7 once alpha exceeds the root of f_alpha(7).
inline double f_alpha(int k, const Params& par) {
    if (k < 7 || k % 2 == 0) throw domain_error("f_alpha: odd k >= 7 required");
    double E2 = expansion_factor(2, par);
    double Ek = expansion_factor(k, par);
    double slack = par.half_width() - y_l(k, par);
    return (Y_meet(k, par) - Y_meet(k - 2, par)) * Ek - slack / (1.0 - 1.0 / E2);
}

}  // namespace ltm
