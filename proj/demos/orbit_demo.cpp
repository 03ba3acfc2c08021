// Print a short H-orbit together with its return times to S, showing the
// slow returns near the accumulation points.

#include <cstdio>

#include "ltm/partition.hpp"

using namespace ltm;

int main() {
    Params par = make_params(2.5);
    TorusPoint p{0.01, 0.19};
    std::printf("alpha=%.2f  start=(%.4f, %.4f)\n", par.alpha, p.x, p.y);
    for (int i = 0; i < 12; ++i) {
        auto rt = return_time_oracle(p, MapId::H, 1000, par);
        std::printf("point=(%.6f, %.6f)  in_S=%d  next return in %d\n", p.x, p.y,
                    in_S(p, par) ? 1 : 0, rt.value_or(-1));
        p = apply_map(MapId::H, rt.value_or(1), p, par);
    }
    return 0;
}
