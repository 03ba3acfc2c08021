// Build the F-return partition, print each cell with its area, and trace a
// v-segment through one composite return step.

#include <cstdio>

#include "ltm/tracer.hpp"

using namespace ltm;

int main() {
    Params par = make_params(2.8);
    Partition part = build_partition(MapId::F, 9, par);
    double total = 0.0;
    for (const auto& c : part.cells) {
        std::printf("%-6s k=%2d area=%.6f\n", c.label.str().c_str(), c.label.k, c.poly.area());
        total += c.poly.area();
    }
    std::printf("covered %.6f of |S|=%.6f (tail %.2e)\n", total, par.inv_alpha * par.inv_alpha,
                part.tail_area);

    Segment vseg({0.2, 0.0}, {0.2, par.inv_alpha});
    std::printf("\nsplitting a v-segment at x=0.2 under F_S:\n");
    for (const auto& piece : map_segment_through(vseg, MapId::F, par, part, true)) {
        if (piece.tail) continue;
        std::printf("%-6s height=%.5f -> image width=%.5f\n", piece.label.str().c_str(),
                    piece.pre.ell_v(), piece.image->ell_h());
    }
    return 0;
}
