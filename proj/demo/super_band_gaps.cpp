// Certified super band gaps of the golden-mean rod, checked against the pass
// bands of a few periodic approximants.

#include <cstdio>

#include "fibgap/fibgap.hpp"
#include "fibgap/presets.hpp"

int main() {
    using namespace fibgap;
    const SystemSpec rod(presets::fig5_rod());
    const double top = 2.0 * presets::canonical_half_period(presets::fig5_rod());
    const FrequencyGrid grid(0.0, top, 2000);

    const GapReport gaps = sweep(rod, rules::golden, grid, 4);
    std::printf("S_4 for the golden rod, omega in [0, %.1f] rad/s\n", top);
    for (const auto& g : gaps.intervals) {
        std::printf("  [%10.2f, %10.2f]  %s, anchor %d\n", g.range.lo, g.range.hi,
                    to_string(g.certificate.condition).c_str(), g.certificate.anchor);
    }

    for (int n = 4; n <= 7; ++n) {
        const auto bands = passbands(rod, rules::golden, n, grid);
        bool clash = false;
        for (const auto& b : bands)
            for (const auto& g : gaps.intervals) clash = clash || b.intersects(g.range);
        std::printf("F_%d: %zu pass bands, %s\n", n, bands.size(), clash ? "OVERLAP with S_4" : "disjoint from S_4");
    }
    return 0;
}
