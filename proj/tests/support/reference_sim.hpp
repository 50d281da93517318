#pragma once

// Direct O(jumps x grid) evaluation of the slice sum: for every grid point,
// walk every jump and apply the height-in-trawl indicator. Slow but literal;
// the production simulator must agree with it exactly on the same jump draws.

#include <cmath>
#include <string>
#include <vector>

#include "mivt/simulate.hpp"

namespace mivt_test {

inline mivt::CountSeries reference_simulate(const mivt::MivtModel& model,
                                            const mivt::SimConfig& cfg) {
    const auto k_grid = static_cast<std::int64_t>(std::llround(cfg.horizon / cfg.delta));
    const auto k_burn = static_cast<std::int64_t>(std::llround(cfg.burnin / cfg.delta));
    const std::int64_t k_total = k_grid + k_burn;
    const std::size_t n = model.dim();

    const std::vector<std::vector<mivt::Jump>> blocks = mivt::draw_jumps(model, cfg);

    mivt::CountSeries series;
    series.delta = cfg.delta;
    for (std::size_t i = 0; i < n; ++i) series.labels.push_back("y" + std::to_string(i + 1));
    series.counts.assign(n, std::vector<std::int64_t>(static_cast<std::size_t>(k_grid), 0));

    for (std::int64_t k = k_burn + 1; k <= k_total; ++k) {
        const double t_k = static_cast<double>(k) * cfg.delta;
        for (const std::vector<mivt::Jump>& jumps : blocks) {
            for (const mivt::Jump& j : jumps) {
                if (j.time > t_k) break;  // jumps are time-sorted
                for (std::size_t i = 0; i < n; ++i) {
                    if (j.mark[i] == 0) continue;
                    const double z = std::min(j.time - t_k, 0.0);
                    if (j.height <= mivt::evaluate(model.trawls[i], z))
                        series.counts[i][static_cast<std::size_t>(k - k_burn - 1)] += j.mark[i];
                }
            }
        }
    }
    return series;
}

}  // namespace mivt_test
