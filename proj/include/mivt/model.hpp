#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mivt/seed.hpp"
#include "mivt/trawl.hpp"

namespace mivt {

/// One trawl per component plus a shared seed law of matching dimension.
struct MivtModel {
    MivtModel(std::vector<TrawlSpec> trawls_, SeedSpec seed_);
    std::vector<TrawlSpec> trawls;
    SeedSpec seed;
    [[nodiscard]] std::size_t dim() const noexcept { return trawls.size(); }
};

struct SimConfig {
    double delta = 1.0;
    double horizon = 0.0;        // post-burn-in span T
    double burnin = 0.0;
    double eps_cut = 1e-12;      // jumps with all trawl heights below this are skipped
    std::uint64_t seed = 0;      // master RNG seed
};

/// Equally spaced multivariate counts, counts[i][k] for component i at grid
/// time (k+1)*delta.
struct CountSeries {
    double delta = 1.0;
    std::vector<std::string> labels;
    std::vector<std::vector<std::int64_t>> counts;

    [[nodiscard]] std::size_t dim() const noexcept { return counts.size(); }
    [[nodiscard]] std::size_t length() const noexcept {
        return counts.empty() ? 0 : counts.front().size();
    }
    /// Enforces the type invariants (rectangular, K >= 1, non-negative entries).
    void validate() const;
};

}  // namespace mivt
