#include "mivt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mivt/errors.hpp"

namespace mivt {

namespace {

struct GridShape {
    std::int64_t k_burnin = 0;
    std::int64_t k_total = 0;
};

GridShape normalize_grid(const SimConfig& cfg, std::vector<std::string>* warnings) {
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("simulate: delta must be positive");
    if (!(cfg.horizon > 0.0)) throw std::invalid_argument("simulate: horizon must be positive");
    if (cfg.burnin < 0.0) throw std::invalid_argument("simulate: burnin must be >= 0");
    if (!(cfg.eps_cut >= 0.0 && cfg.eps_cut < 1.0))
        throw std::invalid_argument("simulate: eps_cut must lie in [0, 1)");

    GridShape g;
    const double kt = cfg.horizon / cfg.delta;
    g.k_total = std::max<std::int64_t>(1, std::llround(kt));
    if (warnings && std::abs(kt - static_cast<double>(g.k_total)) > 1e-9)
        warnings->push_back("horizon is not a multiple of delta; rounded to " +
                            std::to_string(static_cast<double>(g.k_total) * cfg.delta));
    const double kb = cfg.burnin / cfg.delta;
    g.k_burnin = std::max<std::int64_t>(0, std::llround(kb));
    if (warnings && std::abs(kb - static_cast<double>(g.k_burnin)) > 1e-9)
        warnings->push_back("burnin is not a multiple of delta; rounded to " +
                            std::to_string(static_cast<double>(g.k_burnin) * cfg.delta));
    g.k_total += g.k_burnin;
    return g;
}

}  // namespace

Burnin default_burnin(const MivtModel& model, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("default_burnin: eps must lie in (0, 1)");
    Burnin result;
    for (const TrawlSpec& t : model.trawls) {
        result.duration = std::max(result.duration, -envelope_inverse(t, eps));
        if (std::holds_alternative<GammaLongMemory>(t)) result.long_memory_warning = true;
    }
    return result;
}

std::vector<std::vector<Jump>> draw_jumps(const MivtModel& model, const SimConfig& cfg) {
    GridShape grid = normalize_grid(cfg, nullptr);
    const double t_total = static_cast<double>(grid.k_total) * cfg.delta;
    const CpRepresentation rep = cp_representation(model.seed);

    std::vector<std::vector<Jump>> out;
    out.reserve(rep.blocks.size());
    for (std::size_t b = 0; b < rep.blocks.size(); ++b) {
        Engine rng = make_engine(cfg.seed, b);
        const BlockSampler sampler(rep.blocks[b], rep.dim);
        const double expected = sampler.rate() * t_total;
        if (expected > 2147483647.0)
            throw resource_error("simulate: expected jump count exceeds 2^31");

        std::poisson_distribution<std::int64_t> pois(expected);
        const std::int64_t n_jumps = pois(rng);
        std::vector<Jump> jumps(static_cast<std::size_t>(n_jumps));

        std::uniform_real_distribution<double> unif_time(0.0, t_total);
        for (Jump& j : jumps) j.time = unif_time(rng);
        std::sort(jumps.begin(), jumps.end(),
                  [](const Jump& a, const Jump& b2) { return a.time < b2.time; });

        std::uniform_real_distribution<double> unif01(0.0, 1.0);
        for (Jump& j : jumps) j.height = unif01(rng);
        for (Jump& j : jumps) j.mark = sampler(rng);
        out.push_back(std::move(jumps));
    }
    return out;
}

CountSeries simulate_mivt(const MivtModel& model, const SimConfig& cfg,
                          std::vector<std::string>* warnings) {
    GridShape grid = normalize_grid(cfg, warnings);
    const std::size_t n = model.dim();
    const std::int64_t k_total = grid.k_total;
    const double delta = cfg.delta;

    // difference arrays for the contiguous monotone-trawl ranges
    std::vector<std::vector<std::int64_t>> diff(n,
                                                std::vector<std::int64_t>(k_total + 2, 0));
    std::vector<std::vector<std::int64_t>> direct;  // seasonal components only

    std::vector<bool> monotone(n);
    std::vector<double> seasonal_rate(n, 0.0);
    bool any_seasonal = false;
    for (std::size_t i = 0; i < n; ++i) {
        monotone[i] = is_monotone(model.trawls[i]);
        if (!monotone[i]) {
            seasonal_rate[i] = std::get<SeasonalExp>(model.trawls[i]).lambda;
            any_seasonal = true;
        }
    }
    if (any_seasonal) direct.assign(n, std::vector<std::int64_t>(k_total + 1, 0));

    const double floor_height = std::max(cfg.eps_cut, 1e-300);
    const std::vector<std::vector<Jump>> blocks = draw_jumps(model, cfg);
    for (const std::vector<Jump>& jumps : blocks) {
        for (const Jump& j : jumps) {
            const std::int64_t k_lo =
                std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(j.time / delta)));
            if (k_lo > k_total) continue;
            const double height = std::max(j.height, floor_height);
            for (std::size_t i = 0; i < n; ++i) {
                const std::int64_t m = j.mark[i];
                if (m == 0) continue;
                if (monotone[i]) {
                    const double window = -envelope_inverse(model.trawls[i], height);
                    const std::int64_t k_hi = std::min<std::int64_t>(
                        k_total, static_cast<std::int64_t>(std::floor((j.time + window) / delta)));
                    if (k_lo > k_hi) continue;
                    diff[i][static_cast<std::size_t>(k_lo)] += m;
                    diff[i][static_cast<std::size_t>(k_hi + 1)] -= m;
                } else {
                    const double window = -std::log(height) / seasonal_rate[i];
                    const std::int64_t k_hi = std::min<std::int64_t>(
                        k_total, static_cast<std::int64_t>(std::floor((j.time + window) / delta)));
                    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
                        const double z = j.time - static_cast<double>(k) * delta;
                        if (j.height <= evaluate(model.trawls[i], std::min(z, 0.0)))
                            direct[i][static_cast<std::size_t>(k)] += m;
                    }
                }
            }
        }
    }

    CountSeries series;
    series.delta = delta;
    const std::int64_t k_keep = k_total - grid.k_burnin;
    series.counts.assign(n, std::vector<std::int64_t>(static_cast<std::size_t>(k_keep), 0));
    for (std::size_t i = 0; i < n; ++i) {
        series.labels.push_back("y" + std::to_string(i + 1));
        std::int64_t running = 0;
        for (std::int64_t k = 1; k <= k_total; ++k) {
            running += diff[i][static_cast<std::size_t>(k)];
            if (k > grid.k_burnin) {
                std::int64_t value = running;
                if (!monotone[i]) value += direct[i][static_cast<std::size_t>(k)];
                series.counts[i][static_cast<std::size_t>(k - grid.k_burnin - 1)] = value;
            }
        }
    }
    series.validate();
    return series;
}

}  // namespace mivt
