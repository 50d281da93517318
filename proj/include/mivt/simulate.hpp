#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mivt/model.hpp"

namespace mivt {

struct Burnin {
    double duration = 0.0;
    bool long_memory_warning = false;  // set for power-law trawls
};

/// Smallest burn-in such that every component's trawl height at -duration is
/// at or below eps (monotone families; the exponential envelope is used for
/// the seasonal family). Power-law components only reach eps polynomially
/// slowly, which the flag surfaces.
Burnin default_burnin(const MivtModel& model, double eps);

/// One point of the driving compound-Poisson pattern: arrival time, uniform
/// height and integer mark vector.
struct Jump {
    double time;
    double height;
    std::vector<std::int64_t> mark;
};

/// The jump pattern simulate_mivt consumes, one vector per seed block, drawn
/// on [0, burnin + horizon]. Deterministic given (model, cfg); block b uses
/// the RNG stream derived from (cfg.seed, b).
std::vector<std::vector<Jump>> draw_jumps(const MivtModel& model, const SimConfig& cfg);

/// Slice-based exact path simulation on the delta-grid of [0, burnin+horizon],
/// with the first burnin/delta points discarded. Jump-major accumulation:
/// for monotone trawls each (jump, component) pair covers the contiguous grid
/// range where the height stays inside the trawl; the seasonal family tests
/// the indicator per grid point inside its exponential envelope window.
CountSeries simulate_mivt(const MivtModel& model, const SimConfig& cfg,
                          std::vector<std::string>* warnings = nullptr);

}  // namespace mivt
