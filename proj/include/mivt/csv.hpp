#pragma once

#include <string>
#include <vector>

#include "mivt/model.hpp"

namespace mivt {

/// Counts CSV: header `t,<label1>,...,<labeln>`, one row per bin with
/// t = (k+1)*delta. Counts round-trip exactly.
void write_counts_csv(const CountSeries& series, const std::string& path);
CountSeries read_counts_csv(const std::string& path);

/// Events CSV: single `timestamp` column (seconds). Values are sorted on read.
std::vector<double> read_events_csv(const std::string& path);

/// Bin per-component event timestamps into counts over [start, end) with
/// half-open bins [start + k delta, start + (k+1) delta); events outside the
/// spanned bins are discarded.
CountSeries bin_events(const std::vector<std::vector<double>>& events, double delta,
                       double start, double end, std::vector<std::string> labels = {});

/// ACF CSV: header `lag,r`, lags 1..max_lag in bins.
void write_acf_csv(const std::vector<double>& acf_values, const std::string& path);

}  // namespace mivt
