#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mivt/model.hpp"

namespace mivt {

/// Sample ACF r^e(1..max_lag) with 1/K autocovariance denominators (positive
/// semidefinite convention); lag units are bins.
std::vector<double> sample_acf(const CountSeries& series, std::size_t component,
                               std::size_t max_lag);

/// Empirical cross-covariance (1/K) sum (y_i,k - m_i)(y_j,k+h - m_j); h may be
/// negative, with sample_ccov(i, j, h) == sample_ccov(j, i, -h).
double sample_ccov(const CountSeries& series, std::size_t i, std::size_t j, std::int64_t lag);

/// First four cumulant estimates (mean, m2, m3, m4 - 3 m2^2); entries above
/// `order` are zero.
std::array<double, 4> sample_cumulants(const CountSeries& series, std::size_t component,
                                       int order = 4);

struct ComponentSummary {
    double min, q1, median, mean, q3, max;
    double variance;
    double overdispersion;  // variance / mean
};

struct MomentSummary {
    std::vector<std::string> labels;
    std::vector<ComponentSummary> components;
    std::vector<std::vector<double>> correlation;  // pairwise, lag 0
};

MomentSummary summarize(const CountSeries& series);

}  // namespace mivt
