#include "mivt/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mivt/errors.hpp"

namespace mivt {

namespace {

double mean_of(const std::vector<std::int64_t>& y) {
    double s = 0.0;
    for (std::int64_t v : y) s += static_cast<double>(v);
    return s / static_cast<double>(y.size());
}

// autocovariance with 1/K normalisation; lag >= 0
double autocov(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b,
               double ma, double mb, std::size_t lag) {
    const std::size_t k = a.size();
    double s = 0.0;
    for (std::size_t t = 0; t + lag < k; ++t)
        s += (static_cast<double>(a[t]) - ma) * (static_cast<double>(b[t + lag]) - mb);
    return s / static_cast<double>(k);
}

double quantile_type7(std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

}  // namespace

std::vector<double> sample_acf(const CountSeries& series, std::size_t component,
                               std::size_t max_lag) {
    series.validate();
    if (component >= series.dim()) throw std::out_of_range("sample_acf: bad component");
    const auto& y = series.counts[component];
    if (y.size() <= max_lag + 2)
        throw std::invalid_argument("sample_acf: series too short for requested lags");
    const double m = mean_of(y);
    const double c0 = autocov(y, y, m, m, 0);
    if (c0 <= 0.0) throw error("sample_acf: component variance is degenerate");
    std::vector<double> r(max_lag);
    for (std::size_t h = 1; h <= max_lag; ++h) r[h - 1] = autocov(y, y, m, m, h) / c0;
    return r;
}

double sample_ccov(const CountSeries& series, std::size_t i, std::size_t j, std::int64_t lag) {
    series.validate();
    if (i >= series.dim() || j >= series.dim())
        throw std::out_of_range("sample_ccov: bad component");
    if (lag < 0) return sample_ccov(series, j, i, -lag);
    const auto& a = series.counts[i];
    const auto& b = series.counts[j];
    if (static_cast<std::size_t>(lag) + 2 >= a.size())
        throw std::invalid_argument("sample_ccov: series too short for requested lag");
    return autocov(a, b, mean_of(a), mean_of(b), static_cast<std::size_t>(lag));
}

std::array<double, 4> sample_cumulants(const CountSeries& series, std::size_t component,
                                       int order) {
    series.validate();
    if (component >= series.dim()) throw std::out_of_range("sample_cumulants: bad component");
    if (order < 1 || order > 4)
        throw std::invalid_argument("sample_cumulants: order must be 1..4");
    const auto& y = series.counts[component];
    if (y.size() < 10) throw std::invalid_argument("sample_cumulants: need at least 10 points");
    const double m = mean_of(y);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (std::int64_t v : y) {
        const double d = static_cast<double>(v) - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double k = static_cast<double>(y.size());
    m2 /= k;
    m3 /= k;
    m4 /= k;
    std::array<double, 4> out{m, 0.0, 0.0, 0.0};
    if (order >= 2) out[1] = m2;
    if (order >= 3) out[2] = m3;
    if (order >= 4) out[3] = m4 - 3.0 * m2 * m2;
    return out;
}

MomentSummary summarize(const CountSeries& series) {
    series.validate();
    const std::size_t n = series.dim();
    MomentSummary out;
    out.labels = series.labels;
    std::vector<double> means(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> sorted(series.counts[i].begin(), series.counts[i].end());
        std::sort(sorted.begin(), sorted.end());
        const double m = mean_of(series.counts[i]);
        means[i] = m;
        const double var = autocov(series.counts[i], series.counts[i], m, m, 0);
        ComponentSummary c{};
        c.min = sorted.front();
        c.q1 = quantile_type7(sorted, 0.25);
        c.median = quantile_type7(sorted, 0.5);
        c.mean = m;
        c.q3 = quantile_type7(sorted, 0.75);
        c.max = sorted.back();
        c.variance = var;
        c.overdispersion = m > 0.0 ? var / m : 0.0;
        out.components.push_back(c);
    }
    out.correlation.assign(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double vi = out.components[i].variance;
            const double vj = out.components[j].variance;
            const double cij =
                autocov(series.counts[i], series.counts[j], means[i], means[j], 0);
            out.correlation[i][j] = (vi > 0.0 && vj > 0.0) ? cij / std::sqrt(vi * vj) : 0.0;
        }
    return out;
}

}  // namespace mivt
