#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace mivt {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    std::size_t intervals = 0;
};

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_intervals = 20000;
};

/// Adaptive Gauss-Kronrod (G7,K15) on [a, b]. Throws numeric_error with the
/// achieved tolerance if the interval budget runs out before convergence.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

/// Adaptive integration over [points.front(), points.back()] seeded with the
/// given initial subdivision. Use when the integrand mass is localised in a
/// small part of a very wide interval.
QuadResult integrate(const std::function<double(double)>& f,
                     const std::vector<double>& points, const QuadOptions& opts = {});

}  // namespace mivt
