#pragma once

#include <functional>
#include <vector>

namespace mivt {

struct SimplexOptions {
    std::size_t max_iterations = 2000;
    double f_tol = 1e-12;   // spread of function values over the simplex
    double x_tol = 1e-10;   // simplex diameter
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Derivative-free downhill simplex minimisation of f starting at x0 with
/// per-coordinate initial steps.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const std::vector<double>& step,
                          const SimplexOptions& opts = {});

}  // namespace mivt
