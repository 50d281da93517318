#include "mivt/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mivt {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> x0, const std::vector<double>& step,
                          const SimplexOptions& opts) {
    const std::size_t n = x0.size();
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> x(n + 1, x0);
    for (std::size_t i = 0; i < n; ++i) x[i + 1][i] += step[i];
    std::vector<double> fx(n + 1);
    for (std::size_t j = 0; j <= n; ++j) fx[j] = f(x[j]);

    std::vector<std::size_t> order(n + 1);
    SimplexResult res;
    for (res.iterations = 0; res.iterations < opts.max_iterations; ++res.iterations) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        const std::size_t best = order[0], worst = order[n], second_worst = order[n - 1];

        double diam = 0.0;
        for (std::size_t j = 1; j <= n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                diam = std::max(diam, std::abs(x[order[j]][i] - x[best][i]));
        if (std::abs(fx[worst] - fx[best]) <= opts.f_tol || diam <= opts.x_tol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t j = 0; j <= n; ++j) {
            if (j == worst) continue;
            for (std::size_t i = 0; i < n; ++i) centroid[i] += x[j][i];
        }
        for (double& c : centroid) c /= static_cast<double>(n);

        auto point = [&](double scale) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + scale * (centroid[i] - x[worst][i]);
            return p;
        };

        std::vector<double> xr = point(alpha);
        const double fr = f(xr);
        if (fr < fx[best]) {
            std::vector<double> xe = point(alpha * gamma);
            const double fe = f(xe);
            if (fe < fr) {
                x[worst] = std::move(xe);
                fx[worst] = fe;
            } else {
                x[worst] = std::move(xr);
                fx[worst] = fr;
            }
        } else if (fr < fx[second_worst]) {
            x[worst] = std::move(xr);
            fx[worst] = fr;
        } else {
            const bool outside = fr < fx[worst];
            std::vector<double> xc =
                outside ? point(alpha * rho)
                        : point(-rho);
            const double fc = f(xc);
            if (fc < (outside ? fr : fx[worst])) {
                x[worst] = std::move(xc);
                fx[worst] = fc;
            } else {
                for (std::size_t j = 0; j <= n; ++j) {
                    if (j == best) continue;
                    for (std::size_t i = 0; i < n; ++i)
                        x[j][i] = x[best][i] + sigma * (x[j][i] - x[best][i]);
                    fx[j] = f(x[j]);
                }
            }
        }
    }

    const std::size_t arg =
        static_cast<std::size_t>(std::min_element(fx.begin(), fx.end()) - fx.begin());
    res.x = x[arg];
    res.value = fx[arg];
    return res;
}

}  // namespace mivt
