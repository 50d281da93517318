#include "mivt/bessel.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/bessel.hpp>

#include "mivt/errors.hpp"

namespace mivt {
namespace {

constexpr double kUnderflowX = 705.0;  // exp(-x) underflows past ~708; keep margin

double asymptotic_log_k(double nu, double x) {
    // Large-argument expansion K_nu(x) ~ sqrt(pi/2x) e^{-x} sum_k a_k(nu)/x^k.
    const double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (8.0 * x * k);
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return 0.5 * std::log(M_PI / (2.0 * x)) - x + std::log(sum);
}

}  // namespace

double bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_k: argument must be positive");
    nu = std::abs(nu);  // K_{-nu} = K_nu
    if (x > kUnderflowX) throw numeric_error("bessel_k: result underflows", x);
    try {
        return boost::math::cyl_bessel_k(nu, x);
    } catch (const std::overflow_error&) {
        throw numeric_error("bessel_k: result overflows", nu);
    } catch (const std::underflow_error&) {
        throw numeric_error("bessel_k: result underflows", x);
    }
}

double log_bessel_k(double nu, double x) {
    if (!(x > 0.0)) throw std::domain_error("log_bessel_k: argument must be positive");
    nu = std::abs(nu);
    if (x <= 650.0) return std::log(boost::math::cyl_bessel_k(nu, x));
    return asymptotic_log_k(nu, x);
}

}  // namespace mivt
