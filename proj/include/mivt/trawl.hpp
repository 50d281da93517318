#pragma once

#include <string>
#include <variant>

namespace mivt {

/// d(z) = exp(lambda z), leb(A) = 1/lambda, r(h) = exp(-lambda h).
struct Exponential {
    explicit Exponential(double lambda);
    double lambda;
};

/// Inverse-Gaussian superposition of exponentials:
/// d(z) = (1 - 2z/gamma^2)^{-1/2} exp(delta gamma (1 - sqrt(1 - 2z/gamma^2))).
/// leb(A) = gamma/delta (infinite when delta = 0).
struct SupIG {
    SupIG(double delta, double gamma);
    double delta, gamma;
};

/// Gamma superposition, power-law memory: d(z) = (1 - z/alpha)^{-hurst} with
/// hurst > 1. Long memory for hurst in (1, 2], short memory beyond.
struct GammaLongMemory {
    GammaLongMemory(double alpha, double hurst);
    double alpha, hurst;
};

/// Generalised-inverse-Gaussian superposition; needs K_nu (see bessel_k).
/// delta * gamma is capped at 700 to keep the Bessel evaluations in range.
struct GIG {
    GIG(double nu, double delta, double gamma);
    double nu, delta, gamma;
};

/// Exponentially damped seasonal profile d(z) = exp(lambda z)(cos(a z) + 1)/2
/// with a = 2 pi psi. Not monotone; psi = 0 collapses to Exponential.
struct SeasonalExp {
    SeasonalExp(double lambda, double psi);
    double lambda, psi;
    [[nodiscard]] double angular() const noexcept;
};

using TrawlSpec = std::variant<Exponential, SupIG, GammaLongMemory, GIG, SeasonalExp>;

/// Trawl function d(z) for z <= 0; throws std::domain_error for z > 0.
double evaluate(const TrawlSpec& spec, double z);

/// leb(A) = integral of d over (-inf, 0]. Throws mivt::error when infinite
/// (SupIG with delta = 0).
double lebesgue(const TrawlSpec& spec);

/// Theoretical autocorrelation r(h) = leb(A ∩ A_h)/leb(A) for h >= 0; r(0)=1.
double acf(const TrawlSpec& spec, double h);

/// Exact integral of d over (-inf, z] (closed form per family).
double tail_mass(const TrawlSpec& spec, double z);

/// The z <= 0 at which the monotone envelope of d reaches eps in (0, 1):
/// d(z) = eps for monotone families, exp(lambda z) = eps for SeasonalExp.
double envelope_inverse(const TrawlSpec& spec, double eps);

[[nodiscard]] bool is_monotone(const TrawlSpec& spec);
[[nodiscard]] std::string family_name(const TrawlSpec& spec);

struct AutocorrelatorOptions {
    double eps_quad = 1e-12;  // both integrand branches below this at the cut
    double rel_tol = 1e-10;
    bool force_quadrature = false;  // skip the exponential-pair closed form
};

/// Autocorrelator R_ij(h) = leb(A^(i) ∩ A^(j)_h) for h >= 0. Closed form for
/// a pair of exponentials (either ordering of the rates); adaptive quadrature
/// of min{d_i(s), d_j(s-h)} with exact tail corrections otherwise.
double autocorrelator(const TrawlSpec& spec_i, const TrawlSpec& spec_j, double h,
                      const AutocorrelatorOptions& opts = {});

}  // namespace mivt
