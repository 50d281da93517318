#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mivt/rng.hpp"

namespace mivt {

/// L' = A X for independent Poisson factors X_k ~ Poi(theta_k); A is an
/// n x m 0/1 loading matrix with distinct, non-zero columns.
struct PoissonFactor {
    PoissonFactor(std::vector<std::vector<int>> loadings, std::vector<double> theta);
    std::vector<std::vector<int>> loadings;  // row-major, loadings[i][k]
    std::vector<double> theta;
    [[nodiscard]] std::size_t rows() const noexcept { return loadings.size(); }
    [[nodiscard]] std::size_t factors() const noexcept { return theta.size(); }
};

/// Independent components, X_i ~ NB(kappa_i, beta_i/(1+beta_i)).
struct NBIndependent {
    NBIndependent(std::vector<double> kappa, std::vector<double> beta);
    std::vector<double> kappa, beta;
};

/// One gamma common factor U ~ Gamma(kappa, 1) mixed into every component:
/// X_i ~ NB(kappa, alpha_i/(1+alpha_i)), Cov(X_i, X_j) = kappa alpha_i alpha_j.
struct NBCommonFactor {
    NBCommonFactor(double kappa, std::vector<double> alpha);
    double kappa;
    std::vector<double> alpha;
};

/// Common factor plus per-component idiosyncratic gamma factors on the same
/// scale: X_i ~ NB(kappa + kappa_idio_i, alpha_i/(1+alpha_i)).
struct NBCommonPlusIdio {
    NBCommonPlusIdio(double kappa, std::vector<double> alpha, std::vector<double> kappa_idio);
    double kappa;
    std::vector<double> alpha;
    std::vector<double> kappa_idio;
};

using SeedSpec = std::variant<PoissonFactor, NBIndependent, NBCommonFactor, NBCommonPlusIdio>;

[[nodiscard]] std::size_t dimension(const SeedSpec& spec);
[[nodiscard]] std::string family_name(const SeedSpec& spec);

struct SeedCumulants {
    std::vector<double> mean;
    std::vector<double> variance;
    std::vector<std::vector<double>> covariance;  // n x n, diagonal equals variance
};
SeedCumulants seed_cumulants(const SeedSpec& spec);

// ---- compound-Poisson representation ----

/// Dependent block: multivariate logarithmic-series jumps.
struct MlsdBlock {
    double rate;
    std::vector<double> p;
};

/// Univariate logarithmic jumps in a single coordinate.
struct LogBlock {
    double rate;
    std::size_t component;
    double p;
};

/// Categorical jumps over a fixed set of integer mark vectors.
struct CategoricalBlock {
    double rate;
    std::vector<double> probability;
    std::vector<std::vector<std::int64_t>> marks;
};

using CpBlock = std::variant<MlsdBlock, LogBlock, CategoricalBlock>;

struct CpRepresentation {
    std::size_t dim = 0;
    std::vector<CpBlock> blocks;
    [[nodiscard]] double total_rate() const;
};

CpRepresentation cp_representation(const SeedSpec& spec);

// ---- exact pmfs (log-space internally) ----

/// Multivariate logarithmic-series pmf at c in N_0^n \ {0}; requires
/// 0 < p_i < 1 and sum p_i < 1.
double pmf_mlsd(std::span<const double> p, std::span<const std::int64_t> c);
double log_pmf_mlsd(std::span<const double> p, std::span<const std::int64_t> c);

/// Negative binomial pmf P(X = x) = C(kappa+x-1, x) p^x (1-p)^kappa.
double pmf_nb(double kappa, double p, std::int64_t x);
double log_pmf_nb(double kappa, double p, std::int64_t x);

/// Joint pmf of the common-factor NB law (negative multinomial).
double joint_pmf_nb_common(const NBCommonFactor& spec, std::span<const std::int64_t> x);
double log_joint_pmf_nb_common(const NBCommonFactor& spec, std::span<const std::int64_t> x);

// ---- samplers ----

/// Logarithmic-series variates on {1, 2, ...} by sequential-search inversion
/// over a cached cumulative table (to quantile 1 - 1e-12), extended by direct
/// summation past the table end.
class LogarithmicSampler {
  public:
    explicit LogarithmicSampler(double p);
    std::int64_t operator()(Engine& rng) const;
    [[nodiscard]] double p() const noexcept { return p_; }

  private:
    double p_;
    std::vector<double> cdf_;  // cdf_[k-1] = P(X <= k)
};

/// NB(kappa, p) variate via the gamma-Poisson mixture.
std::int64_t sample_nb(double kappa, double p, Engine& rng);

/// One draw from the multivariate logarithmic-series law by sequential
/// conditioning: the leading coordinate from its modified-logarithmic
/// marginal, later coordinates from logarithmic or negative binomial
/// conditionals depending on the running total.
class MlsdSampler {
  public:
    explicit MlsdSampler(std::vector<double> p);
    std::vector<std::int64_t> operator()(Engine& rng) const;

  private:
    std::vector<double> p_;
    std::vector<double> zero_weight_;   // delta_k per stage
    std::vector<double> nb_p_;          // conditional NB probability per stage
    std::vector<LogarithmicSampler> log_;  // stage samplers at ptilde_k
};

std::vector<std::int64_t> sample_mlsd(std::span<const double> p, Engine& rng);

/// Draws jump vectors for one compound-Poisson block.
class BlockSampler {
  public:
    BlockSampler(const CpBlock& block, std::size_t dim);
    std::vector<std::int64_t> operator()(Engine& rng) const;
    [[nodiscard]] double rate() const noexcept { return rate_; }

  private:
    struct Mlsd {
        MlsdSampler sampler;
    };
    struct Log {
        std::size_t component;
        LogarithmicSampler sampler;
    };
    struct Categorical {
        std::vector<double> cumulative;
        std::vector<std::vector<std::int64_t>> marks;
    };
    double rate_;
    std::size_t dim_;
    std::variant<Mlsd, Log, Categorical> impl_;
};

/// One unit-time draw of the seed law, composed from its compound-Poisson
/// blocks. Prefer SeedSampler when drawing many times.
class SeedSampler {
  public:
    explicit SeedSampler(const SeedSpec& spec);
    std::vector<std::int64_t> operator()(Engine& rng) const;
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

  private:
    std::size_t dim_;
    std::vector<BlockSampler> blocks_;
};

std::vector<std::int64_t> sample_seed(const SeedSpec& spec, Engine& rng);

}  // namespace mivt
