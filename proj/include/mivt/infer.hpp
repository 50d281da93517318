#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mivt/model.hpp"
#include "mivt/moments.hpp"

namespace mivt {

enum class TrawlFamily { exponential, sup_ig, gamma_lm, gig, seasonal_exp };
enum class SeedFamily { poisson_factor, nb_independent, nb_common, nb_common_idio };

TrawlFamily trawl_family_from_name(const std::string& name);
SeedFamily seed_family_from_name(const std::string& name);
std::string to_string(TrawlFamily family);
std::string to_string(SeedFamily family);
TrawlFamily family_of(const TrawlSpec& spec);
SeedFamily family_of(const SeedSpec& spec);

struct TrawlFit {
    TrawlSpec spec;
    double residual;  // sum of squared ACF errors at the optimum
};

/// Step 1a: least-squares match of the empirical ACF (bin lag -> value) to the
/// family's theoretical r(h delta). Derivative-free simplex over log-scaled
/// parameters with five log-spaced starts; the exponential family seeds the
/// search with the closed-form log-regression slope.
TrawlFit fit_trawl(const std::map<int, double>& acf_emp, TrawlFamily family, double delta);

struct MarginalFit {
    std::vector<double> overdispersion;  // alpha_i (beta_i for nb-independent)
    std::vector<double> shape;           // implied mean_i / (leb_i * overdispersion_i)
};

/// Step 1b: de-scale empirical mean/variance by leb(A) to seed cumulants and
/// invert the NB family (alpha_i = variance/mean - 1). Throws
/// model_mismatch_error naming the first underdispersed component.
MarginalFit fit_marginal(const std::vector<double>& mean, const std::vector<double>& variance,
                         const std::vector<double>& leb_hat, SeedFamily family);

struct DependenceFit {
    double kappa = 0.0;
    std::vector<std::vector<double>> kappa_pairwise;  // ccov_ij(0) / R_ij(0)
    std::vector<std::vector<double>> r_hat0;          // fitted autocorrelators at lag 0
    bool floored = false;  // some pairwise estimate was negative and clamped
};

/// Step 2 from precomputed lag-0 cross-covariances.
DependenceFit fit_dependence_from_moments(const std::vector<std::vector<double>>& ccov0,
                                          const std::vector<TrawlSpec>& trawls,
                                          const MarginalFit& marginal, SeedFamily family);

/// Step 2: kappa_ij = ccov_ij(0) / R_ij(0); for the common-factor family the
/// single kappa is the average of kappa_ij / (alpha_i alpha_j) over pairs.
DependenceFit fit_dependence(const CountSeries& series, const std::vector<TrawlSpec>& trawls,
                             const MarginalFit& marginal, SeedFamily family);

struct ParamInterval {
    double lower = 0.0;
    double upper = 0.0;
};

struct ConfidenceIntervals {
    double level = 0.95;
    std::vector<std::vector<ParamInterval>> trawl;  // per component, per parameter
    std::vector<ParamInterval> alpha;               // per component
    std::optional<ParamInterval> kappa;
    std::size_t replicates = 0;
    std::size_t failures = 0;
};

struct FitOptions {
    std::size_t max_lag = 30;
};

struct FitReport {
    std::vector<TrawlFamily> trawl_families;
    SeedFamily seed_family = SeedFamily::nb_common;
    std::optional<MivtModel> model;  // absent only if dependence collapsed to zero
    std::vector<double> trawl_residuals;
    std::vector<double> leb;
    std::vector<std::vector<double>> r_hat0;
    std::vector<std::vector<double>> kappa_pairwise;
    std::vector<double> alpha;
    std::vector<double> shape;
    double kappa = 0.0;
    bool dependence_floored = false;
    std::optional<ConfidenceIntervals> ci;
    std::size_t lags_used = 0;
    std::size_t series_length = 0;
    double delta = 1.0;

    /// Flattened (name, value) view of the fitted parameters, in the order
    /// used for bootstrap and Monte Carlo summaries.
    [[nodiscard]] std::vector<std::pair<std::string, double>> parameters() const;
};

/// Two-stage equation-by-equation fit: trawl per component (1a), marginal per
/// component (1b), then dependence (2).
FitReport fit(const CountSeries& series, const std::vector<TrawlFamily>& trawl_families,
              SeedFamily seed_family, const FitOptions& options = {});

struct BootstrapOptions {
    std::size_t replicates = 500;
    double level = 0.95;
    std::uint64_t seed = 0;
    std::size_t threads = 0;  // 0 = hardware concurrency
    double max_failure_fraction = 0.10;
};

/// Parametric bootstrap: simulate the fitted model at the observed length,
/// refit every replicate (concurrently, deterministic by replicate index) and
/// attach percentile intervals.
FitReport bootstrap(const FitReport& fitted, const BootstrapOptions& options);

struct McStudyOptions {
    std::size_t replicates = 500;
    std::size_t n_obs = 3960;
    double delta = 1.0;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    FitOptions fit_options{};
    double max_failure_fraction = 0.10;
};

struct McStudyResult {
    std::vector<std::string> parameter_names;
    std::vector<double> truth;
    std::vector<std::vector<double>> estimates;  // successful replicates only
    std::size_t failures = 0;
    std::vector<double> median, mean, stddev, median_abs_error;
};

/// Simulate-then-fit study at a known model (families taken from the model).
McStudyResult mc_study(const MivtModel& truth, const McStudyOptions& options);

}  // namespace mivt
