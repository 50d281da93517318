#include "mivt/infer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mivt/errors.hpp"
#include "mivt/optim.hpp"
#include "mivt/simulate.hpp"

namespace mivt {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// ---- family plumbing ----

struct FamilyCodec {
    std::size_t n_params;
    std::function<TrawlSpec(const std::vector<double>&)> decode;        // from optimiser scale
    std::function<std::vector<double>(const TrawlSpec&)> encode;
    std::vector<std::string> names;
};

FamilyCodec codec_for(TrawlFamily family) {
    switch (family) {
        case TrawlFamily::exponential:
            return {1,
                    [](const std::vector<double>& x) { return TrawlSpec(Exponential(std::exp(x[0]))); },
                    [](const TrawlSpec& s) {
                        return std::vector<double>{std::log(std::get<Exponential>(s).lambda)};
                    },
                    {"lambda"}};
        case TrawlFamily::sup_ig:
            return {2,
                    [](const std::vector<double>& x) {
                        return TrawlSpec(SupIG(std::exp(x[0]), std::exp(x[1])));
                    },
                    [](const TrawlSpec& s) {
                        const auto& v = std::get<SupIG>(s);
                        return std::vector<double>{std::log(v.delta), std::log(v.gamma)};
                    },
                    {"delta", "gamma"}};
        case TrawlFamily::gamma_lm:
            return {2,
                    [](const std::vector<double>& x) {
                        return TrawlSpec(GammaLongMemory(std::exp(x[0]), 1.0 + std::exp(x[1])));
                    },
                    [](const TrawlSpec& s) {
                        const auto& v = std::get<GammaLongMemory>(s);
                        return std::vector<double>{std::log(v.alpha), std::log(v.hurst - 1.0)};
                    },
                    {"alpha", "hurst"}};
        case TrawlFamily::gig:
            return {3,
                    [](const std::vector<double>& x) {
                        return TrawlSpec(GIG(x[0], std::exp(x[1]), std::exp(x[2])));
                    },
                    [](const TrawlSpec& s) {
                        const auto& v = std::get<GIG>(s);
                        return std::vector<double>{v.nu, std::log(v.delta), std::log(v.gamma)};
                    },
                    {"nu", "delta", "gamma"}};
        case TrawlFamily::seasonal_exp:
            return {2,
                    [](const std::vector<double>& x) {
                        return TrawlSpec(SeasonalExp(std::exp(x[0]), x[1]));
                    },
                    [](const TrawlSpec& s) {
                        const auto& v = std::get<SeasonalExp>(s);
                        return std::vector<double>{std::log(v.lambda), v.psi};
                    },
                    {"lambda", "psi"}};
    }
    throw std::logic_error("codec_for: unknown family");
}

// decay-rate scale of the empirical ACF; the lag (in time units) where it
// first drops below 1/e, inverted
double initial_rate(const std::map<int, double>& acf_emp, double delta) {
    for (const auto& [h, r] : acf_emp)
        if (r < std::exp(-1.0)) return 1.0 / (static_cast<double>(h) * delta);
    const double last = static_cast<double>(acf_emp.rbegin()->first) * delta;
    return 0.5 / last;
}

// closed-form initialiser for the exponential family: minus the slope of a
// no-intercept regression of log r on h delta, positive lags only
double exp_log_regression(const std::map<int, double>& acf_emp, double delta) {
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [h, r] : acf_emp) {
        if (r <= 0.0) continue;
        const double x = static_cast<double>(h) * delta;
        sxy += x * std::log(r);
        sxx += x * x;
    }
    if (sxx == 0.0) return kNan;
    const double lambda = -sxy / sxx;
    return lambda > 0.0 ? lambda : kNan;
}

std::vector<std::vector<double>> starts_for(TrawlFamily family,
                                            const std::map<int, double>& acf_emp, double delta) {
    const double rate = initial_rate(acf_emp, delta);
    const double scales[5] = {0.1, 0.316, 1.0, 3.16, 10.0};
    std::vector<std::vector<double>> starts;
    switch (family) {
        case TrawlFamily::exponential: {
            const double reg = exp_log_regression(acf_emp, delta);
            if (std::isfinite(reg)) starts.push_back({std::log(reg)});
            for (double s : scales) starts.push_back({std::log(rate * s)});
            break;
        }
        case TrawlFamily::sup_ig:
            // initial decay rate of the sup-IG ACF is delta/gamma
            for (double s : scales)
                starts.push_back({std::log(rate * s), std::log(s)});
            break;
        case TrawlFamily::gamma_lm: {
            const double hursts[5] = {1.2, 1.5, 2.0, 3.0, 5.0};
            for (double h0 : hursts)
                starts.push_back({std::log((h0 - 1.0) / rate), std::log(h0 - 1.0)});
            break;
        }
        case TrawlFamily::gig: {
            const double nus[5] = {-1.0, -0.5, 0.5, 1.0, 2.0};
            for (double nu0 : nus)
                starts.push_back({nu0, std::log(rate), std::log(1.0)});
            break;
        }
        case TrawlFamily::seasonal_exp: {
            const double periods[5] = {0.0, 0.25, 0.5, 1.0, 2.0};
            for (double f : periods)
                starts.push_back({std::log(rate), f * rate});
            break;
        }
    }
    return starts;
}

}  // namespace

// ---- name/tag helpers ----

TrawlFamily trawl_family_from_name(const std::string& name) {
    if (name == "exponential" || name == "exp") return TrawlFamily::exponential;
    if (name == "sup-ig" || name == "supig") return TrawlFamily::sup_ig;
    if (name == "gamma-lm" || name == "gammalm") return TrawlFamily::gamma_lm;
    if (name == "gig") return TrawlFamily::gig;
    if (name == "seasonal-exp" || name == "seasonal") return TrawlFamily::seasonal_exp;
    throw std::invalid_argument("unknown trawl family: " + name);
}

SeedFamily seed_family_from_name(const std::string& name) {
    if (name == "poisson-factor") return SeedFamily::poisson_factor;
    if (name == "nb-independent") return SeedFamily::nb_independent;
    if (name == "nb-common") return SeedFamily::nb_common;
    if (name == "nb-common-idio") return SeedFamily::nb_common_idio;
    throw std::invalid_argument("unknown seed family: " + name);
}

std::string to_string(TrawlFamily family) {
    switch (family) {
        case TrawlFamily::exponential: return "exponential";
        case TrawlFamily::sup_ig: return "sup-ig";
        case TrawlFamily::gamma_lm: return "gamma-lm";
        case TrawlFamily::gig: return "gig";
        case TrawlFamily::seasonal_exp: return "seasonal-exp";
    }
    return "?";
}

std::string to_string(SeedFamily family) {
    switch (family) {
        case SeedFamily::poisson_factor: return "poisson-factor";
        case SeedFamily::nb_independent: return "nb-independent";
        case SeedFamily::nb_common: return "nb-common";
        case SeedFamily::nb_common_idio: return "nb-common-idio";
    }
    return "?";
}

TrawlFamily family_of(const TrawlSpec& spec) {
    return trawl_family_from_name(family_name(spec));
}

SeedFamily family_of(const SeedSpec& spec) { return seed_family_from_name(family_name(spec)); }

// ---- Step 1a ----

TrawlFit fit_trawl(const std::map<int, double>& acf_emp, TrawlFamily family, double delta) {
    const FamilyCodec codec = codec_for(family);
    if (acf_emp.size() < codec.n_params + 1)
        throw fit_error("fit_trawl: need at least " + std::to_string(codec.n_params + 1) +
                        " lags");
    for (const auto& [h, r] : acf_emp) {
        if (h < 1) throw std::invalid_argument("fit_trawl: lags must be >= 1");
        if (!(r >= -1.0 && r <= 1.0))
            throw std::invalid_argument("fit_trawl: ACF values must lie in [-1, 1]");
    }

    auto objective = [&](const std::vector<double>& x) -> double {
        double sse = 0.0;
        try {
            const TrawlSpec spec = codec.decode(x);
            for (const auto& [h, r] : acf_emp) {
                const double diff = r - acf(spec, static_cast<double>(h) * delta);
                sse += diff * diff;
            }
        } catch (const std::exception&) {
            return std::numeric_limits<double>::infinity();
        }
        return std::isfinite(sse) ? sse : std::numeric_limits<double>::infinity();
    };

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    SimplexOptions sopts;
    sopts.max_iterations = 600;
    sopts.f_tol = 1e-16;
    for (const std::vector<double>& x0 : starts_for(family, acf_emp, delta)) {
        if (!std::isfinite(objective(x0))) continue;
        SimplexResult r = nelder_mead(objective, x0, std::vector<double>(codec.n_params, 0.5),
                                      sopts);
        // polish the winner with a tighter simplex
        r = nelder_mead(objective, r.x, std::vector<double>(codec.n_params, 0.05), sopts);
        if (r.value < best) {
            best = r.value;
            best_x = r.x;
        }
    }
    if (!std::isfinite(best))
        throw fit_error("fit_trawl: no start converged for family " + to_string(family), best);
    return TrawlFit{codec.decode(best_x), best};
}

// ---- Step 1b ----

MarginalFit fit_marginal(const std::vector<double>& mean, const std::vector<double>& variance,
                         const std::vector<double>& leb_hat, SeedFamily family) {
    if (family == SeedFamily::poisson_factor)
        throw fit_error("fit_marginal: poisson-factor seeds are not fittable");
    const std::size_t n = mean.size();
    if (variance.size() != n || leb_hat.size() != n)
        throw std::invalid_argument("fit_marginal: input length mismatch");
    MarginalFit out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(leb_hat[i] > 0.0)) throw std::invalid_argument("fit_marginal: leb_hat must be > 0");
        if (!(mean[i] > 0.0))
            throw model_mismatch_error(
                "fit_marginal: component " + std::to_string(i + 1) + " has zero mean", i);
        // variance/mean ratio is leb-free: 1 + alpha_i for every NB variant
        const double alpha = variance[i] / mean[i] - 1.0;
        if (!(alpha > 0.0))
            throw model_mismatch_error("fit_marginal: component " + std::to_string(i + 1) +
                                           " is not overdispersed; NB family does not apply",
                                       i);
        out.overdispersion.push_back(alpha);
        out.shape.push_back(mean[i] / (leb_hat[i] * alpha));
    }
    return out;
}

// ---- Step 2 ----

DependenceFit fit_dependence_from_moments(const std::vector<std::vector<double>>& ccov0,
                                          const std::vector<TrawlSpec>& trawls,
                                          const MarginalFit& marginal, SeedFamily family) {
    const std::size_t n = trawls.size();
    if (n < 2) throw std::invalid_argument("fit_dependence: needs at least two components");
    DependenceFit out;
    out.r_hat0.assign(n, std::vector<double>(n, 0.0));
    out.kappa_pairwise.assign(n, std::vector<double>(n, 0.0));
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double r0 = autocorrelator(trawls[i], trawls[j], 0.0);
            if (!(r0 > 0.0))
                throw numeric_error("fit_dependence: non-positive autocorrelator", r0);
            out.r_hat0[i][j] = r0;
            out.kappa_pairwise[i][j] = ccov0[i][j] / r0;
            if (i < j) {
                double k = out.kappa_pairwise[i][j] /
                           (marginal.overdispersion[i] * marginal.overdispersion[j]);
                if (k < 0.0) {
                    k = 0.0;
                    out.floored = true;  // the model cannot represent negative dependence
                }
                total += k;
                ++pairs;
            }
        }
    }
    out.kappa = family == SeedFamily::nb_independent ? 0.0 : total / static_cast<double>(pairs);
    return out;
}

DependenceFit fit_dependence(const CountSeries& series, const std::vector<TrawlSpec>& trawls,
                             const MarginalFit& marginal, SeedFamily family) {
    const std::size_t n = series.dim();
    std::vector<std::vector<double>> ccov0(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) ccov0[i][j] = sample_ccov(series, i, j, 0);
    return fit_dependence_from_moments(ccov0, trawls, marginal, family);
}

// ---- full two-stage fit ----

namespace {

SeedSpec build_seed(SeedFamily family, const MarginalFit& marginal, double kappa,
                    bool* clamped) {
    const std::size_t n = marginal.overdispersion.size();
    switch (family) {
        case SeedFamily::nb_independent:
            return NBIndependent(marginal.shape, marginal.overdispersion);
        case SeedFamily::nb_common: {
            double k = kappa;
            if (!(k > 0.0)) {
                k = 1e-10;  // dependence collapsed; keep the family representable
                if (clamped) *clamped = true;
            }
            return NBCommonFactor(k, marginal.overdispersion);
        }
        case SeedFamily::nb_common_idio: {
            double k = kappa;
            const double max_k = *std::min_element(marginal.shape.begin(), marginal.shape.end());
            if (k > max_k) {
                k = max_k;  // keep every idiosyncratic shape non-negative
                if (clamped) *clamped = true;
            }
            if (!(k > 0.0)) {
                k = 1e-10;
                if (clamped) *clamped = true;
            }
            std::vector<double> idio(n);
            for (std::size_t i = 0; i < n; ++i) idio[i] = std::max(0.0, marginal.shape[i] - k);
            return NBCommonPlusIdio(k, marginal.overdispersion, idio);
        }
        case SeedFamily::poisson_factor: break;
    }
    throw fit_error("fit: poisson-factor seeds are not fittable");
}

}  // namespace

FitReport fit(const CountSeries& series, const std::vector<TrawlFamily>& trawl_families,
              SeedFamily seed_family, const FitOptions& options) {
    series.validate();
    const std::size_t n = series.dim();
    if (trawl_families.size() != n)
        throw std::invalid_argument("fit: one trawl family per component required");

    FitReport report;
    report.trawl_families = trawl_families;
    report.seed_family = seed_family;
    report.lags_used = options.max_lag;
    report.series_length = series.length();
    report.delta = series.delta;

    // Step 1a
    std::vector<TrawlSpec> trawls;
    std::vector<double> mean(n), variance(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::map<int, double> acf_map;
        std::vector<double> acf_emp;
        try {
            acf_emp = sample_acf(series, i, options.max_lag);
        } catch (const std::exception& e) {
            throw fit_error("fit stage 1a, component " + std::to_string(i + 1) + ": " +
                            e.what());
        }
        for (std::size_t h = 1; h <= options.max_lag; ++h)
            acf_map[static_cast<int>(h)] = acf_emp[h - 1];
        TrawlFit tf = fit_trawl(acf_map, trawl_families[i], series.delta);
        report.trawl_residuals.push_back(tf.residual);
        report.leb.push_back(lebesgue(tf.spec));
        trawls.push_back(std::move(tf.spec));

        const std::array<double, 4> cum = sample_cumulants(series, i, 2);
        mean[i] = cum[0];
        variance[i] = cum[1];
    }

    // Step 1b
    MarginalFit marginal;
    try {
        marginal = fit_marginal(mean, variance, report.leb, seed_family);
    } catch (const model_mismatch_error&) {
        throw;
    } catch (const std::exception& e) {
        throw fit_error(std::string("fit stage 1b: ") + e.what());
    }
    report.alpha = marginal.overdispersion;
    report.shape = marginal.shape;

    // Step 2
    if (n >= 2) {
        DependenceFit dep;
        try {
            dep = fit_dependence(series, trawls, marginal, seed_family);
        } catch (const numeric_error&) {
            throw;
        } catch (const std::exception& e) {
            throw fit_error(std::string("fit stage 2: ") + e.what());
        }
        report.kappa = dep.kappa;
        report.kappa_pairwise = dep.kappa_pairwise;
        report.r_hat0 = dep.r_hat0;
        report.dependence_floored = dep.floored;
    } else {
        report.kappa = seed_family == SeedFamily::nb_independent ? 0.0 : marginal.shape[0];
    }

    bool clamped = false;
    report.model = MivtModel(trawls, build_seed(seed_family, marginal, report.kappa, &clamped));
    report.dependence_floored = report.dependence_floored || clamped;
    return report;
}

std::vector<std::pair<std::string, double>> FitReport::parameters() const {
    std::vector<std::pair<std::string, double>> out;
    if (!model) return out;
    for (std::size_t i = 0; i < model->trawls.size(); ++i) {
        const FamilyCodec codec = codec_for(trawl_families[i]);
        const TrawlSpec& spec = model->trawls[i];
        // report natural-scale values, not optimiser-scale
        std::vector<double> natural;
        switch (trawl_families[i]) {
            case TrawlFamily::exponential:
                natural = {std::get<Exponential>(spec).lambda};
                break;
            case TrawlFamily::sup_ig: {
                const auto& v = std::get<SupIG>(spec);
                natural = {v.delta, v.gamma};
                break;
            }
            case TrawlFamily::gamma_lm: {
                const auto& v = std::get<GammaLongMemory>(spec);
                natural = {v.alpha, v.hurst};
                break;
            }
            case TrawlFamily::gig: {
                const auto& v = std::get<GIG>(spec);
                natural = {v.nu, v.delta, v.gamma};
                break;
            }
            case TrawlFamily::seasonal_exp: {
                const auto& v = std::get<SeasonalExp>(spec);
                natural = {v.lambda, v.psi};
                break;
            }
        }
        for (std::size_t p = 0; p < natural.size(); ++p)
            out.emplace_back(codec.names[p] + std::to_string(i + 1), natural[p]);
    }
    for (std::size_t i = 0; i < alpha.size(); ++i)
        out.emplace_back((seed_family == SeedFamily::nb_independent ? "beta" : "alpha") +
                             std::to_string(i + 1),
                         alpha[i]);
    if (seed_family != SeedFamily::nb_independent) out.emplace_back("kappa", kappa);
    return out;
}

// ---- bootstrap and Monte Carlo study ----

namespace {

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (std::thread& th : pool) th.join();
}

ParamInterval percentile_interval(std::vector<double> values, double level, double point) {
    std::sort(values.begin(), values.end());
    auto quantile = [&](double p) {
        const double pos = p * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double w = pos - static_cast<double>(lo);
        return (1.0 - w) * values[lo] + w * values[hi];
    };
    ParamInterval iv;
    iv.lower = std::min(quantile(0.5 * (1.0 - level)), point);
    iv.upper = std::max(quantile(0.5 * (1.0 + level)), point);
    return iv;
}

}  // namespace

FitReport bootstrap(const FitReport& fitted, const BootstrapOptions& options) {
    if (options.replicates < 50)
        throw std::invalid_argument("bootstrap: at least 50 replicates required");
    if (!fitted.model) throw fit_error("bootstrap: fit carries no simulatable model");

    const MivtModel& model = *fitted.model;
    const Burnin burnin = default_burnin(model, 1e-6);
    const std::size_t n_params = fitted.parameters().size();

    std::vector<std::vector<double>> estimates(options.replicates);
    std::vector<char> ok(options.replicates, 0);
    FitOptions fopts;
    fopts.max_lag = fitted.lags_used;

    parallel_for(options.replicates, options.threads, [&](std::size_t rep) {
        SimConfig cfg;
        cfg.delta = fitted.delta;
        cfg.horizon = static_cast<double>(fitted.series_length) * fitted.delta;
        cfg.burnin = burnin.duration;
        cfg.seed = derive_stream(options.seed, rep);
        try {
            const CountSeries path = simulate_mivt(model, cfg);
            const FitReport refit = fit(path, fitted.trawl_families, fitted.seed_family, fopts);
            std::vector<double> row;
            for (const auto& [name, value] : refit.parameters()) row.push_back(value);
            if (row.size() == n_params) {
                estimates[rep] = std::move(row);
                ok[rep] = 1;
            }
        } catch (const std::exception&) {
            // counted below
        }
    });

    std::vector<std::vector<double>> by_param(n_params);
    std::size_t failures = 0;
    for (std::size_t rep = 0; rep < options.replicates; ++rep) {
        if (!ok[rep]) {
            ++failures;
            continue;
        }
        for (std::size_t p = 0; p < n_params; ++p) by_param[p].push_back(estimates[rep][p]);
    }
    if (static_cast<double>(failures) >
        options.max_failure_fraction * static_cast<double>(options.replicates))
        throw bootstrap_error("bootstrap: too many replicate fits failed (" +
                                  std::to_string(failures) + "/" +
                                  std::to_string(options.replicates) + ")",
                              failures, options.replicates);

    const std::vector<std::pair<std::string, double>> points = fitted.parameters();
    ConfidenceIntervals ci;
    ci.level = options.level;
    ci.replicates = options.replicates;
    ci.failures = failures;
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < fitted.trawl_families.size(); ++i) {
        const std::size_t np = codec_for(fitted.trawl_families[i]).n_params;
        std::vector<ParamInterval> comp;
        for (std::size_t p = 0; p < np; ++p, ++cursor)
            comp.push_back(
                percentile_interval(by_param[cursor], options.level, points[cursor].second));
        ci.trawl.push_back(std::move(comp));
    }
    for (std::size_t i = 0; i < fitted.alpha.size(); ++i, ++cursor)
        ci.alpha.push_back(
            percentile_interval(by_param[cursor], options.level, points[cursor].second));
    if (fitted.seed_family != SeedFamily::nb_independent) {
        ci.kappa = percentile_interval(by_param[cursor], options.level, points[cursor].second);
        ++cursor;
    }

    FitReport out = fitted;
    out.ci = std::move(ci);
    return out;
}

McStudyResult mc_study(const MivtModel& truth, const McStudyOptions& options) {
    if (options.replicates < 1) throw std::invalid_argument("mc_study: replicates must be >= 1");

    std::vector<TrawlFamily> families;
    for (const TrawlSpec& t : truth.trawls) families.push_back(family_of(t));
    const SeedFamily seed_family = family_of(truth.seed);
    const Burnin burnin = default_burnin(truth, 1e-6);

    // the truth vector in the same order fit reports use
    FitReport truth_report;
    truth_report.trawl_families = families;
    truth_report.seed_family = seed_family;
    truth_report.model = truth;
    truth_report.alpha = std::visit(
        [](const auto& s) -> std::vector<double> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, NBIndependent>) return s.beta;
            else if constexpr (std::is_same_v<T, NBCommonFactor>) return s.alpha;
            else if constexpr (std::is_same_v<T, NBCommonPlusIdio>) return s.alpha;
            else throw fit_error("mc_study: poisson-factor seeds are not fittable");
        },
        truth.seed);
    truth_report.kappa = std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, NBCommonFactor>) return s.kappa;
            else if constexpr (std::is_same_v<T, NBCommonPlusIdio>) return s.kappa;
            else return 0.0;
        },
        truth.seed);

    McStudyResult result;
    for (const auto& [name, value] : truth_report.parameters()) {
        result.parameter_names.push_back(name);
        result.truth.push_back(value);
    }
    const std::size_t n_params = result.parameter_names.size();

    std::vector<std::vector<double>> rows(options.replicates);
    std::vector<char> ok(options.replicates, 0);
    parallel_for(options.replicates, options.threads, [&](std::size_t rep) {
        SimConfig cfg;
        cfg.delta = options.delta;
        cfg.horizon = static_cast<double>(options.n_obs) * options.delta;
        cfg.burnin = burnin.duration;
        cfg.seed = derive_stream(options.seed, rep);
        try {
            const CountSeries path = simulate_mivt(truth, cfg);
            const FitReport refit = fit(path, families, seed_family, options.fit_options);
            std::vector<double> row;
            for (const auto& [name, value] : refit.parameters()) row.push_back(value);
            if (row.size() == n_params) {
                rows[rep] = std::move(row);
                ok[rep] = 1;
            }
        } catch (const std::exception&) {
        }
    });

    for (std::size_t rep = 0; rep < options.replicates; ++rep) {
        if (ok[rep])
            result.estimates.push_back(std::move(rows[rep]));
        else
            ++result.failures;
    }
    if (static_cast<double>(result.failures) >
        options.max_failure_fraction * static_cast<double>(options.replicates))
        throw bootstrap_error("mc_study: too many replicate fits failed (" +
                                  std::to_string(result.failures) + "/" +
                                  std::to_string(options.replicates) + ")",
                              result.failures, options.replicates);

    result.median.assign(n_params, kNan);
    result.mean.assign(n_params, kNan);
    result.stddev.assign(n_params, kNan);
    result.median_abs_error.assign(n_params, kNan);
    if (!result.estimates.empty()) {
        const double m = static_cast<double>(result.estimates.size());
        for (std::size_t p = 0; p < n_params; ++p) {
            std::vector<double> column;
            column.reserve(result.estimates.size());
            for (const auto& row : result.estimates) column.push_back(row[p]);
            std::vector<double> abs_err;
            double mean_p = 0.0;
            for (double v : column) {
                mean_p += v;
                abs_err.push_back(std::abs(v - result.truth[p]));
            }
            mean_p /= m;
            double sd = 0.0;
            for (double v : column) sd += (v - mean_p) * (v - mean_p);
            sd = m > 1 ? std::sqrt(sd / (m - 1.0)) : 0.0;
            std::sort(column.begin(), column.end());
            std::sort(abs_err.begin(), abs_err.end());
            auto med = [](const std::vector<double>& v) {
                const std::size_t k = v.size();
                return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
            };
            result.median[p] = med(column);
            result.mean[p] = mean_p;
            result.stddev[p] = sd;
            result.median_abs_error[p] = med(abs_err);
        }
    }
    return result;
}

}  // namespace mivt
