#include "mivt/json_io.hpp"

#include <stdexcept>

namespace mivt {

using nlohmann::json;

json to_json(const TrawlSpec& spec) {
    json j;
    j["family"] = family_name(spec);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                j["lambda"] = s.lambda;
            } else if constexpr (std::is_same_v<T, SupIG>) {
                j["delta"] = s.delta;
                j["gamma"] = s.gamma;
            } else if constexpr (std::is_same_v<T, GammaLongMemory>) {
                j["alpha"] = s.alpha;
                j["H"] = s.hurst;
            } else if constexpr (std::is_same_v<T, GIG>) {
                j["nu"] = s.nu;
                j["delta"] = s.delta;
                j["gamma"] = s.gamma;
            } else {
                j["lambda"] = s.lambda;
                j["psi"] = s.psi;
            }
        },
        spec);
    return j;
}

TrawlSpec trawl_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "exponential") return Exponential(j.at("lambda").get<double>());
    if (family == "sup-ig") return SupIG(j.at("delta").get<double>(), j.at("gamma").get<double>());
    if (family == "gamma-lm")
        return GammaLongMemory(j.at("alpha").get<double>(), j.at("H").get<double>());
    if (family == "gig")
        return GIG(j.at("nu").get<double>(), j.at("delta").get<double>(),
                   j.at("gamma").get<double>());
    if (family == "seasonal-exp")
        return SeasonalExp(j.at("lambda").get<double>(), j.at("psi").get<double>());
    throw std::invalid_argument("unknown trawl family in JSON: " + family);
}

json to_json(const SeedSpec& spec) {
    json j;
    j["family"] = family_name(spec);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PoissonFactor>) {
                std::vector<int> flat;
                for (const auto& row : s.loadings)
                    flat.insert(flat.end(), row.begin(), row.end());
                j["A"] = flat;  // row-major
                j["theta"] = s.theta;
            } else if constexpr (std::is_same_v<T, NBIndependent>) {
                j["kappa"] = s.kappa;
                j["beta"] = s.beta;
            } else if constexpr (std::is_same_v<T, NBCommonFactor>) {
                j["kappa"] = s.kappa;
                j["alpha"] = s.alpha;
            } else {
                j["kappa"] = s.kappa;
                j["alpha"] = s.alpha;
                j["kappa_idio"] = s.kappa_idio;
            }
        },
        spec);
    return j;
}

SeedSpec seed_from_json(const json& j) {
    const std::string family = j.at("family").get<std::string>();
    if (family == "poisson-factor") {
        const std::vector<int> flat = j.at("A").get<std::vector<int>>();
        const std::vector<double> theta = j.at("theta").get<std::vector<double>>();
        if (theta.empty() || flat.size() % theta.size() != 0)
            throw std::invalid_argument("poisson-factor: A length must be a multiple of theta length");
        const std::size_t m = theta.size();
        const std::size_t n = flat.size() / m;
        std::vector<std::vector<int>> loadings(n, std::vector<int>(m));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < m; ++k) loadings[i][k] = flat[i * m + k];
        return PoissonFactor(std::move(loadings), theta);
    }
    if (family == "nb-independent")
        return NBIndependent(j.at("kappa").get<std::vector<double>>(),
                             j.at("beta").get<std::vector<double>>());
    if (family == "nb-common")
        return NBCommonFactor(j.at("kappa").get<double>(),
                              j.at("alpha").get<std::vector<double>>());
    if (family == "nb-common-idio")
        return NBCommonPlusIdio(j.at("kappa").get<double>(),
                                j.at("alpha").get<std::vector<double>>(),
                                j.at("kappa_idio").get<std::vector<double>>());
    throw std::invalid_argument("unknown seed family in JSON: " + family);
}

json to_json(const MivtModel& model) {
    json trawls = json::array();
    for (const TrawlSpec& t : model.trawls) trawls.push_back(to_json(t));
    return json{{"trawls", trawls}, {"seed", to_json(model.seed)}};
}

MivtModel model_from_json(const json& j) {
    std::vector<TrawlSpec> trawls;
    for (const json& t : j.at("trawls")) trawls.push_back(trawl_from_json(t));
    return MivtModel(std::move(trawls), seed_from_json(j.at("seed")));
}

namespace {

json interval_to_json(const ParamInterval& iv) { return json::array({iv.lower, iv.upper}); }

}  // namespace

json to_json(const FitReport& report) {
    json j;
    json trawl = json::array();
    for (std::size_t i = 0; i < report.trawl_families.size(); ++i) {
        json t = report.model ? to_json(report.model->trawls[i])
                              : json{{"family", to_string(report.trawl_families[i])}};
        t["residual"] = report.trawl_residuals[i];
        t["leb"] = report.leb[i];
        trawl.push_back(std::move(t));
    }
    j["trawl"] = trawl;
    j["marginal"] = json{{"alpha", report.alpha}, {"shape", report.shape}};
    j["dependence"] = json{{"kappa", report.kappa},
                           {"kappa_pairwise", report.kappa_pairwise},
                           {"floored", report.dependence_floored}};
    j["diagnostics"] = json{{"lags", report.lags_used},
                            {"n_obs", report.series_length},
                            {"delta", report.delta},
                            {"autocorrelator0", report.r_hat0},
                            {"seed_family", to_string(report.seed_family)}};
    if (report.ci) {
        json ci;
        ci["level"] = report.ci->level;
        ci["replicates"] = report.ci->replicates;
        ci["failures"] = report.ci->failures;
        json trawl_ci = json::array();
        for (const auto& comp : report.ci->trawl) {
            json c = json::array();
            for (const ParamInterval& iv : comp) c.push_back(interval_to_json(iv));
            trawl_ci.push_back(std::move(c));
        }
        ci["trawl"] = trawl_ci;
        json alpha_ci = json::array();
        for (const ParamInterval& iv : report.ci->alpha) alpha_ci.push_back(interval_to_json(iv));
        ci["alpha"] = alpha_ci;
        if (report.ci->kappa) ci["kappa"] = interval_to_json(*report.ci->kappa);
        j["ci"] = std::move(ci);
    }
    return j;
}

json to_json(const MomentSummary& summary) {
    json comps = json::array();
    for (std::size_t i = 0; i < summary.components.size(); ++i) {
        const ComponentSummary& c = summary.components[i];
        comps.push_back(json{{"label", summary.labels[i]},
                             {"min", c.min},
                             {"q1", c.q1},
                             {"median", c.median},
                             {"mean", c.mean},
                             {"q3", c.q3},
                             {"max", c.max},
                             {"variance", c.variance},
                             {"overdispersion", c.overdispersion}});
    }
    return json{{"components", comps}, {"correlation", summary.correlation}};
}

json to_json(const McStudyResult& result) {
    json params = json::array();
    for (std::size_t p = 0; p < result.parameter_names.size(); ++p) {
        params.push_back(json{{"name", result.parameter_names[p]},
                              {"truth", result.truth[p]},
                              {"median", result.median[p]},
                              {"mean", result.mean[p]},
                              {"stddev", result.stddev[p]},
                              {"median_abs_error", result.median_abs_error[p]}});
    }
    return json{{"parameters", params},
                {"replicates", result.estimates.size() + result.failures},
                {"failures", result.failures}};
}

}  // namespace mivt
