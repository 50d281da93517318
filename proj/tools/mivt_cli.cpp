#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mivt/csv.hpp"
#include "mivt/errors.hpp"
#include "mivt/infer.hpp"
#include "mivt/json_io.hpp"
#include "mivt/moments.hpp"
#include "mivt/simulate.hpp"

namespace {

using nlohmann::json;

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(csv);
    while (std::getline(is, item, ',')) out.push_back(item);
    return out;
}

mivt::MivtModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open model file: " + path);
    json j;
    in >> j;
    return mivt::model_from_json(j);
}

void write_json(const json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

std::vector<mivt::TrawlFamily> parse_trawl_families(const std::string& arg, std::size_t dim) {
    std::vector<mivt::TrawlFamily> families;
    for (const std::string& name : split_list(arg))
        families.push_back(mivt::trawl_family_from_name(name));
    if (families.size() == 1 && dim > 1) families.assign(dim, families.front());
    if (families.size() != dim)
        throw std::invalid_argument("--trawl must list one family, or one per component");
    return families;
}

mivt::FitReport load_fit_report_model(const std::string& path, mivt::FitOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open fit file: " + path);
    json j;
    in >> j;
    mivt::FitReport report;
    std::vector<mivt::TrawlSpec> trawls;
    for (const json& t : j.at("trawl")) {
        trawls.push_back(mivt::trawl_from_json(t));
        report.trawl_families.push_back(mivt::family_of(trawls.back()));
        report.trawl_residuals.push_back(t.value("residual", 0.0));
        report.leb.push_back(t.value("leb", mivt::lebesgue(trawls.back())));
    }
    report.seed_family =
        mivt::seed_family_from_name(j.at("diagnostics").at("seed_family").get<std::string>());
    report.alpha = j.at("marginal").at("alpha").get<std::vector<double>>();
    report.shape = j.at("marginal").at("shape").get<std::vector<double>>();
    report.kappa = j.at("dependence").at("kappa").get<double>();
    report.dependence_floored = j.at("dependence").value("floored", false);
    report.lags_used = j.at("diagnostics").at("lags").get<std::size_t>();
    report.series_length = j.at("diagnostics").at("n_obs").get<std::size_t>();
    report.delta = j.at("diagnostics").at("delta").get<double>();
    opts.max_lag = report.lags_used;

    mivt::SeedSpec seed = [&]() -> mivt::SeedSpec {
        switch (report.seed_family) {
            case mivt::SeedFamily::nb_independent:
                return mivt::NBIndependent(report.shape, report.alpha);
            case mivt::SeedFamily::nb_common:
                return mivt::NBCommonFactor(std::max(report.kappa, 1e-10), report.alpha);
            case mivt::SeedFamily::nb_common_idio: {
                std::vector<double> idio;
                for (double s : report.shape)
                    idio.push_back(std::max(0.0, s - report.kappa));
                return mivt::NBCommonPlusIdio(std::max(report.kappa, 1e-10), report.alpha, idio);
            }
            default:
                throw std::invalid_argument("fit file holds an unfittable seed family");
        }
    }();
    report.model = mivt::MivtModel(std::move(trawls), std::move(seed));
    return report;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and moment-based inference for multivariate integer-valued "
                 "trawl processes"};
    app.require_subcommand(1);

    // ---- bin ----
    auto* bin = app.add_subcommand("bin", "Bin event timestamps into a counts CSV");
    std::string bin_events_arg, bin_out, bin_labels;
    double bin_delta = 5.0, bin_start = 0.0, bin_end = 0.0;
    bin->add_option("--events", bin_events_arg, "Comma-separated event CSV paths, one per component")
        ->required();
    bin->add_option("--delta", bin_delta, "Bin width in seconds")->required();
    bin->add_option("--start", bin_start, "Window start (seconds)")->required();
    bin->add_option("--end", bin_end, "Window end (seconds)")->required();
    bin->add_option("--labels", bin_labels, "Comma-separated component labels");
    bin->add_option("--out", bin_out, "Output counts CSV")->required();

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Simulate a model to a counts CSV");
    std::string sim_model, sim_out, sim_burnin = "auto";
    double sim_delta = 1.0, sim_horizon = 0.0, sim_eps_cut = 1e-12;
    std::uint64_t sim_seed = 0;
    sim->add_option("--model", sim_model, "Model JSON path")->required();
    sim->add_option("--delta", sim_delta, "Grid step")->required();
    sim->add_option("--horizon", sim_horizon, "Post-burn-in span T")->required();
    sim->add_option("--burnin", sim_burnin, "Burn-in duration, or `auto`");
    sim->add_option("--eps-cut", sim_eps_cut, "Trawl height cutoff for jump pruning");
    sim->add_option("--seed", sim_seed, "Master RNG seed")->required();
    sim->add_option("--out", sim_out, "Output counts CSV")->required();

    // ---- fit ----
    auto* fitc = app.add_subcommand("fit", "Two-stage moment fit of a counts CSV");
    std::string fit_counts, fit_trawl_arg, fit_seed_model = "nb-common", fit_out;
    std::size_t fit_lags = 30;
    fitc->add_option("--counts", fit_counts, "Counts CSV path")->required();
    fitc->add_option("--trawl", fit_trawl_arg, "Trawl family, or comma list per component")
        ->required();
    fitc->add_option("--seed-model", fit_seed_model, "Seed family tag");
    fitc->add_option("--lags", fit_lags, "ACF lags for stage 1a");
    fitc->add_option("--out", fit_out, "Output fit JSON")->required();

    // ---- acf ----
    auto* acfc = app.add_subcommand("acf", "Empirical ACF of one component");
    std::string acf_counts, acf_out, acf_summary;
    std::size_t acf_component = 1, acf_max_lag = 30;
    acfc->add_option("--counts", acf_counts, "Counts CSV path")->required();
    acfc->add_option("--component", acf_component, "1-based component index");
    acfc->add_option("--max-lag", acf_max_lag, "Largest lag in bins");
    acfc->add_option("--out", acf_out, "Output CSV (lag,r)")->required();
    acfc->add_option("--summary", acf_summary, "Also write a moment-summary JSON here");

    // ---- bootstrap ----
    auto* boot = app.add_subcommand("bootstrap", "Parametric bootstrap confidence bounds");
    std::string boot_fit, boot_out;
    std::size_t boot_reps = 500, boot_threads = 0;
    double boot_level = 0.95;
    std::uint64_t boot_seed = 0;
    boot->add_option("--fit", boot_fit, "Fit JSON from `fit`")->required();
    boot->add_option("--reps", boot_reps, "Bootstrap replicates");
    boot->add_option("--level", boot_level, "Interval level");
    boot->add_option("--seed", boot_seed, "Master RNG seed")->required();
    boot->add_option("--threads", boot_threads, "Worker threads (0 = hardware)");
    boot->add_option("--out", boot_out, "Output fit JSON with `ci`")->required();

    // ---- mc-study ----
    auto* mc = app.add_subcommand("mc-study", "Simulate-then-fit Monte Carlo study");
    std::string mc_model, mc_out, mc_summary_path;
    std::size_t mc_reps = 500, mc_nobs = 3960, mc_threads = 0, mc_lags = 30;
    double mc_delta = 1.0;
    std::uint64_t mc_seed = 0;
    mc->add_option("--model", mc_model, "True model JSON")->required();
    mc->add_option("--reps", mc_reps, "Replicates");
    mc->add_option("--n-obs", mc_nobs, "Observations per replicate");
    mc->add_option("--delta", mc_delta, "Grid step");
    mc->add_option("--lags", mc_lags, "ACF lags for stage 1a");
    mc->add_option("--seed", mc_seed, "Master RNG seed")->required();
    mc->add_option("--threads", mc_threads, "Worker threads (0 = hardware)");
    mc->add_option("--out", mc_out, "Output estimates CSV")->required();
    mc->add_option("--summary", mc_summary_path, "Output summary JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*bin) {
            std::vector<std::vector<double>> events;
            for (const std::string& path : split_list(bin_events_arg))
                events.push_back(mivt::read_events_csv(path));
            std::vector<std::string> labels;
            if (!bin_labels.empty()) labels = split_list(bin_labels);
            const mivt::CountSeries series =
                mivt::bin_events(events, bin_delta, bin_start, bin_end, labels);
            mivt::write_counts_csv(series, bin_out);
            std::cerr << "wrote " << series.length() << " bins x " << series.dim()
                      << " components to " << bin_out << "\n";
        } else if (*sim) {
            const mivt::MivtModel model = load_model(sim_model);
            mivt::SimConfig cfg;
            cfg.delta = sim_delta;
            cfg.horizon = sim_horizon;
            cfg.eps_cut = sim_eps_cut;
            cfg.seed = sim_seed;
            if (sim_burnin == "auto") {
                const mivt::Burnin b = mivt::default_burnin(model, 1e-6);
                cfg.burnin = b.duration;
                if (b.long_memory_warning)
                    std::cerr << "warning: power-law trawl present; burn-in residue decays "
                                 "only polynomially\n";
            } else {
                cfg.burnin = std::stod(sim_burnin);
            }
            std::vector<std::string> warnings;
            const mivt::CountSeries series = mivt::simulate_mivt(model, cfg, &warnings);
            for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
            mivt::write_counts_csv(series, sim_out);
            std::cerr << "wrote " << series.length() << " rows to " << sim_out << "\n";
        } else if (*fitc) {
            const mivt::CountSeries series = mivt::read_counts_csv(fit_counts);
            const std::vector<mivt::TrawlFamily> families =
                parse_trawl_families(fit_trawl_arg, series.dim());
            mivt::FitOptions opts;
            opts.max_lag = fit_lags;
            const mivt::FitReport report =
                mivt::fit(series, families, mivt::seed_family_from_name(fit_seed_model), opts);
            write_json(mivt::to_json(report), fit_out);
            std::cerr << "wrote fit to " << fit_out << "\n";
        } else if (*acfc) {
            const mivt::CountSeries series = mivt::read_counts_csv(acf_counts);
            if (acf_component < 1 || acf_component > series.dim())
                throw std::invalid_argument("--component out of range");
            const std::vector<double> values =
                mivt::sample_acf(series, acf_component - 1, acf_max_lag);
            mivt::write_acf_csv(values, acf_out);
            if (!acf_summary.empty())
                write_json(mivt::to_json(mivt::summarize(series)), acf_summary);
        } else if (*boot) {
            mivt::FitOptions fopts;
            const mivt::FitReport fitted = load_fit_report_model(boot_fit, fopts);
            mivt::BootstrapOptions opts;
            opts.replicates = boot_reps;
            opts.level = boot_level;
            opts.seed = boot_seed;
            opts.threads = boot_threads;
            const mivt::FitReport with_ci = mivt::bootstrap(fitted, opts);
            write_json(mivt::to_json(with_ci), boot_out);
            std::cerr << "wrote bootstrap intervals to " << boot_out << "\n";
        } else if (*mc) {
            const mivt::MivtModel model = load_model(mc_model);
            mivt::McStudyOptions opts;
            opts.replicates = mc_reps;
            opts.n_obs = mc_nobs;
            opts.delta = mc_delta;
            opts.seed = mc_seed;
            opts.threads = mc_threads;
            opts.fit_options.max_lag = mc_lags;
            const mivt::McStudyResult result = mivt::mc_study(model, opts);
            std::ofstream out(mc_out);
            if (!out) throw std::invalid_argument("cannot write file: " + mc_out);
            for (std::size_t p = 0; p < result.parameter_names.size(); ++p)
                out << (p ? "," : "") << result.parameter_names[p];
            out << "\n";
            for (const auto& row : result.estimates) {
                for (std::size_t p = 0; p < row.size(); ++p) {
                    char buf[40];
                    std::snprintf(buf, sizeof(buf), "%.12g", row[p]);
                    out << (p ? "," : "") << buf;
                }
                out << "\n";
            }
            if (!mc_summary_path.empty()) write_json(mivt::to_json(result), mc_summary_path);
            std::cerr << "wrote " << result.estimates.size() << " estimate rows to " << mc_out
                      << " (" << result.failures << " failures)\n";
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
