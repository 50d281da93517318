#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mivt/csv.hpp"
#include "mivt/json_io.hpp"
#include "mivt/moments.hpp"
#include "mivt/rng.hpp"
#include "support/schema_check.hpp"

using namespace mivt;
using mivt_test::load_json;
using mivt_test::schema_violation;

namespace {

namespace fs = std::filesystem;

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "mivt_io_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MIVT_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

void write_events(const fs::path& path, const std::vector<double>& ts) {
    std::ofstream out(path);
    out << "timestamp\n";
    for (double t : ts) out << t << "\n";
}

}  // namespace

TEST_CASE("trawl and seed JSON round-trips") {
    const std::vector<TrawlSpec> trawls{Exponential(2.157), SupIG(0.4, 2.0),
                                        GammaLongMemory(1.0, 1.5), GIG(0.7, 1.1, 0.9),
                                        SeasonalExp(1.0, 0.7)};
    for (const TrawlSpec& t : trawls) {
        const TrawlSpec back = trawl_from_json(to_json(t));
        CHECK(family_name(back) == family_name(t));
        CHECK(lebesgue(back) == doctest::Approx(lebesgue(t)).epsilon(1e-15));
        CHECK(acf(back, 0.7) == doctest::Approx(acf(t, 0.7)).epsilon(1e-12));
    }
    const std::vector<SeedSpec> seeds{
        NBCommonFactor(0.812, {95.161, 73.055}),
        NBIndependent({1.0, 2.0}, {0.5, 0.25}),
        NBCommonPlusIdio(0.8, {0.5, 0.9}, {0.6, 0.0}),
        PoissonFactor({{1, 0, 1}, {0, 1, 1}}, {1.0, 2.0, 3.0}),
    };
    for (const SeedSpec& s : seeds) {
        const SeedSpec back = seed_from_json(to_json(s));
        CHECK(family_name(back) == family_name(s));
        const SeedCumulants a = seed_cumulants(s);
        const SeedCumulants b = seed_cumulants(back);
        CHECK(a.mean == b.mean);
        CHECK(a.covariance == b.covariance);
    }
}

TEST_CASE("model JSON validates against the shipped schema") {
    const MivtModel model({Exponential(2.157), Exponential(1.919)},
                          NBCommonFactor(0.812, {95.161, 73.055}));
    const nlohmann::json j = to_json(model);
    const nlohmann::json schema = load_json(std::string(MIVT_SCHEMA_DIR) + "/model.schema.json");
    CHECK(schema_violation(j, schema) == "");
    const MivtModel back = model_from_json(j);
    CHECK(back.dim() == 2);
    CHECK_THROWS_AS(
        model_from_json(nlohmann::json{{"trawls", nlohmann::json::array()}, {"seed", nullptr}}),
        std::exception);
}

TEST_CASE("counts CSV round-trips losslessly") {
    Engine rng = make_engine(9, 0);
    std::poisson_distribution<std::int64_t> pois(11.0);
    for (double delta : {1.0, 0.25, 5.0}) {
        CountSeries s;
        s.delta = delta;
        s.labels = {"submissions", "deletions"};
        s.counts.assign(2, {});
        for (int k = 0; k < 200; ++k) {
            s.counts[0].push_back(pois(rng));
            s.counts[1].push_back(pois(rng));
        }
        const fs::path path = temp_dir() / "roundtrip.csv";
        write_counts_csv(s, path.string());
        const CountSeries back = read_counts_csv(path.string());
        CHECK(back.counts == s.counts);
        CHECK(back.labels == s.labels);
        CHECK(back.delta == doctest::Approx(delta).epsilon(1e-12));
    }
    CHECK_THROWS_AS(read_counts_csv("/nonexistent/counts.csv"), std::invalid_argument);
}

TEST_CASE("event binning matches the half-open convention") {
    const CountSeries s = bin_events({{0.1, 4.9, 5.2}}, 5.0, 0.0, 10.0);
    CHECK(s.counts[0] == std::vector<std::int64_t>{2, 1});

    // a timestamp exactly on a bin edge belongs to the later bin
    const CountSeries edge = bin_events({{5.0}}, 5.0, 0.0, 10.0);
    CHECK(edge.counts[0] == std::vector<std::int64_t>{0, 1});

    // 5.5 hours of five-second bins
    const CountSeries day = bin_events({{2000.0}}, 5.0, 1800.0, 21600.0);
    CHECK(day.length() == 3960);

    CHECK_THROWS_AS(bin_events({{1.0}}, 5.0, 10.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(bin_events({{1.0}}, 5.0, 0.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(bin_events({}, 5.0, 0.0, 10.0), std::invalid_argument);
}

TEST_CASE("event binning conserves in-window counts on fuzzed inputs") {
    Engine rng = make_engine(1234, 0);
    std::uniform_real_distribution<double> unif(0.0, 120.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> events(500);
        for (double& t : events) t = unif(rng);
        const double start = 10.0, end = 90.0, delta = 2.5;
        const CountSeries s = bin_events({events}, delta, start, end);
        std::int64_t total = 0;
        for (std::int64_t c : s.counts[0]) total += c;
        std::int64_t expected = 0;
        for (double t : events)
            if (t >= start && t < end) ++expected;
        CHECK(total == expected);
    }
}

TEST_CASE("cli: simulate is byte-identical across runs and seeds change output") {
    const fs::path model_path = fs::path(MIVT_TEST_DATA_DIR) / "lob_model.json";
    const fs::path out1 = temp_dir() / "sim1.csv";
    const fs::path out2 = temp_dir() / "sim2.csv";
    const fs::path out3 = temp_dir() / "sim3.csv";
    const std::string base = "simulate --model " + model_path.string() +
                             " --delta 1 --horizon 500 --burnin auto";
    REQUIRE(run_cli(base + " --seed 42 --out " + out1.string()) == 0);
    REQUIRE(run_cli(base + " --seed 42 --out " + out2.string()) == 0);
    REQUIRE(run_cli(base + " --seed 43 --out " + out3.string()) == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(out1) != slurp(out3));
}

TEST_CASE("cli: bin -> fit -> acf pipeline with schema-valid outputs") {
    const fs::path ev1 = temp_dir() / "ev1.csv";
    const fs::path ev2 = temp_dir() / "ev2.csv";
    Engine rng = make_engine(7, 1);
    std::uniform_real_distribution<double> unif(0.0, 400.0);
    std::vector<double> t1(4000), t2(3000);
    for (double& t : t1) t = unif(rng);
    for (double& t : t2) t = unif(rng);
    write_events(ev1, t1);
    write_events(ev2, t2);

    const fs::path counts = temp_dir() / "binned.csv";
    REQUIRE(run_cli("bin --events " + ev1.string() + "," + ev2.string() +
                    " --delta 2 --start 0 --end 400 --labels subs,dels --out " +
                    counts.string()) == 0);
    const CountSeries binned = read_counts_csv(counts.string());
    CHECK(binned.length() == 200);
    CHECK(binned.labels == std::vector<std::string>{"subs", "dels"});

    // uniform arrivals are equidispersed, so an NB fit must fail cleanly
    CHECK(run_cli("fit --counts " + counts.string() +
                  " --trawl exp --seed-model nb-common --lags 10 --out " +
                  (temp_dir() / "bad_fit.json").string()) == 2);

    // a simulated path fits fine
    const fs::path model_path = fs::path(MIVT_TEST_DATA_DIR) / "lob_model.json";
    const fs::path sim = temp_dir() / "fit_input.csv";
    REQUIRE(run_cli("simulate --model " + model_path.string() +
                    " --delta 1 --horizon 3960 --burnin auto --seed 11 --out " +
                    sim.string()) == 0);
    const fs::path fit_out = temp_dir() / "fit.json";
    REQUIRE(run_cli("fit --counts " + sim.string() +
                    " --trawl exp,exp --seed-model nb-common --lags 30 --out " +
                    fit_out.string()) == 0);
    CHECK(schema_violation(load_json(fit_out.string()),
                           load_json(std::string(MIVT_SCHEMA_DIR) + "/fit_report.schema.json")) ==
          "");

    const fs::path acf_out = temp_dir() / "acf.csv";
    const fs::path summary_out = temp_dir() / "summary.json";
    REQUIRE(run_cli("acf --counts " + sim.string() + " --component 1 --max-lag 20 --out " +
                    acf_out.string() + " --summary " + summary_out.string()) == 0);
    CHECK(schema_violation(load_json(summary_out.string()),
                           load_json(std::string(MIVT_SCHEMA_DIR) + "/summary.schema.json")) ==
          "");
    std::ifstream acf_in(acf_out);
    std::string header;
    std::getline(acf_in, header);
    CHECK(header == "lag,r");
    int rows = 0;
    for (std::string line; std::getline(acf_in, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == 20);
}

TEST_CASE("cli: usage errors exit with status 1") {
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("simulate --model /nonexistent.json --delta 1 --horizon 10 --seed 1 --out " +
                  (temp_dir() / "x.csv").string()) == 1);
    // --seed is mandatory for randomised commands
    const fs::path model_path = fs::path(MIVT_TEST_DATA_DIR) / "lob_model.json";
    CHECK(run_cli("simulate --model " + model_path.string() + " --delta 1 --horizon 10 --out " +
                  (temp_dir() / "y.csv").string()) == 1);
}

TEST_CASE("cli: mc-study writes estimates and a schema-valid summary") {
    const fs::path model_path = temp_dir() / "small_model.json";
    {
        const MivtModel model({Exponential(1.0), Exponential(0.5)},
                              NBCommonFactor(1.3, {0.5, 0.7}));
        std::ofstream out(model_path);
        out << to_json(model).dump(2);
    }
    const fs::path est = temp_dir() / "mc.csv";
    const fs::path summary = temp_dir() / "mc_summary.json";
    REQUIRE(run_cli("mc-study --model " + model_path.string() +
                    " --reps 8 --n-obs 500 --delta 1 --seed 3 --out " + est.string() +
                    " --summary " + summary.string()) == 0);
    CHECK(schema_violation(load_json(summary.string()),
                           load_json(std::string(MIVT_SCHEMA_DIR) + "/mc_summary.schema.json")) ==
          "");
    std::ifstream in(est);
    std::string header;
    std::getline(in, header);
    CHECK(header == "lambda1,lambda2,alpha1,alpha2,kappa");
}
