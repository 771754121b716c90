#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rootflow/errors.hpp"
#include "rootflow/harness.hpp"

using namespace rootflow;
namespace fs = std::filesystem;

namespace {

nlohmann::json uniform_base() {
    return nlohmann::json::parse(R"({"kind":"cdf","knots":[[0.0,0.0],[1.0,1.0]]})");
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("config parsing: round trip, defaults, errors") {
    nlohmann::json doc{{"experiment", "radial"},
                       {"base_measure", uniform_base()},
                       {"n", 16},
                       {"m", 64},
                       {"t", 0.5},
                       {"emit", {"csv", "json"}}};
    const auto config = ExperimentConfig::from_json(doc);
    CHECK(config.experiment == "radial");
    CHECK(config.n == 16);
    CHECK(config.t_values == std::vector<double>{0.5});
    CHECK(config.pairs == 10000);
    const auto echo = ExperimentConfig::from_json(config.to_json());
    CHECK(echo.m == 64);

    CHECK_THROWS_AS(ExperimentConfig::from_json(nlohmann::json::parse(R"({"experiment":"x"})")),
                    config_error);
    doc["t"] = 1.5;
    CHECK_THROWS_AS(ExperimentConfig::from_json(doc), config_error);
    doc["t"] = 0.5;
    doc["emit"] = {"png"};
    CHECK_THROWS_AS(ExperimentConfig::from_json(doc), config_error);
}

TEST_CASE("run_radial: small uniform run, emitted files, determinism") {
    TempDir dir("rootflow_radial_test");
    ExperimentConfig config;
    config.experiment = "radial";
    config.base_measure = uniform_base();
    config.n = 24;
    config.m = 256;
    config.t_values = {0.5};
    config.output_dir = dir.path;
    config.emit = {"csv", "json", "svg"};

    const auto report = run_experiment(config);
    REQUIRE(report.records.size() == 1);
    const auto& rec = report.records[0];
    CHECK(rec.envelope_pass_fraction == 1.0);
    CHECK(rec.levy_distance_radial < 0.2);
    CHECK(rec.extra.at("surviving_roots") == 12.0);
    CHECK(rec.extra.at("sup_cdf_error") < 0.2);

    CHECK(fs::exists(dir.path / "radial_t1.csv"));
    CHECK(fs::exists(dir.path / "radial_t1.svg"));
    CHECK(fs::exists(dir.path / "report.json"));
    CHECK(fs::exists(dir.path / "manifest.json"));

    const std::string first_csv = slurp(dir.path / "radial_t1.csv");
    const std::string first_report = slurp(dir.path / "report.json");
    run_experiment(config);
    CHECK(slurp(dir.path / "radial_t1.csv") == first_csv);
    CHECK(slurp(dir.path / "report.json") == first_report);
}

TEST_CASE("run_radial: config validation") {
    ExperimentConfig config;
    config.experiment = "radial";
    config.base_measure = uniform_base();
    config.n = 4;  // too small
    config.m = 64;
    config.t_values = {0.5};
    CHECK_THROWS_AS(run_radial(config), config_error);
    config.n = 16;
    config.t_values = {0.0005};  // floor(n m t) = 0: no differentiation at all
    CHECK_THROWS_AS(run_radial(config), config_error);
    config.t_values = {0.999};  // would consume every root
    CHECK_THROWS_AS(run_radial(config), config_error);
    config.t_values = {0.5};
    config.base_measure.reset();
    CHECK_THROWS_AS(run_radial(config), config_error);
}

TEST_CASE("run_real: campaign has zero violations") {
    ExperimentConfig config;
    config.experiment = "real";
    config.n = 6;
    config.pairs = 500;
    config.seed = 11;
    const auto report = run_real(config);
    REQUIRE(report.records.size() == 1);
    const auto& rec = report.records[0];
    CHECK(rec.extra.at("monotonicity_violations") == 0.0);
    CHECK(rec.extra.at("strict_sum_violations") == 0.0);
    CHECK(rec.extra.at("lipschitz_violations") == 0.0);
    CHECK(rec.extra.at("max_lipschitz_ratio") <= 6.0 / 5.0 + 0x1.0p-20);
    CHECK(check_report(config, report).empty());
}

TEST_CASE("run_circular: drift stays tiny and the spread contracts") {
    ExperimentConfig config;
    config.experiment = "circular";
    config.n = 4;
    config.m = 5;
    config.steps = {0, 2, 10};
    const auto report = run_circular(config);
    REQUIRE(report.records.size() == 3);
    for (const auto& rec : report.records) CHECK(rec.extra.at("drift_rel") < 1e-8);
    CHECK(report.records.back().extra.at("radius_spread") <
          report.records.front().extra.at("radius_spread"));
    CHECK(check_report(config, report).empty());
}

TEST_CASE("run_complex: zero perturbation reproduces the radial engine") {
    ExperimentConfig config;
    config.experiment = "perturbed";
    config.base_measure = uniform_base();
    config.n = 6;
    config.m = 6;
    config.scale = 0.0;
    config.steps = {0, 6, 12};
    config.seed = 5;
    const auto report = run_complex(config);
    REQUIRE(report.records.size() == 3);
    for (const auto& rec : report.records) CHECK(rec.levy_distance_radial < 1e-6);
}

TEST_CASE("run_complex: small perturbation stays near the structured flow") {
    ExperimentConfig config;
    config.experiment = "perturbed";
    config.base_measure = uniform_base();
    config.n = 6;
    config.m = 6;
    config.steps = {0, 10};
    config.seed = 5;  // scale defaults to 1/m
    const auto report = run_complex(config);
    for (const auto& rec : report.records) CHECK(rec.levy_distance_radial < 0.1);
    CHECK(check_report(config, report).empty());
}

TEST_CASE("run_pde_check: uniform base residuals, dirac rejected") {
    ExperimentConfig config;
    config.experiment = "pde-check";
    config.base_measure = uniform_base();
    config.t_values = {0.3, 0.6};
    const auto report = run_pde_check(config);
    REQUIRE(report.records.size() == 2);
    for (const auto& rec : report.records) {
        CHECK(rec.extra.at("max_residual_psi") < 1e-6);
        CHECK(rec.extra.at("max_residual_density") < 1e-3);
    }
    CHECK(check_report(config, report).empty());

    config.base_measure = nlohmann::json::parse(R"({"kind":"dirac","at":1.0})");
    CHECK_THROWS_AS(run_pde_check(config), config_error);
}

TEST_CASE("check_report flags a failing radial gate") {
    ExperimentConfig config;
    config.experiment = "radial";
    ComparisonReport report{"radial", {}};
    ComparisonRecord bad;
    bad.t = 0.5;
    bad.levy_distance_radial = 0.2;
    bad.envelope_pass_fraction = 0.9;
    bad.extra["sup_cdf_error"] = 0.01;
    bad.extra["sup_quantile_error"] = 0.01;
    report.records.push_back(bad);
    const auto failures = check_report(config, report);
    CHECK(failures.size() == 2);
}

TEST_CASE("read_csv_column skips headers and reads the last field") {
    TempDir dir("rootflow_csv_test");
    fs::create_directories(dir.path);
    const fs::path file = dir.path / "sample.csv";
    std::ofstream(file) << "j,log_root,radius\n1,-0.5,0.5\n2,0.0,1.0\n3,0.25,1.25\n";
    const auto values = read_csv_column(file);
    CHECK(values == std::vector<double>{0.5, 1.0, 1.25});
    CHECK_THROWS_AS(read_csv_column(dir.path / "missing.csv"), config_error);
}
