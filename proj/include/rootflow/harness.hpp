#pragma once
// Experiment runner: config parsing, the per-experiment pipelines, and CSV /
// SVG / JSON emitters with deterministic formatting.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rootflow/measures.hpp"

namespace rootflow {

struct ExperimentConfig {
    std::string experiment;  // radial | real | circular | complex-iid | perturbed | pde-check
    std::optional<nlohmann::json> base_measure;
    int n = 0;
    int m = 0;
    std::vector<double> t_values;
    std::uint64_t seed = 0;
    std::filesystem::path output_dir;  // empty: no files written
    std::set<std::string> emit;        // subset of {csv, svg, json}
    std::vector<long long> steps;      // snapshot steps for circular / complex runs
    double scale = -1.0;               // perturbed: angular scale; default 1/m
    std::vector<double> radii;         // explicit ladder; circular defaults to 1..n
    double h = 0.0;                    // pde-check: step for the Psi equation; default 1e-4*A
    int pairs = 10000;                 // real: random pairs per campaign

    static ExperimentConfig from_json(const nlohmann::json& doc);
    nlohmann::json to_json() const;
};

struct ComparisonRecord {
    double t = 0.0;  // time for radial/pde runs, snapshot step for circular/complex, n for real
    double levy_distance_radial = 0.0;
    double max_log_ratio_error = 0.0;
    double envelope_pass_fraction = 1.0;
    double runtime_ms = 0.0;
    std::map<std::string, double> extra;
};

struct ComparisonReport {
    std::string experiment;
    std::vector<ComparisonRecord> records;

    nlohmann::json to_json() const;
};

ComparisonReport run_radial(const ExperimentConfig& config);
ComparisonReport run_real(const ExperimentConfig& config);
ComparisonReport run_circular(const ExperimentConfig& config);
ComparisonReport run_complex(const ExperimentConfig& config);
ComparisonReport run_pde_check(const ExperimentConfig& config);

/// Dispatches on config.experiment and writes the manifest when an output
/// directory is configured.
ComparisonReport run_experiment(const ExperimentConfig& config);

/// Frozen desk-scale thresholds per experiment; returns one message per
/// violated gate (empty list: all gates pass).
std::vector<std::string> check_report(const ExperimentConfig& config,
                                      const ComparisonReport& report);

/// sup_x |F_emp(x) - F(x)| of sorted samples against a continuous CDF.
double sup_cdf_gap(const std::vector<double>& sorted_samples,
                   const std::function<double(double)>& cdf);

/// Numbers parsed from the last comma-separated field of each line; lines
/// without a trailing numeric field (headers) are skipped.
std::vector<double> read_csv_column(const std::filesystem::path& file);

} // namespace rootflow
