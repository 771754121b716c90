#include "rootflow/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rootflow/complex_dynamics.hpp"
#include "rootflow/errors.hpp"
#include "rootflow/prediction.hpp"
#include "rootflow/radial_dynamics.hpp"
#include "rootflow/real_dynamics.hpp"
#include "rootflow/rng.hpp"
#include "rootflow/svg.hpp"

namespace rootflow {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point start) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - start).count();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw config_error("cannot open output file " + path.string());
    os << content;
}

struct Emitter {
    const ExperimentConfig& config;

    bool wants(const std::string& what) const {
        return !config.output_dir.empty() && config.emit.count(what) > 0;
    }
    void put(const std::string& name, const std::string& content) const {
        std::filesystem::create_directories(config.output_dir);
        write_file(config.output_dir / name, content);
    }
};

RadialMeasure base_measure_of(const ExperimentConfig& config) {
    if (!config.base_measure)
        throw config_error(config.experiment + ": config needs \"base_measure\"");
    return RadialMeasure::from_json(*config.base_measure);
}

std::vector<double> ladder_of(const ExperimentConfig& config) {
    if (!config.radii.empty()) return config.radii;
    return sample_radii(base_measure_of(config), config.n);
}

std::vector<std::complex<double>> structured_points(const std::vector<double>& radii, int m) {
    std::vector<std::complex<double>> pts;
    pts.reserve(radii.size() * static_cast<std::size_t>(m));
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (double r : radii)
        for (int k = 0; k < m; ++k)
            pts.push_back(std::polar(r, two_pi * static_cast<double>(k) / m));
    return pts;
}

std::vector<double> moduli_of(const std::vector<std::complex<double>>& pts) {
    std::vector<double> out;
    out.reserve(pts.size());
    for (const auto& z : pts) out.push_back(std::abs(z));
    std::sort(out.begin(), out.end());
    return out;
}

// moduli of the radial state's full root set: q zeros plus each radius m times
std::vector<double> radial_moduli(const RadialState& state) {
    std::vector<double> out;
    const RadiiView view = radii_view(state);
    out.reserve(static_cast<std::size_t>(state.q()) +
                view.radii.size() * static_cast<std::size_t>(state.m()));
    out.insert(out.end(), static_cast<std::size_t>(state.q()), 0.0);
    for (double r : view.radii)
        out.insert(out.end(), static_cast<std::size_t>(state.m()), r);
    std::sort(out.begin(), out.end());
    return out;
}

std::string scatter_csv(const std::vector<std::complex<double>>& pts) {
    std::string csv = "re,im\n";
    for (const auto& z : pts) csv += fmt(z.real()) + "," + fmt(z.imag()) + "\n";
    return csv;
}

long long floor_steps(int n, int m, double t) {
    return static_cast<long long>(
        std::floor(static_cast<double>(n) * static_cast<double>(m) * t));
}

void write_manifest(const ExperimentConfig& config, double wall_ms) {
    if (config.output_dir.empty()) return;
    nlohmann::json manifest;
    manifest["tool"] = "rootflow";
    manifest["version"] = "0.1.0";
    manifest["config"] = config.to_json();
    manifest["wall_time_ms"] = wall_ms;
    std::filesystem::create_directories(config.output_dir);
    write_file(config.output_dir / "manifest.json", manifest.dump(2) + "\n");
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw config_error("config must be a JSON object");
    ExperimentConfig c;
    if (!doc.contains("experiment") || !doc["experiment"].is_string())
        throw config_error("config needs string field \"experiment\"");
    c.experiment = doc["experiment"].get<std::string>();
    static const std::set<std::string> known = {"radial",      "real",      "circular",
                                                "complex-iid", "perturbed", "pde-check"};
    if (!known.count(c.experiment))
        throw config_error("unknown experiment \"" + c.experiment + "\"");

    try {
        if (doc.contains("base_measure")) c.base_measure = doc["base_measure"];
        if (doc.contains("n")) c.n = doc["n"].get<int>();
        if (doc.contains("m")) c.m = doc["m"].get<int>();
        if (doc.contains("t")) {
            if (doc["t"].is_array()) c.t_values = doc["t"].get<std::vector<double>>();
            else c.t_values = {doc["t"].get<double>()};
        }
        if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("output_dir")) c.output_dir = doc["output_dir"].get<std::string>();
        if (doc.contains("emit"))
            for (const auto& e : doc["emit"]) c.emit.insert(e.get<std::string>());
        if (doc.contains("steps")) c.steps = doc["steps"].get<std::vector<long long>>();
        if (doc.contains("scale")) c.scale = doc["scale"].get<double>();
        if (doc.contains("radii")) c.radii = doc["radii"].get<std::vector<double>>();
        if (doc.contains("h")) c.h = doc["h"].get<double>();
        if (doc.contains("pairs")) c.pairs = doc["pairs"].get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("config field has the wrong type: ") + e.what());
    }
    for (const auto& e : c.emit)
        if (e != "csv" && e != "svg" && e != "json")
            throw config_error("emit entries must be csv, svg, or json");
    for (double t : c.t_values)
        if (!(t > 0.0 && t < 1.0)) throw config_error("t values must lie in (0,1)");
    return c;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json doc;
    doc["experiment"] = experiment;
    if (base_measure) doc["base_measure"] = *base_measure;
    if (n) doc["n"] = n;
    if (m) doc["m"] = m;
    if (!t_values.empty()) doc["t"] = t_values;
    doc["seed"] = seed;
    if (!output_dir.empty()) doc["output_dir"] = output_dir.string();
    if (!emit.empty()) doc["emit"] = emit;
    if (!steps.empty()) doc["steps"] = steps;
    if (scale >= 0.0) doc["scale"] = scale;
    if (!radii.empty()) doc["radii"] = radii;
    if (h > 0.0) doc["h"] = h;
    doc["pairs"] = pairs;
    return doc;
}

nlohmann::json ComparisonReport::to_json() const {
    nlohmann::json doc;
    doc["experiment"] = experiment;
    auto arr = nlohmann::json::array();
    for (const auto& r : records) {
        if (r.levy_distance_radial < 0.0 || r.envelope_pass_fraction < 0.0 ||
            r.envelope_pass_fraction > 1.0)
            throw numerical_error("ComparisonReport: invariant violated");
        // runtime_ms stays out of the serialized report so identical
        // config + seed keeps reports byte-identical; timings live in the
        // manifest
        nlohmann::json rec;
        rec["t"] = r.t;
        rec["levy_distance_radial"] = r.levy_distance_radial;
        rec["max_log_ratio_error"] = r.max_log_ratio_error;
        rec["envelope_pass_fraction"] = r.envelope_pass_fraction;
        rec["extra"] = r.extra;
        arr.push_back(std::move(rec));
    }
    doc["records"] = std::move(arr);
    return doc;
}

double sup_cdf_gap(const std::vector<double>& sorted_samples,
                   const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted_samples.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double f = cdf(sorted_samples[i]);
        sup = std::max(sup, std::fabs(f - static_cast<double>(i) / n));
        sup = std::max(sup, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return sup;
}

std::vector<double> read_csv_column(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw config_error("cannot open CSV file " + file.string());
    std::vector<double> values;
    std::string line;
    while (std::getline(is, line)) {
        const auto pos = line.find_last_of(',');
        const std::string field = pos == std::string::npos ? line : line.substr(pos + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(field, &used);
            if (used > 0) values.push_back(v);
        } catch (...) {
            // header or non-numeric line
        }
    }
    if (values.empty()) throw config_error("no numeric values in " + file.string());
    return values;
}

ComparisonReport run_radial(const ExperimentConfig& config) {
    if (config.m < 2 || config.n < 8)
        throw config_error("radial: requires m >= 2 and n >= 8");
    if (config.t_values.empty()) throw config_error("radial: needs t");
    const RadialMeasure base = base_measure_of(config);
    const std::vector<double> radii0 = sample_radii(base, config.n);
    const Emitter emitter{config};

    ComparisonReport report{"radial", {}};
    for (double t : config.t_values) {
        const auto start = clock_type::now();
        const long long k = floor_steps(config.n, config.m, t);
        const long long ell = (k + config.m - 1) / config.m;
        if (ell < 1 || ell > config.n - 1)
            throw config_error("radial: t yields no differentiation cycle (need 1/n <= t < 1)");

        const RadialState state0 = RadialState::from_radii(radii0, config.m);
        const RadialState state = differentiate_k(state0, k);
        const RadiiView view = radii_view(state);
        const LimitLaw law(base, t);

        const std::vector<double> pred = predicted_radii(law, radii0, static_cast<int>(ell));
        const auto entries =
            envelope_check(view.radii, law, radii0, config.n, config.m, static_cast<int>(ell));

        ComparisonRecord rec;
        rec.t = t;
        rec.envelope_pass_fraction = envelope_pass_fraction(entries);
        for (const auto& e : entries)
            if (!e.informational)
                rec.max_log_ratio_error = std::max(rec.max_log_ratio_error,
                                                   std::fabs(e.log_ratio));

        const int survivors = static_cast<int>(view.radii.size());
        rec.levy_distance_radial = levy_distance(EmpiricalMeasure1D(view.radii),
                                                 sample_limit_law(law, survivors, 0));
        rec.extra["surviving_roots"] = static_cast<double>(survivors);
        rec.extra["q_residual"] = static_cast<double>(state.q());

        // sup gaps against the limit law, on the radial CDF and on quantiles
        rec.extra["sup_cdf_error"] = sup_cdf_gap(view.radii, [&](double y) {
            return limit_cdf(law, y) / (1.0 - t);
        });
        double sup_q = 0.0;
        std::vector<double> grid_q(view.radii.size());
        for (int j = 1; j <= survivors; ++j) {
            const double x = (1.0 - t) * (2.0 * j - 1.0) / (2.0 * survivors);
            grid_q[static_cast<std::size_t>(j - 1)] = limit_quantile(law, x);
            sup_q = std::max(sup_q, std::fabs(view.radii[static_cast<std::size_t>(j - 1)] -
                                              grid_q[static_cast<std::size_t>(j - 1)]));
        }
        rec.extra["sup_quantile_error"] = sup_q;
        rec.runtime_ms = ms_since(start);
        report.records.push_back(rec);

        const std::string tag = "t" + std::to_string(report.records.size());
        if (emitter.wants("csv")) {
            std::string csv = "j,observed_radius,predicted_radius,limit_quantile\n";
            for (std::size_t j = 0; j < view.radii.size(); ++j)
                csv += std::to_string(j + 1) + "," + fmt(view.radii[j]) + "," + fmt(pred[j]) +
                       "," + fmt(grid_q[j]) + "\n";
            emitter.put("radial_" + tag + ".csv", csv);
        }
        if (emitter.wants("svg")) {
            std::vector<double> idx(view.radii.size());
            for (std::size_t j = 0; j < idx.size(); ++j) idx[j] = static_cast<double>(j + 1);
            emitter.put("radial_" + tag + ".svg",
                        polyline_svg({{idx, view.radii, "#1f6fb2"}, {idx, pred, "#c23b22"}},
                                     "observed vs predicted radii, t=" + fmt(t)));
        }
    }
    if (emitter.wants("json")) emitter.put("report.json", report.to_json().dump(2) + "\n");
    return report;
}

ComparisonReport run_real(const ExperimentConfig& config) {
    const int n = config.n;
    if (n < 2) throw config_error("real: requires n >= 2");
    if (config.pairs < 1) throw config_error("real: pairs must be >= 1");
    const auto start = clock_type::now();
    Rng rng(config.seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(n) + 1);

    const double bound = static_cast<double>(n) / static_cast<double>(n - 1);
    long long order_violations = 0;
    long long strict_sum_violations = 0;
    long long lipschitz_violations = 0;
    double max_ratio = 0.0;

    for (int p = 0; p < config.pairs; ++p) {
        std::vector<double> z(static_cast<std::size_t>(n));
        for (auto& v : z) v = rng.uniform(-1.0, 1.0);
        std::sort(z.begin(), z.end());
        std::vector<double> z2 = z;
        bool moved = false;
        for (auto& v : z2) {
            const double d = rng.uniform(0.0, 0.5);
            v += d;
            moved = moved || d > 0.0;
        }
        std::sort(z2.begin(), z2.end());
        std::vector<double> w(static_cast<std::size_t>(n));
        for (auto& v : w) v = rng.uniform(0.1, 2.0);

        const auto a = weighted_derivative_roots({z, w});
        const auto b = weighted_derivative_roots({z2, w});
        double sum_a = 0.0, sum_b = 0.0;
        for (std::size_t i = 0; i < a.roots.size(); ++i) {
            if (b.roots[i] < a.roots[i] - 1e-12) ++order_violations;
            sum_a += a.roots[i];
            sum_b += b.roots[i];
        }
        if (moved && !(sum_b > sum_a)) ++strict_sum_violations;

        // equal-weight Lipschitz bound in the Levy metric
        const auto au = repeated_derivative({z, std::vector<double>(z.size(), 1.0)}, 1);
        const auto bu = repeated_derivative({z2, std::vector<double>(z2.size(), 1.0)}, 1);
        const double d_in = levy_distance(EmpiricalMeasure1D(z), EmpiricalMeasure1D(z2));
        const double d_out =
            levy_distance(EmpiricalMeasure1D(au.roots), EmpiricalMeasure1D(bu.roots));
        if (d_out > (bound + 0x1.0p-20) * d_in + 0x1.0p-40) ++lipschitz_violations;
        if (d_in >= 1e-6) max_ratio = std::max(max_ratio, d_out / d_in);
    }

    ComparisonRecord rec;
    rec.t = static_cast<double>(n);
    rec.runtime_ms = ms_since(start);
    rec.extra["n"] = static_cast<double>(n);
    rec.extra["pairs"] = static_cast<double>(config.pairs);
    rec.extra["monotonicity_violations"] = static_cast<double>(order_violations);
    rec.extra["strict_sum_violations"] = static_cast<double>(strict_sum_violations);
    rec.extra["lipschitz_violations"] = static_cast<double>(lipschitz_violations);
    rec.extra["max_lipschitz_ratio"] = max_ratio;
    rec.extra["lipschitz_bound"] = bound;

    ComparisonReport report{"real", {rec}};
    const Emitter emitter{config};
    if (emitter.wants("json")) emitter.put("report.json", report.to_json().dump(2) + "\n");
    return report;
}

ComparisonReport run_circular(const ExperimentConfig& config) {
    if (config.n < 1 || config.m < 1) throw config_error("circular: requires n >= 1, m >= 1");
    std::vector<double> radii = config.radii;
    if (radii.empty()) {
        radii.resize(static_cast<std::size_t>(config.n));
        for (int j = 1; j <= config.n; ++j)
            radii[static_cast<std::size_t>(j - 1)] = static_cast<double>(j);
    }
    std::vector<long long> steps = config.steps.empty()
                                       ? std::vector<long long>{0, 2, 30, 200}
                                       : config.steps;
    std::sort(steps.begin(), steps.end());
    if (steps.front() < 0) throw config_error("circular: steps must be >= 0");

    double log_target = 0.0;
    for (double r : radii) {
        if (!(r > 0.0)) throw config_error("circular: radii must be positive");
        log_target += std::log(r);
    }
    const double target = std::exp(log_target / static_cast<double>(radii.size()));

    const Emitter emitter{config};
    ComparisonReport report{"circular", {}};
    ComplexRootSet set(structured_points(radii, config.m));
    long long done = 0;
    for (long long snap : steps) {
        const auto start = clock_type::now();
        for (; done < snap; ++done) set = circular_derivative(set);
        const auto mods = moduli_of(set.roots());
        double log_mean = 0.0;
        for (double r : mods) log_mean += std::log(r);
        const double gm = std::exp(log_mean / static_cast<double>(mods.size()));

        ComparisonRecord rec;
        rec.t = static_cast<double>(snap);
        rec.runtime_ms = ms_since(start);
        rec.extra["geometric_mean"] = gm;
        rec.extra["target_geometric_mean"] = target;
        rec.extra["drift_rel"] = std::fabs(gm - target) / target;
        rec.extra["radius_spread"] = mods.back() - mods.front();
        rec.extra["near_collisions"] = static_cast<double>(near_collision_count(set));
        report.records.push_back(rec);

        const std::string tag = "step" + std::to_string(snap);
        if (emitter.wants("csv")) emitter.put("circular_" + tag + ".csv", scatter_csv(set.roots()));
        if (emitter.wants("svg"))
            emitter.put("circular_" + tag + ".svg",
                        scatter_svg(set.roots(), "circular derivative, step " +
                                                     std::to_string(snap)));
    }
    if (emitter.wants("json")) emitter.put("report.json", report.to_json().dump(2) + "\n");
    return report;
}

ComparisonReport run_complex(const ExperimentConfig& config) {
    if (config.n < 1 || config.m < 1) throw config_error("complex: requires n >= 1, m >= 1");
    const std::vector<double> radii0 = ladder_of(config);
    std::vector<long long> steps = config.steps.empty() ? std::vector<long long>{0, 30}
                                                        : config.steps;
    std::sort(steps.begin(), steps.end());
    if (steps.front() < 0) throw config_error("complex: steps must be >= 0");
    const long long degree =
        static_cast<long long>(radii0.size()) * static_cast<long long>(config.m);
    if (steps.back() > degree - 1)
        throw config_error("complex: step count exceeds the polynomial degree");

    ComplexRootSet set = [&] {
        if (config.experiment == "complex-iid")
            return sample_iid_arguments(radii0, config.m, config.seed);
        const double scale = config.scale >= 0.0 ? config.scale
                                                 : 1.0 / static_cast<double>(config.m);
        return perturb_arguments(ComplexRootSet(structured_points(radii0, config.m)), scale,
                                 config.seed);
    }();

    const Emitter emitter{config};
    ComparisonReport report{config.experiment, {}};
    const RadialState radial0 = RadialState::from_radii(radii0, config.m);
    long long done = 0;
    for (long long snap : steps) {
        const auto start = clock_type::now();
        for (; done < snap; ++done) set = derivative_roots_complex(set);

        // radial Levy distance against the structured run at matched step
        const RadialState reference = differentiate_k(radial0, snap);
        const double d = levy_distance(EmpiricalMeasure1D(moduli_of(set.roots())),
                                       EmpiricalMeasure1D(radial_moduli(reference)));

        ComparisonRecord rec;
        rec.t = static_cast<double>(snap);
        rec.levy_distance_radial = d;
        rec.runtime_ms = ms_since(start);
        rec.extra["near_collisions"] = static_cast<double>(near_collision_count(set));
        report.records.push_back(rec);

        const std::string tag = "step" + std::to_string(snap);
        if (emitter.wants("csv")) emitter.put(config.experiment + "_" + tag + ".csv",
                                              scatter_csv(set.roots()));
        if (emitter.wants("svg"))
            emitter.put(config.experiment + "_" + tag + ".svg",
                        scatter_svg(set.roots(),
                                    config.experiment + ", step " + std::to_string(snap)));
    }
    if (emitter.wants("json")) emitter.put("report.json", report.to_json().dump(2) + "\n");
    return report;
}

ComparisonReport run_pde_check(const ExperimentConfig& config) {
    const RadialMeasure base = base_measure_of(config);
    if (!base.has_continuous_strictly_increasing_cdf())
        throw config_error("pde-check: base must have a continuous strictly increasing CDF");
    if (config.t_values.empty()) throw config_error("pde-check: needs t");
    const double A = base.support_upper();
    const double h_psi = config.h > 0.0 ? config.h : 1e-4 * A;
    const double h_den = config.h > 0.0 ? 10.0 * config.h : 1e-3 * A;

    const Emitter emitter{config};
    std::string csv = "t,x,residual_psi,residual_density\n";
    ComparisonReport report{"pde-check", {}};
    for (double t : config.t_values) {
        const auto start = clock_type::now();
        const LimitLaw law(base, t);
        const double band = A * (1.0 - t);

        // evaluation points aligned with CDF cell centers so the stencils of
        // piecewise-linear bases stay inside smooth cells
        std::vector<double> alphas;
        const auto knots = base.knots();
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const double mid = 0.5 * (knots[i].second + knots[i + 1].second);
            if (mid > t) alphas.push_back(mid);
        }
        if (alphas.size() > 24) {
            std::vector<double> thinned;
            for (std::size_t i = 0; i < 24; ++i)
                thinned.push_back(alphas[i * alphas.size() / 24]);
            alphas = std::move(thinned);
        }
        if (alphas.size() < 4) {
            alphas.clear();
            for (int i = 0; i < 24; ++i)
                alphas.push_back(t + (1.0 - t) * (2.0 * i + 1.0) / 48.0);
        }
        std::vector<double> xs;
        for (double alpha : alphas) {
            const double x = limit_quantile(law, alpha - t);
            if (x - 2.0 * h_den > 0.0 && x + 2.0 * h_den < A * (1.0 - t - h_den) &&
                x >= 10.0 * h_den && x > 0.05 * band && x < 0.95 * band)
                xs.push_back(x);
        }
        double max_psi = 0.0, max_den = 0.0;
        std::vector<double> slopes_psi, slopes_den;
        for (double x : xs) {
            const double r1 = pde_residual_psi(base, x, t, h_psi);
            const double r2 = pde_residual_psi(base, x, t, 0.5 * h_psi);
            const double d1 = pde_residual_density(base, x, t, h_den);
            const double d2 = pde_residual_density(base, x, t, 0.5 * h_den);
            max_psi = std::max(max_psi, std::fabs(r1));
            max_den = std::max(max_den, std::fabs(d1));
            if (std::fabs(r2) > 1e-300) slopes_psi.push_back(std::log2(std::fabs(r1 / r2)));
            if (std::fabs(d2) > 1e-300) slopes_den.push_back(std::log2(std::fabs(d1 / d2)));
            csv += fmt(t) + "," + fmt(x) + "," + fmt(r1) + "," + fmt(d1) + "\n";
        }
        auto median = [](std::vector<double> v) {
            if (v.empty()) return 0.0;
            std::sort(v.begin(), v.end());
            return v[v.size() / 2];
        };
        ComparisonRecord rec;
        rec.t = t;
        rec.runtime_ms = ms_since(start);
        rec.extra["max_residual_psi"] = max_psi;
        rec.extra["max_residual_density"] = max_den;
        rec.extra["richardson_slope_psi"] = median(slopes_psi);
        rec.extra["richardson_slope_density"] = median(slopes_den);
        rec.extra["grid_points"] = static_cast<double>(xs.size());
        report.records.push_back(rec);
    }
    if (emitter.wants("csv")) emitter.put("pde_residuals.csv", csv);
    if (emitter.wants("json")) emitter.put("report.json", report.to_json().dump(2) + "\n");
    return report;
}

ComparisonReport run_experiment(const ExperimentConfig& config) {
    const auto start = clock_type::now();
    ComparisonReport report;
    if (config.experiment == "radial") report = run_radial(config);
    else if (config.experiment == "real") report = run_real(config);
    else if (config.experiment == "circular") report = run_circular(config);
    else if (config.experiment == "complex-iid" || config.experiment == "perturbed")
        report = run_complex(config);
    else if (config.experiment == "pde-check") report = run_pde_check(config);
    else throw config_error("unknown experiment \"" + config.experiment + "\"");
    write_manifest(config, ms_since(start));
    return report;
}

std::vector<std::string> check_report(const ExperimentConfig& config,
                                      const ComparisonReport& report) {
    std::vector<std::string> failures;
    auto extra = [](const ComparisonRecord& r, const std::string& key) {
        auto it = r.extra.find(key);
        return it == r.extra.end() ? 0.0 : it->second;
    };
    if (report.experiment == "radial") {
        for (const auto& r : report.records) {
            if (!(r.levy_distance_radial < 0.05))
                failures.push_back("radial t=" + fmt(r.t) + ": levy_distance_radial " +
                                   fmt(r.levy_distance_radial) + " >= 0.05");
            if (r.envelope_pass_fraction != 1.0)
                failures.push_back("radial t=" + fmt(r.t) + ": envelope pass fraction " +
                                   fmt(r.envelope_pass_fraction) + " != 1");
            if (!(extra(r, "sup_cdf_error") < 0.05))
                failures.push_back("radial t=" + fmt(r.t) + ": sup CDF error " +
                                   fmt(extra(r, "sup_cdf_error")) + " >= 0.05");
            if (!(extra(r, "sup_quantile_error") < 0.05))
                failures.push_back("radial t=" + fmt(r.t) + ": sup quantile error " +
                                   fmt(extra(r, "sup_quantile_error")) + " >= 0.05");
        }
    } else if (report.experiment == "real") {
        for (const auto& r : report.records) {
            if (extra(r, "monotonicity_violations") != 0.0)
                failures.push_back("real n=" + fmt(extra(r, "n")) + ": order violations");
            if (extra(r, "strict_sum_violations") != 0.0)
                failures.push_back("real n=" + fmt(extra(r, "n")) + ": strict sum violations");
            if (extra(r, "lipschitz_violations") != 0.0)
                failures.push_back("real n=" + fmt(extra(r, "n")) + ": Lipschitz violations");
        }
    } else if (report.experiment == "circular") {
        for (const auto& r : report.records)
            if (!(extra(r, "drift_rel") < 1e-6))
                failures.push_back("circular step=" + fmt(r.t) + ": geometric mean drift " +
                                   fmt(extra(r, "drift_rel")) + " >= 1e-6");
        if (report.records.size() >= 2) {
            const double first = extra(report.records.front(), "radius_spread");
            const double last = extra(report.records.back(), "radius_spread");
            if (!(last < first))
                failures.push_back("circular: radius spread did not decrease (" + fmt(first) +
                                   " -> " + fmt(last) + ")");
        }
    } else if (report.experiment == "perturbed") {
        for (const auto& r : report.records)
            if (!(r.levy_distance_radial < 0.1))
                failures.push_back("perturbed step=" + fmt(r.t) + ": radial Levy distance " +
                                   fmt(r.levy_distance_radial) + " >= 0.1");
    } else if (report.experiment == "pde-check") {
        for (const auto& r : report.records) {
            if (!(extra(r, "max_residual_psi") < 1e-6))
                failures.push_back("pde-check t=" + fmt(r.t) + ": Psi residual " +
                                   fmt(extra(r, "max_residual_psi")) + " >= 1e-6");
            if (!(extra(r, "max_residual_density") < 1e-3))
                failures.push_back("pde-check t=" + fmt(r.t) + ": density residual " +
                                   fmt(extra(r, "max_residual_density")) + " >= 1e-3");
        }
    }
    (void)config;
    return failures;
}

} // namespace rootflow
