#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "microloc/detfun.hpp"
#include "microloc/estimate.hpp"
#include "microloc/frontier.hpp"
#include "microloc/synth.hpp"

namespace microloc {

enum class Measure { frontier, local, pointwise, oscillation_lower, zero_presence };

/// Post-processing step applied to the analysed path, in order.
///   frac_integral {order}, envelope {t0, gamma}, primitive, realized_qv {block},
///   square, scale {c}, add_detfun {spec}
struct Transform {
    std::string op;
    nlohmann::json args = nlohmann::json::object();
};

/// Where to evaluate. Either fixed times (optionally each with its own expectation) or the
/// detected zero set of the process, on its zero side or on the matched nonzero side.
struct ProbeSpec {
    std::vector<double> times;
    std::vector<nlohmann::json> expectations;
    bool zero_set = false;
    bool zero_side = true;
};

struct ExperimentConfig {
    std::string name;
    std::string anchor;
    std::optional<ProcessSpec> process;
    std::optional<DetFunSpec> detfun;
    Grid grid{0.0, 1.0, 1025};
    std::string component; ///< auxiliary path of the synthesis to analyse; empty = primary
    std::vector<Transform> transforms;
    ProbeSpec probes;
    Measure measure = Measure::frontier;
    std::vector<double> s_grid;
    std::size_t seed_count = 1;
    std::uint64_t master_seed = 0;
    /// One of {"catalog": key, "classic": bool}, {"frontier": F}, {"chain": {"base": E, "ops": [...]}},
    /// {"min": [E, ...]}, {"compose_lower": {...}}, {"bounds": {"lower": E, "upper": E}},
    /// {"sde_bounds": {alpha_a, alpha_b, case}}, {"value": x}, {"half_plus_hurst": true},
    /// {"fraction": x}.
    nlohmann::json expectation;
    double tolerance = 0.1;
    FitWindow window;
    bool detrend = false;
    double eps = 0.2;     ///< oscillation_lower
    int r_min = 4, r_max = 12;
    bool expect_zeros = true;  ///< zero_presence
};

/// Analytic target: an interval per s' (lower == upper for exact predictions).
struct Target {
    FrontierPL lower = FrontierPL::infinite();
    FrontierPL upper = FrontierPL::infinite();
    bool has_value = false;
    double value_lo = 0.0, value_hi = 0.0;
    bool half_plus_hurst = false;
    bool fraction = false;
};

Target target_from_json(const nlohmann::json& j);

struct ReportRow {
    std::string probe;
    double s_prime = 0.0;
    double estimate = 0.0;
    double expected_lower = 0.0;
    double expected_upper = 0.0;
    double abs_error = 0.0;
    bool pass = false;
};

struct ExperimentReport {
    std::string name;
    std::string anchor;
    std::string measure;
    double tolerance = 0.0;
    std::vector<ReportRow> rows;
    nlohmann::json per_seed = nlohmann::json::array();
    bool pass = false;
    double runtime_s = 0.0; ///< kept out of the report files so they stay reproducible
};

struct ZeroProbes {
    std::vector<double> zeros;
    std::vector<double> nonzeros;
};

/// Zero set of the process's zero-sensitive coordinate (BESQ value, Heston volatility, Ito integrand,
/// diffusion coefficient argument), thinned to spacing >= 2^(1-k_min), plus a matched set of probes
/// where the coordinate is far from zero.
ZeroProbes detect_zero_set(const SynthResult& r, const ProcessSpec& spec, int k_min);

/// Zero threshold of the coordinate: 3 delta dt for BESQ, 3 kappa theta dt for Heston, 0 otherwise.
double zero_threshold(const ProcessSpec& spec);

/// The analysed path for one seed; `full` receives the whole synthesis when a process is used.
SamplePath produce_path(const ExperimentConfig& c, std::uint64_t seed, std::optional<SynthResult>* full = nullptr);

void validate(const ExperimentConfig& c);
ExperimentReport run(const ExperimentConfig& c);

ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& file);
/// Config files under a path (a single file or every *.json in a directory), sorted by name.
std::vector<std::string> config_files(const std::string& path);

std::string to_string(Measure m);
Measure measure_from_string(const std::string& s);

nlohmann::json environment_stamp();
nlohmann::json to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const nlohmann::json& j);
void write_report_csv(std::ostream& os, const ExperimentReport& r);
/// Estimated medians over the analytic polyline, one SVG per probe group.
std::string frontier_svg(const ExperimentReport& r, const std::string& probe, const Target& t);

/// Expectation governing a probe group of a config.
Target target_for_group(const ExperimentConfig& c, const std::string& probe);

/// Writes <name>.json, <name>.csv and SVG plots into out_dir; returns the plot file names.
std::vector<std::string> write_report(const ExperimentReport& r, const ExperimentConfig& c, const std::string& out_dir);

struct SuiteResult {
    std::vector<ExperimentReport> reports;
    bool all_pass = false;
};

/// Runs every config under `config_path`, writes reports to out_dir (if non-empty) together with
/// summary.csv and a separate runtime.json.
SuiteResult verify(const std::string& config_path, const std::string& out_dir);

/// Summary table of the *.json reports in a directory.
std::string summarize_reports(const std::string& dir);

} // namespace microloc
