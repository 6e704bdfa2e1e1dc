#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "microloc/detfun.hpp"
#include "microloc/sample_path.hpp"

namespace microloc {

enum class ProcessKind { bm, fbm, mbm, time_changed_bm, ito_integral, ou, besq, heston, generic_sde };

/// H(t) = a + b t clamped to [h_min, h_max].
struct HurstSpec {
    double a = 0.5;
    double b = 0.0;
    double h_min = 0.01;
    double h_max = 0.99;
    double operator()(double t) const;
};

/// Declarative path description. `n` is the number of steps, so the path has n+1 samples.
///
/// Parameters by kind (defaults in brackets):
///   bm: sigma [1], x0 [0]
///   fbm: H
///   mbm: `hurst`; t_hist [10 t_end]; optional `time_change` evaluates X at g(t)
///   time_changed_bm: `time_change` (non-decreasing g >= 0)
///   ito_integral: `driver` (bm or mbm integrand driven by the same noise)
///   ou: theta, mu, sigma, x0
///   besq: delta, x
///   heston: mu, kappa, theta, xi, rho, s0 [1], v0
///   generic_sde: x0, a_scale, a_root, a_exp, b_const, b_scale, b_root, b_exp
///     dX = a(X) dB + b(X) dt, a(x) = a_scale |x - a_root|^a_exp, b(x) = b_const + b_scale |x - b_root|^b_exp
struct ProcessSpec {
    ProcessKind kind = ProcessKind::bm;
    std::map<std::string, double> params;
    HurstSpec hurst;
    std::shared_ptr<ProcessSpec> driver;
    std::optional<DetFunSpec> time_change;
    std::uint64_t seed = 0;
    double t_end = 1.0;
    std::size_t n = 1024;
};

/// Primary path plus named auxiliary paths (integrand, volatility, time change, ...).
struct SynthResult {
    SamplePath path;
    std::map<std::string, SamplePath> components;
};

void validate(const ProcessSpec& spec);

SamplePath synth(const ProcessSpec& spec);
SynthResult synth_all(const ProcessSpec& spec);

/// Left-point sum of H^2 against the realized quadratic variation of M.
SamplePath qv_of_integral(const SamplePath& h_path, const SamplePath& m_path);

/// mBm at sorted times tau (all >= 0), driven by white noise on the cells between consecutive
/// distinct times and on geometric history cells covering [-t_hist, 0].
std::vector<double> mbm_at_times(std::span<const double> tau, const HurstSpec& hurst, double t_hist,
                                 std::uint64_t seed);

/// Variance of X(t2) - X(t1) implied by the discretized mBm kernel on a uniform grid.
double mbm_increment_variance(double t_end, std::size_t n, const HurstSpec& hurst, double t_hist,
                              std::size_t i1, std::size_t i2);

std::string to_string(ProcessKind k);
ProcessKind process_kind_from_string(const std::string& s);
nlohmann::json to_json(const ProcessSpec& spec);
ProcessSpec process_from_json(const nlohmann::json& j);

} // namespace microloc
