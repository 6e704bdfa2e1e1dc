#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "microloc/sample_path.hpp"

namespace microloc {

enum class DetFunKind { chirp, power, cantor_f_alpha, identity, polynomial };

/// Deterministic test function.
///  chirp:      |t-t0|^alpha sin(|t-t0|^-beta), params alpha, beta, t0
///  power:      |t-t0|^alpha, params alpha, t0
///  cantor:     f_alpha on [0,1] (identity elsewhere), params alpha, and depth
///  identity:   t
///  polynomial: sum_k c<k> (t-t0)^k, params t0, c0, c1, ...
struct DetFunSpec {
    DetFunKind kind = DetFunKind::identity;
    std::map<std::string, double> params;
    int depth = 30;
};

struct Grid {
    double t_start = 0.0;
    double t_end = 1.0;
    std::size_t n = 1025; ///< number of samples
};

void validate(const DetFunSpec& spec);

/// Exact value of the function at t.
double evaluate(const DetFunSpec& spec, double t);

SamplePath render(const DetFunSpec& spec, const Grid& grid);

/// Riemann-Liouville integral of the given order from grid index base_index (product-rectangle rule).
SamplePath frac_integral(const SamplePath& path, double order, std::size_t base_index = 0);

/// t -> |t-t0|^gamma (f(t) - f(t0)); f(t0) is taken at the grid point nearest t0.
SamplePath envelope_multiply(const SamplePath& path, double t0, double gamma);

/// Trapezoidal cumulative integral starting at 0.
SamplePath primitive(const SamplePath& path);

/// Cumulative squared increments of the path subsampled with the given stride.
SamplePath realized_qv(const SamplePath& path, std::size_t block = 1);

std::string to_string(DetFunKind k);
DetFunKind detfun_kind_from_string(const std::string& s);
nlohmann::json to_json(const DetFunSpec& spec);
DetFunSpec detfun_from_json(const nlohmann::json& j);

} // namespace microloc
