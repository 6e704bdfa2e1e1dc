#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "microloc/sample_path.hpp"

namespace microloc {

/// Sup of |f(u)-f(v)| over grid pairs with |u-v| in (2^-j-1, 2^-j] and
/// |u-t0|+|v-t0| in (2^-k-1, 2^-k]. Empty cells hold NaN.
struct OscMatrix {
    double t0 = 0.0;
    int j_min = 0, j_max = -1;
    int k_min = 0, k_max = -1;
    std::vector<double> values;

    double at(int j, int k) const { return values[index(j, k)]; }
    double& at(int j, int k) { return values[index(j, k)]; }
    bool empty(int j, int k) const;
    std::size_t index(int j, int k) const {
        return static_cast<std::size_t>(j - j_min) * static_cast<std::size_t>(k_max - k_min + 1) +
               static_cast<std::size_t>(k - k_min);
    }
};

enum class FrontierMethod {
    min_cells,          ///< min over cells of (a + s' k + c)/j with one calibrated offset c
    envelope_regression ///< per s', OLS slope over j of -max_k (log2 O(j,k) - s' k)
};

/// Scale window of the estimators. Negative j_max/k_max mean "derive from the grid":
/// j_max = floor(log2(1/dt)) - 3 and k_max = j_max. Cells with k > j - diag_gap are skipped.
struct FitWindow {
    FrontierMethod method = FrontierMethod::envelope_regression;
    int j_min = 4;
    int j_max = -1;
    int k_min = 0;
    int k_max = -1;
    int diag_gap = 0;
    /// Divide O(j,k) by sqrt(1 + j - k): the sup of ~2^(j-k) Gaussian increments at scale 2^-j
    /// grows like that (Levy modulus), which otherwise biases exponents of random paths low.
    bool gaussian_modulus = false;
};

/// Window with the automatic bounds filled in for this path.
FitWindow resolve(const FitWindow& w, const SamplePath& path);

OscMatrix osc_matrix(const SamplePath& path, double t0, int j_min, int j_max, int k_min, int k_max);
/// Exhaustive pair enumeration; the oracle for osc_matrix. Requires at most 2^11 + 1 samples.
OscMatrix osc_matrix_brute(const SamplePath& path, double t0, int j_min, int j_max, int k_min, int k_max);

struct FrontierEstimate {
    std::vector<double> s_grid;
    std::vector<double> sigma_raw;
    std::vector<double> sigma_projected;
    std::vector<int> j_arg;
    std::vector<int> k_arg;
    std::vector<double> residual;
    double c_hat = 0.0;
    double local_hat = 0.0;
};

/// Local exponent: OLS slope of log2 max_k O(j,k) against -j.
double estimate_local(const OscMatrix& m, const FitWindow& w);
double estimate_local(const SamplePath& path, double t0, const FitWindow& w = {});

/// Pointwise exponent: negated OLS slope of log2 max_j O(j,k) against k. With `detrend`
/// the best affine fit through f(t0) is removed per scale before taking oscillations.
double estimate_pointwise(const SamplePath& path, double t0, const FitWindow& w = {}, bool detrend = false);

FrontierEstimate frontier_from_matrix(const OscMatrix& m, const FitWindow& w, std::span<const double> s_grid);
FrontierEstimate estimate_frontier(const SamplePath& path, double t0, std::span<const double> s_grid,
                                   const FitWindow& w = {});
FrontierEstimate brute_frontier(const SamplePath& path, double t0, std::span<const double> s_grid,
                                const FitWindow& w = {});

/// Least-squares concave non-decreasing fit with slopes in [0,1] and values capped at 1.
std::vector<double> isotonic_concave_projection(std::span<const double> x, std::span<const double> y);

struct LowerCheckResult {
    bool pass = false;
    double worst_margin = 0.0; ///< min over fine scales of m(r) - log2 C, in log2 units
    double log2_c = 0.0;
};

/// Checks osc(B(t, 2^-r)) >= C 2^{-r (H(t)+eps)} over all grid t for r in [r_min, r_max],
/// with C fitted on the coarse half of the range and tested on the fine half.
LowerCheckResult oscillation_lower_check(const SamplePath& path, const std::function<double(double)>& hurst,
                                         double eps, int r_min, int r_max);

double ols_slope(std::span<const double> x, std::span<const double> y);

void write_csv(std::ostream& os, const FrontierEstimate& e);
void write_csv(const std::string& file, const FrontierEstimate& e);

} // namespace microloc
