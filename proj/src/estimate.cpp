#include "microloc/estimate.hpp"

#include "microloc/frontier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace microloc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Sparse table for O(1) range min and max.
class RangeMinMax {
public:
    explicit RangeMinMax(std::span<const double> v) {
        const std::size_t n = v.size();
        const int levels = n == 0 ? 0 : std::bit_width(n);
        mn_.resize(static_cast<std::size_t>(levels));
        mx_.resize(static_cast<std::size_t>(levels));
        if (levels == 0) return;
        mn_[0].assign(v.begin(), v.end());
        mx_[0].assign(v.begin(), v.end());
        for (int l = 1; l < levels; ++l) {
            const std::size_t half = std::size_t{1} << (l - 1);
            const std::size_t len = n - (std::size_t{1} << l) + 1;
            auto& mn = mn_[static_cast<std::size_t>(l)];
            auto& mx = mx_[static_cast<std::size_t>(l)];
            const auto& pmn = mn_[static_cast<std::size_t>(l - 1)];
            const auto& pmx = mx_[static_cast<std::size_t>(l - 1)];
            mn.resize(len);
            mx.resize(len);
            for (std::size_t i = 0; i < len; ++i) {
                mn[i] = std::min(pmn[i], pmn[i + half]);
                mx[i] = std::max(pmx[i], pmx[i + half]);
            }
        }
    }

    // Inclusive range [l, r], l <= r.
    double min(std::size_t l, std::size_t r) const {
        const auto lvl = static_cast<std::size_t>(std::bit_width(r - l + 1) - 1);
        return std::min(mn_[lvl][l], mn_[lvl][r + 1 - (std::size_t{1} << lvl)]);
    }
    double max(std::size_t l, std::size_t r) const {
        const auto lvl = static_cast<std::size_t>(std::bit_width(r - l + 1) - 1);
        return std::max(mx_[lvl][l], mx_[lvl][r + 1 - (std::size_t{1} << lvl)]);
    }

private:
    std::vector<std::vector<double>> mn_, mx_;
};

/// Grid points on one side of t0, ordered by distance b = |t - t0|.
struct Side {
    std::vector<double> b;
    std::vector<double> f;
};

Side make_side(const SamplePath& path, double t0, double reach, bool right) {
    Side s;
    const auto n = static_cast<long>(path.size());
    if (right) {
        for (long i = 0; i < n; ++i) {
            const double a = path.time(static_cast<std::size_t>(i)) - t0;
            if (a < 0.0) continue;
            if (a > reach) break;
            s.b.push_back(a);
            s.f.push_back(path[static_cast<std::size_t>(i)]);
        }
    } else {
        for (long i = n - 1; i >= 0; --i) {
            const double a = path.time(static_cast<std::size_t>(i)) - t0;
            if (a > 0.0) continue;
            if (-a > reach) break;
            s.b.push_back(-a);
            s.f.push_back(path[static_cast<std::size_t>(i)]);
        }
    }
    return s;
}

// Indices v with lo < b[v] <= hi, as [first, last) .
std::pair<std::size_t, std::size_t> open_closed(const std::vector<double>& b, double lo, double hi) {
    auto first = std::upper_bound(b.begin(), b.end(), lo);
    auto last = std::upper_bound(first, b.end(), hi);
    return {static_cast<std::size_t>(first - b.begin()), static_cast<std::size_t>(last - b.begin())};
}

void check_request(const SamplePath& path, double t0, int j_min, int j_max, int k_min, int k_max) {
    if (t0 < path.t_start() || t0 > path.t_end()) throw std::invalid_argument("osc_matrix: t0 outside the grid");
    if (j_min > j_max || k_min > k_max) throw std::invalid_argument("osc_matrix: empty scale range");
    if (std::ldexp(1.0, -j_max) < 2.0 * path.dt() * (1.0 - 1e-12))
        throw std::invalid_argument("osc_matrix: finest scale below two grid steps");
}

OscMatrix blank(double t0, int j_min, int j_max, int k_min, int k_max) {
    OscMatrix m;
    m.t0 = t0;
    m.j_min = j_min;
    m.j_max = j_max;
    m.k_min = k_min;
    m.k_max = k_max;
    m.values.assign(static_cast<std::size_t>(j_max - j_min + 1) * static_cast<std::size_t>(k_max - k_min + 1), kNaN);
    return m;
}

void bump(double& cell, double v) {
    if (std::isnan(cell) || v > cell) cell = v;
}

// -ceil(log2 x) for x > 0, exact: x in (2^-q-1, 2^-q] gives q.
int dyadic_level(double x) {
    int e = 0;
    const double m = std::frexp(x, &e);
    return m == 0.5 ? 1 - e : -e;
}

// log2 O(j,k), less the Gaussian modulus growth when requested. -inf for a zero cell.
double cell_log2(const OscMatrix& m, const FitWindow& w, int j, int k) {
    const double v = m.at(j, k);
    if (!(v > 0.0)) return -kInf;
    const double l = std::log2(v);
    return w.gaussian_modulus ? l - 0.5 * std::log2(1.0 + std::max(0, j - k)) : l;
}

} // namespace

bool OscMatrix::empty(int j, int k) const {
    if (j < j_min || j > j_max || k < k_min || k > k_max) return true;
    return std::isnan(at(j, k));
}

FitWindow resolve(const FitWindow& w, const SamplePath& path) {
    FitWindow r = w;
    if (r.j_max < 0) r.j_max = static_cast<int>(std::floor(std::log2(1.0 / path.dt()) + 1e-9)) - 3;
    if (r.k_max < 0) r.k_max = r.j_max;
    if (r.j_min > r.j_max) throw std::invalid_argument("fit window: grid too coarse for j_min");
    return r;
}

OscMatrix osc_matrix(const SamplePath& path, double t0, int j_min, int j_max, int k_min, int k_max) {
    check_request(path, t0, j_min, j_max, k_min, k_max);
    OscMatrix m = blank(t0, j_min, j_max, k_min, k_max);
    const double reach = std::ldexp(1.0, -k_min);
    const Side right = make_side(path, t0, reach, true);
    const Side left = make_side(path, t0, reach, false);
    const RangeMinMax right_q(right.f);
    const RangeMinMax left_q(left.f);

    auto scan_side = [&](const Side& s, const RangeMinMax& q, double H, double K) -> double {
        double best = kNaN;
        for (std::size_t u = 0; u < s.b.size() && 2.0 * s.b[u] < K; ++u) {
            const double bu = s.b[u];
            const double lo = std::max(bu + 0.5 * H, 0.5 * K - bu);
            const double hi = std::min(bu + H, K - bu);
            if (!(hi > lo)) continue;
            auto [first, last] = open_closed(s.b, lo, hi);
            if (first >= last) continue;
            const double fu = s.f[u];
            bump(best, std::max(fu - q.min(first, last - 1), q.max(first, last - 1) - fu));
        }
        return best;
    };

    for (int k = k_min; k <= k_max; ++k) {
        const double K = std::ldexp(1.0, -k);
        for (int j = std::max(j_min, k); j <= j_max; ++j) {
            const double H = std::ldexp(1.0, -j);
            double cell = kNaN;
            const double r = scan_side(right, right_q, H, K);
            if (!std::isnan(r)) bump(cell, r);
            const double l = scan_side(left, left_q, H, K);
            if (!std::isnan(l)) bump(cell, l);
            if (j == k) {
                // Pairs straddling t0 have distance sum equal to their separation.
                for (std::size_t u = 0; u < left.b.size() && left.b[u] < H; ++u) {
                    const double bu = left.b[u];
                    if (bu <= 0.0) continue;
                    auto [first, last] = open_closed(right.b, std::max(0.5 * H - bu, 0.0), H - bu);
                    if (first >= last) continue;
                    const double fu = left.f[u];
                    bump(cell, std::max(fu - right_q.min(first, last - 1), right_q.max(first, last - 1) - fu));
                }
            }
            m.at(j, k) = cell;
        }
    }
    return m;
}

OscMatrix osc_matrix_brute(const SamplePath& path, double t0, int j_min, int j_max, int k_min, int k_max) {
    if (path.size() > (std::size_t{1} << 11) + 1) throw std::invalid_argument("osc_matrix_brute: path too large");
    check_request(path, t0, j_min, j_max, k_min, k_max);
    OscMatrix m = blank(t0, j_min, j_max, k_min, k_max);
    const std::size_t n = path.size();
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = path.time(i) - t0;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            const double h = std::abs(a[v] - a[u]);
            const double d = std::abs(a[u]) + std::abs(a[v]);
            if (h <= 0.0) continue;
            const int j = dyadic_level(h), k = dyadic_level(d);
            if (j < j_min || j > j_max || k < k_min || k > k_max) continue;
            bump(m.at(j, k), std::abs(path[u] - path[v]));
        }
    return m;
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("ols_slope: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_slope: degenerate abscissae");
    return sxy / sxx;
}

double estimate_local(const OscMatrix& m, const FitWindow& w) {
    std::vector<double> xs, ys;
    bool any = false;
    for (int j = std::max(w.j_min, m.j_min); j <= std::min(w.j_max, m.j_max); ++j) {
        double best = -kInf;
        bool seen = false;
        for (int k = std::max(w.k_min, m.k_min); k <= std::min({w.k_max, m.k_max, j - w.diag_gap}); ++k) {
            if (m.empty(j, k)) continue;
            seen = true;
            best = std::max(best, cell_log2(m, w, j, k));
        }
        if (!seen) continue;
        any = true;
        if (best > -kInf) {
            xs.push_back(-static_cast<double>(j));
            ys.push_back(best);
        }
    }
    if (!any) throw std::invalid_argument("estimate_local: all cells empty");
    if (xs.empty()) return kInf;
    if (xs.size() < 2) throw std::invalid_argument("estimate_local: fewer than two usable scales");
    return ols_slope(xs, ys);
}

double estimate_local(const SamplePath& path, double t0, const FitWindow& win) {
    const FitWindow w = resolve(win, path);
    return estimate_local(osc_matrix(path, t0, w.j_min, w.j_max, w.k_min, w.k_max), w);
}

double estimate_pointwise(const SamplePath& path, double t0, const FitWindow& win, bool detrend) {
    const FitWindow w = resolve(win, path);
    std::vector<double> ks, ys;
    if (!detrend) {
        const int j_lo = std::min(w.j_min, w.k_min);
        const OscMatrix m = osc_matrix(path, t0, j_lo, w.j_max, w.k_min, w.k_max);
        bool any = false;
        for (int k = w.k_min; k <= w.k_max; ++k) {
            double best = -kInf;
            bool seen = false;
            for (int j = std::max(k, j_lo); j <= w.j_max; ++j) {
                if (m.empty(j, k)) continue;
                seen = true;
                best = std::max(best, cell_log2(m, w, j, k));
            }
            if (!seen) continue;
            any = true;
            if (best > -kInf) {
                ks.push_back(static_cast<double>(k));
                ys.push_back(best);
            }
        }
        if (!any) throw std::invalid_argument("estimate_pointwise: all cells empty");
    } else {
        const std::size_t i0 = path.index_of(t0);
        const double f0 = path[i0];
        for (int k = w.k_min; k <= w.k_max; ++k) {
            const double rho = std::ldexp(1.0, -k);
            const std::size_t lo = path.index_of(std::max(path.t_start(), path.time(i0) - rho));
            const std::size_t hi = path.index_of(std::min(path.t_end(), path.time(i0) + rho));
            double sxy = 0.0, sxx = 0.0;
            for (std::size_t i = lo; i <= hi; ++i) {
                const double a = path.time(i) - path.time(i0);
                sxy += a * (path[i] - f0);
                sxx += a * a;
            }
            const double c = sxx > 0.0 ? sxy / sxx : 0.0;
            double rmin = kInf, rmax = -kInf;
            for (std::size_t i = lo; i <= hi; ++i) {
                const double r = path[i] - f0 - c * (path.time(i) - path.time(i0));
                rmin = std::min(rmin, r);
                rmax = std::max(rmax, r);
            }
            if (rmax - rmin > 0.0) {
                ks.push_back(static_cast<double>(k));
                ys.push_back(std::log2(rmax - rmin));
            }
        }
    }
    if (ks.empty()) return kInf;
    if (ks.size() < 2) throw std::invalid_argument("estimate_pointwise: fewer than two usable scales");
    return -ols_slope(ks, ys);
}

FrontierEstimate frontier_from_matrix(const OscMatrix& m, const FitWindow& w, std::span<const double> s_grid) {
    struct Cell {
        int j, k;
        double a;
    };
    std::vector<Cell> cells;
    std::size_t nonempty = 0;
    for (int j = std::max(w.j_min, m.j_min); j <= std::min(w.j_max, m.j_max); ++j)
        for (int k = std::max(w.k_min, m.k_min); k <= std::min({w.k_max, m.k_max, j - w.diag_gap}); ++k) {
            if (m.empty(j, k)) continue;
            ++nonempty;
            if (m.at(j, k) > 0.0) cells.push_back({j, k, -cell_log2(m, w, j, k)});
        }
    if (nonempty < 6) throw std::invalid_argument("estimate_frontier: fewer than 6 non-empty cells in window");

    FrontierEstimate e;
    e.s_grid.assign(s_grid.begin(), s_grid.end());
    const std::size_t g = s_grid.size();
    e.j_arg.assign(g, -1);
    e.k_arg.assign(g, -1);
    if (cells.empty()) {
        e.local_hat = kInf;
        e.sigma_raw.assign(g, kInf);
        e.sigma_projected.assign(g, kInf);
        e.residual.assign(g, 0.0);
        return e;
    }
    e.local_hat = estimate_local(m, w);
    if (w.method == FrontierMethod::envelope_regression) {
        e.sigma_raw.assign(g, kInf);
        for (std::size_t i = 0; i < g; ++i) {
            const double s = s_grid[i];
            std::vector<double> xs, ys;
            int best_k = -1, last_j = -1;
            for (int j = std::max(w.j_min, m.j_min); j <= std::min(w.j_max, m.j_max); ++j) {
                double env = -kInf;
                int arg = -1;
                for (const auto& c : cells)
                    if (c.j == j && -c.a - s * c.k > env) {
                        env = -c.a - s * c.k;
                        arg = c.k;
                    }
                if (arg < 0) continue;
                xs.push_back(static_cast<double>(j));
                ys.push_back(env);
                best_k = arg;
                last_j = j;
            }
            if (xs.size() < 2) throw std::invalid_argument("estimate_frontier: fewer than two usable scales");
            e.sigma_raw[i] = -ols_slope(xs, ys);
            e.j_arg[i] = last_j;
            e.k_arg[i] = best_k;
        }
        e.sigma_projected = isotonic_concave_projection(s_grid, e.sigma_raw);
        e.residual.resize(g);
        for (std::size_t i = 0; i < g; ++i) e.residual[i] = e.sigma_raw[i] - e.sigma_projected[i];
        return e;
    }
    double c_hat = -kInf;
    for (const auto& c : cells) c_hat = std::max(c_hat, e.local_hat * c.j - c.a);
    e.c_hat = c_hat;

    e.sigma_raw.assign(g, kInf);
    for (std::size_t i = 0; i < g; ++i) {
        const double s = s_grid[i];
        for (const auto& c : cells) {
            const double v = (c.a + s * c.k + c_hat) / c.j;
            if (v < e.sigma_raw[i]) {
                e.sigma_raw[i] = v;
                e.j_arg[i] = c.j;
                e.k_arg[i] = c.k;
            }
        }
    }
    e.sigma_projected = isotonic_concave_projection(s_grid, e.sigma_raw);
    e.residual.resize(g);
    for (std::size_t i = 0; i < g; ++i) e.residual[i] = e.sigma_raw[i] - e.sigma_projected[i];
    return e;
}

FrontierEstimate estimate_frontier(const SamplePath& path, double t0, std::span<const double> s_grid,
                                   const FitWindow& win) {
    const FitWindow w = resolve(win, path);
    return frontier_from_matrix(osc_matrix(path, t0, w.j_min, w.j_max, w.k_min, w.k_max), w, s_grid);
}

FrontierEstimate brute_frontier(const SamplePath& path, double t0, std::span<const double> s_grid,
                                const FitWindow& win) {
    const FitWindow w = resolve(win, path);
    return frontier_from_matrix(osc_matrix_brute(path, t0, w.j_min, w.j_max, w.k_min, w.k_max), w, s_grid);
}

std::vector<double> isotonic_concave_projection(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (y.size() != n) throw std::invalid_argument("projection: size mismatch");
    std::vector<double> out(y.begin(), y.end());
    if (n == 0) return out;
    for (double v : y)
        if (!std::isfinite(v)) return out;
    if (n == 1) {
        out[0] = std::min(out[0], 1.0);
        return out;
    }

    // Pool adjacent violators so slopes become non-increasing.
    struct Block {
        double slope, weight;
        std::size_t count;
    };
    std::vector<Block> blocks;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double w = x[i + 1] - x[i];
        blocks.push_back({(y[i + 1] - y[i]) / w, w, 1});
        while (blocks.size() >= 2 && blocks[blocks.size() - 2].slope < blocks.back().slope) {
            Block b = blocks.back();
            blocks.pop_back();
            Block& a = blocks.back();
            a.slope = (a.slope * a.weight + b.slope * b.weight) / (a.weight + b.weight);
            a.weight += b.weight;
            a.count += b.count;
        }
    }
    std::vector<double> slopes;
    for (const auto& b : blocks)
        for (std::size_t c = 0; c < b.count; ++c) slopes.push_back(std::clamp(b.slope, 0.0, 1.0));

    bool unchanged = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
        unchanged = unchanged && slopes[i] == (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    if (!unchanged) {
        std::vector<double> z(n, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i) z[i + 1] = z[i] + slopes[i] * (x[i + 1] - x[i]);
        double shift = 0.0;
        for (std::size_t i = 0; i < n; ++i) shift += y[i] - z[i];
        shift /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = z[i] + shift;
    }
    for (auto& v : out) v = std::min(v, 1.0);
    return out;
}

LowerCheckResult oscillation_lower_check(const SamplePath& path, const std::function<double(double)>& hurst,
                                         double eps, int r_min, int r_max) {
    if (r_max <= r_min) throw std::invalid_argument("oscillation_lower_check: need r_max > r_min");
    const RangeMinMax q(path.values());
    const std::size_t n = path.size();
    std::vector<double> h(n);
    for (std::size_t i = 0; i < n; ++i) h[i] = hurst(path.time(i));

    std::vector<double> margin;
    for (int r = r_min; r <= r_max; ++r) {
        const auto radius = static_cast<std::size_t>(std::floor(std::ldexp(1.0, -r) / path.dt() + 1e-9));
        if (radius < 1) throw std::invalid_argument("oscillation_lower_check: scale below grid step");
        double worst = kInf;
        for (std::size_t i = 0; i < n; ++i) {
            // Windowed oscillation: the ball clipped to the observed interval.
            const std::size_t lo = i >= radius ? i - radius : 0;
            const std::size_t hi = std::min(n - 1, i + radius);
            const double osc = q.max(lo, hi) - q.min(lo, hi);
            const double v = osc > 0.0 ? std::log2(osc) + r * (h[i] + eps) : -kInf;
            worst = std::min(worst, v);
        }
        margin.push_back(worst);
    }
    const std::size_t half = margin.size() / 2;
    LowerCheckResult res;
    res.log2_c = *std::min_element(margin.begin(), margin.begin() + static_cast<long>(half));
    const double fine = *std::min_element(margin.begin() + static_cast<long>(half), margin.end());
    res.worst_margin = fine - res.log2_c;
    res.pass = res.worst_margin >= 0.0;
    return res;
}

void write_csv(std::ostream& os, const FrontierEstimate& e) {
    os << "s_prime,sigma_raw,sigma_projected,j_arg,k_arg,residual\n" << std::setprecision(17);
    for (std::size_t i = 0; i < e.s_grid.size(); ++i)
        os << e.s_grid[i] << ',' << e.sigma_raw[i] << ',' << e.sigma_projected[i] << ',' << e.j_arg[i] << ','
           << e.k_arg[i] << ',' << e.residual[i] << '\n';
}

void write_csv(const std::string& file, const FrontierEstimate& e) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open " + file + " for writing");
    write_csv(os, e);
}

} // namespace microloc
