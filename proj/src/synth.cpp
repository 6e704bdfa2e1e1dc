#include "microloc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "microloc/rng.hpp"

namespace microloc {

namespace {

constexpr double kHistoryGrowth = 1.1;

double param(const ProcessSpec& s, const char* name) {
    auto it = s.params.find(name);
    if (it == s.params.end())
        throw std::invalid_argument(std::string("synth: missing parameter '") + name + "' for " + to_string(s.kind));
    return it->second;
}

double param_or(const ProcessSpec& s, const char* name, double fallback) {
    auto it = s.params.find(name);
    return it == s.params.end() ? fallback : it->second;
}

double dt_of(const ProcessSpec& s) { return s.t_end / static_cast<double>(s.n); }

std::vector<double> increments(const ProcessSpec& s, std::uint64_t stream) {
    std::vector<double> dw(s.n);
    NormalStream(s.seed, stream).fill(dw);
    const double sd = std::sqrt(dt_of(s));
    for (auto& x : dw) x *= sd;
    return dw;
}

SamplePath make_path(const ProcessSpec& s, std::vector<double> v, std::string label) {
    return SamplePath(0.0, s.t_end, std::move(v), std::move(label));
}

// Boundaries 0 = b_0 > b_1 > ... > b_R = -t_hist with geometrically growing widths.
std::vector<double> history_bounds(double first_width, double t_hist) {
    std::vector<double> b{0.0};
    double width = first_width;
    while (b.back() > -t_hist) {
        b.push_back(std::max(b.back() - width, -t_hist));
        width *= kHistoryGrowth;
    }
    return b;
}

// Mean of (t-u)^(H-1/2) - (-u)^(H-1/2) over each history cell, for exponent P = H + 1/2.
void history_kernel(double t, double p_exp, const std::vector<double>& bounds, std::vector<double>& out) {
    const std::size_t cells = bounds.size() - 1;
    out.resize(cells);
    double a_prev = std::pow(t - bounds[0], p_exp);
    double b_prev = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
        const double a = std::pow(t - bounds[c + 1], p_exp);
        const double b = std::pow(-bounds[c + 1], p_exp);
        const double w = bounds[c] - bounds[c + 1];
        out[c] = ((a - a_prev) - (b - b_prev)) / (p_exp * w);
        a_prev = a;
        b_prev = b;
    }
}

std::vector<double> history_noise(const std::vector<double>& bounds, std::uint64_t seed) {
    std::vector<double> z(bounds.size() - 1);
    NormalStream(seed, streams::history).fill(z);
    for (std::size_t c = 0; c < z.size(); ++c) z[c] *= std::sqrt(bounds[c] - bounds[c + 1]);
    return z;
}

// mBm on the uniform grid t_i = i dt, i = 0..n, driven by dw[m] over [t_m, t_m+1].
std::vector<double> mbm_uniform(double t_end, std::size_t n, const HurstSpec& hs, double t_hist,
                                const std::vector<double>& dw, std::uint64_t seed) {
    const double dt = t_end / static_cast<double>(n);
    const auto bounds = history_bounds(dt, t_hist);
    const auto zh = history_noise(bounds, seed);
    std::vector<double> log_l(n + 1, 0.0), powl(n + 1, 0.0), step(n + 1, 1.0);
    for (std::size_t l = 1; l <= n; ++l) log_l[l] = std::log(static_cast<double>(l));

    // Row exponents move by a fixed step while H is affine and unclamped; the power table is then
    // advanced by one multiplication per entry and refreshed exactly every so often.
    const double p_step = hs.b * dt;
    for (std::size_t l = 1; l <= n; ++l) step[l] = std::exp(p_step * log_l[l]);
    constexpr std::size_t kRefresh = 256;

    std::vector<double> x(n + 1, 0.0), hk;
    double p_prev = 0.0;
    std::size_t filled = 0; // powl valid for l <= filled at exponent p_prev
    for (std::size_t i = 1; i <= n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double h = hs(t);
        const double p = h + 0.5;
        const double dp = p - p_prev;
        if (filled == 0 || i % kRefresh == 0 || (dp != 0.0 && std::abs(dp - p_step) > 1e-14)) {
            for (std::size_t l = 1; l < i; ++l) powl[l] = std::exp(p * log_l[l]);
        } else if (dp != 0.0) {
            for (std::size_t l = 1; l < i; ++l) powl[l] *= step[l];
        }
        powl[i] = std::exp(p * log_l[i]);
        filled = i;
        p_prev = p;

        double acc = 0.0;
        const double* w = dw.data();
        for (std::size_t l = 2; l <= i; ++l) acc += (powl[l] - powl[l - 1]) * w[i - l];
        const double scale = std::pow(dt, h - 0.5);
        double v = acc * scale / p + scale / std::sqrt(2.0 * h) * dw[i - 1];

        history_kernel(t, p, bounds, hk);
        double hist = 0.0;
        for (std::size_t c = 0; c < hk.size(); ++c) hist += hk[c] * zh[c];
        x[i] = (v + hist) / std::tgamma(p);
    }
    return x;
}

std::vector<double> bm_from(const std::vector<double>& dw, double x0 = 0.0) {
    std::vector<double> x(dw.size() + 1, x0);
    for (std::size_t i = 0; i < dw.size(); ++i) x[i + 1] = x[i] + dw[i];
    return x;
}

double fgn_cov(std::size_t k, double h) {
    const double kk = static_cast<double>(k);
    return 0.5 * (std::pow(kk + 1.0, 2 * h) - 2.0 * std::pow(kk, 2 * h) + std::pow(std::abs(kk - 1.0), 2 * h));
}

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

// Exact Gaussian sample with Toeplitz covariance via Durbin-Levinson.
std::vector<double> levinson_sample(const std::vector<double>& gamma, const NormalStream& z) {
    const std::size_t n = gamma.size();
    std::vector<double> x(n), phi(n, 0.0), prev(n, 0.0);
    double v = gamma[0];
    x[0] = std::sqrt(v) * z(0);
    for (std::size_t t = 1; t < n; ++t) {
        double num = gamma[t];
        for (std::size_t j = 1; j < t; ++j) num -= prev[j] * gamma[t - j];
        const double k = num / v;
        phi[t] = k;
        for (std::size_t j = 1; j < t; ++j) phi[j] = prev[j] - k * prev[t - j];
        v *= (1.0 - k * k);
        double mean = 0.0;
        for (std::size_t j = 1; j <= t; ++j) mean += phi[j] * x[t - j];
        x[t] = mean + std::sqrt(std::max(v, 0.0)) * z(t);
        std::copy(phi.begin(), phi.begin() + static_cast<long>(t) + 1, prev.begin());
    }
    return x;
}

std::vector<double> fgn(std::size_t n, double h, std::uint64_t seed) {
    std::vector<double> gamma(n);
    for (std::size_t k = 0; k < n; ++k) gamma[k] = fgn_cov(k, h);
    std::size_t m = 2;
    while (m < 2 * n) m *= 2;
    const std::size_t half = m / 2;

    double* c = fftw_alloc_real(m);
    fftw_complex* spec = fftw_alloc_complex(half + 1);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t k = j <= half ? j : m - j;
        c[j] = fgn_cov(k, h);
    }
    fftw_plan fwd, bwd;
    {
        std::lock_guard lock(fftw_plan_mutex());
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(m), c, spec, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec, c, FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    std::vector<double> lambda(half + 1);
    double lmax = 0.0, lmin = 0.0;
    for (std::size_t k = 0; k <= half; ++k) {
        lambda[k] = spec[k][0];
        lmax = std::max(lmax, lambda[k]);
        lmin = std::min(lmin, lambda[k]);
    }
    const NormalStream z(seed, streams::main_noise);
    std::vector<double> out;
    if (lmin < -1e-10 * lmax) {
        out = levinson_sample(gamma, z);
    } else {
        for (std::size_t k = 0; k <= half; ++k) {
            const double l = std::max(lambda[k], 0.0);
            if (k == 0 || k == half) {
                spec[k][0] = std::sqrt(l) * z(2 * k);
                spec[k][1] = 0.0;
            } else {
                const double s = std::sqrt(l / 2.0);
                spec[k][0] = s * z(2 * k);
                spec[k][1] = s * z(2 * k + 1);
            }
        }
        fftw_execute(bwd);
        out.assign(c, c + n);
        const double norm = 1.0 / std::sqrt(static_cast<double>(m));
        for (auto& v : out) v *= norm;
    }
    {
        std::lock_guard lock(fftw_plan_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    fftw_free(c);
    fftw_free(spec);
    return out;
}

// B at the sorted times g_i: fine-grid Brownian motion plus sequential bridge sampling.
std::vector<double> bm_at_times(const std::vector<double>& g, std::size_t fine_steps, std::uint64_t seed) {
    const double top = g.back();
    std::vector<double> out(g.size(), 0.0);
    if (top <= 0.0) return out;
    const double h = top / static_cast<double>(fine_steps);
    std::vector<double> fine(fine_steps + 1, 0.0);
    {
        std::vector<double> z(fine_steps);
        NormalStream(seed, streams::fine_noise).fill(z);
        const double sd = std::sqrt(h);
        for (std::size_t i = 0; i < fine_steps; ++i) fine[i + 1] = fine[i] + sd * z[i];
    }
    const NormalStream bridge(seed, streams::bridge);
    std::size_t cell = static_cast<std::size_t>(-1);
    double x_prev = 0.0, b_prev = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g[i];
        auto c = static_cast<std::size_t>(std::floor(x / h));
        if (c >= fine_steps) c = fine_steps - 1;
        const double left = static_cast<double>(c) * h;
        const double right = c + 1 == fine_steps ? top : static_cast<double>(c + 1) * h;
        if (c != cell) {
            cell = c;
            x_prev = left;
            b_prev = fine[c];
        }
        const double b_right = fine[c + 1];
        double v;
        if (x <= x_prev) {
            v = b_prev;
        } else if (x >= right) {
            v = b_right;
        } else {
            const double span = right - x_prev;
            const double mean = b_prev + (x - x_prev) / span * (b_right - b_prev);
            const double var = (x - x_prev) * (right - x) / span;
            v = mean + std::sqrt(var) * bridge(i);
        }
        out[i] = v;
        x_prev = std::max(x_prev, x);
        b_prev = v;
    }
    return out;
}

std::vector<double> render_time_change(const ProcessSpec& s) {
    if (!s.time_change) throw std::invalid_argument("synth: time change g is required");
    auto g = render(*s.time_change, {0.0, s.t_end, s.n + 1}).values();
    if (g.front() < 0.0) throw std::invalid_argument("synth: time change must be >= 0");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (g[i] < g[i - 1]) throw std::invalid_argument("synth: non-monotone time change g");
    return g;
}

SynthResult synth_mbm(const ProcessSpec& s) {
    const double t_hist = param_or(s, "t_hist", 10.0 * s.t_end);
    if (!s.time_change) {
        auto dw = increments(s, streams::main_noise);
        return {make_path(s, mbm_uniform(s.t_end, s.n, s.hurst, t_hist, dw, s.seed), "mbm"), {}};
    }
    auto g = render_time_change(s);
    auto x = mbm_at_times(g, s.hurst, t_hist, s.seed);
    SynthResult r{make_path(s, std::move(x), "mbm(g)"), {}};
    r.components.emplace("time_change", make_path(s, std::move(g), "g"));
    return r;
}

SynthResult synth_ito(const ProcessSpec& s) {
    if (!s.driver) throw std::invalid_argument("synth: ito_integral needs a driver (integrand) spec");
    const ProcessSpec& d = *s.driver;
    auto dw = increments(s, streams::main_noise);
    std::vector<double> integrand;
    if (d.kind == ProcessKind::bm) {
        integrand = bm_from(dw, param_or(d, "x0", 0.0));
    } else if (d.kind == ProcessKind::mbm) {
        if (d.time_change) throw std::invalid_argument("synth: time-changed integrands are not adapted to the driver");
        integrand = mbm_uniform(s.t_end, s.n, d.hurst, param_or(d, "t_hist", 10.0 * s.t_end), dw, s.seed);
    } else {
        throw std::invalid_argument("synth: ito_integral integrand must be bm or mbm");
    }
    std::vector<double> z(s.n + 1, 0.0);
    for (std::size_t i = 0; i < s.n; ++i) z[i + 1] = z[i] + integrand[i] * dw[i];
    SynthResult r{make_path(s, std::move(z), "ito_integral"), {}};
    r.components.emplace("integrand", make_path(s, std::move(integrand), "integrand"));
    r.components.emplace("driver", make_path(s, bm_from(dw), "driver"));
    return r;
}

SynthResult synth_heston(const ProcessSpec& s) {
    const double mu = param(s, "mu"), kappa = param(s, "kappa"), theta = param(s, "theta"), xi = param(s, "xi"),
                 rho = param(s, "rho");
    const double dt = dt_of(s);
    auto dwv = increments(s, streams::main_noise);
    auto dwo = increments(s, streams::second_noise);
    std::vector<double> v(s.n + 1), price(s.n + 1);
    double state = param(s, "v0");
    v[0] = std::max(state, 0.0);
    price[0] = param_or(s, "s0", 1.0);
    const double ortho = std::sqrt(std::max(0.0, 1.0 - rho * rho));
    for (std::size_t i = 0; i < s.n; ++i) {
        const double pos = std::max(state, 0.0);
        const double root = std::sqrt(pos);
        const double dws = rho * dwv[i] + ortho * dwo[i];
        price[i + 1] = price[i] + mu * price[i] * dt + root * price[i] * dws;
        state = state + kappa * (theta - pos) * dt + xi * root * dwv[i];
        v[i + 1] = std::max(state, 0.0);
    }
    SynthResult r{make_path(s, price, "heston_price"), {}};
    r.components.emplace("price", make_path(s, std::move(price), "heston_price"));
    r.components.emplace("vol", make_path(s, std::move(v), "heston_vol"));
    return r;
}

} // namespace

double HurstSpec::operator()(double t) const { return std::clamp(a + b * t, h_min, h_max); }

void validate(const ProcessSpec& s) {
    auto fail = [&](const std::string& msg) { throw std::invalid_argument("synth: " + to_string(s.kind) + ": " + msg); };
    if (!(s.t_end > 0.0) || s.n < 2) fail("grid needs t_end > 0 and n >= 2");
    for (const auto& [k, v] : s.params)
        if (!std::isfinite(v)) fail("parameter '" + k + "' is not finite");
    switch (s.kind) {
    case ProcessKind::bm:
        if (param_or(s, "sigma", 1.0) < 0.0) fail("sigma must be >= 0");
        break;
    case ProcessKind::fbm: {
        const double h = param(s, "H");
        if (!(h > 0.0 && h < 1.0)) fail("H must lie in (0,1)");
        break;
    }
    case ProcessKind::mbm:
        if (!(s.hurst.h_min > 0.0 && s.hurst.h_max < 1.0 && s.hurst.h_min <= s.hurst.h_max))
            fail("H range must lie inside (0,1)");
        if (param_or(s, "t_hist", 10.0 * s.t_end) <= 0.0) fail("t_hist must be positive");
        break;
    case ProcessKind::time_changed_bm:
        if (!s.time_change) fail("time change g is required");
        break;
    case ProcessKind::ito_integral:
        if (!s.driver) fail("driver (integrand) is required");
        validate(*s.driver);
        break;
    case ProcessKind::ou:
        if (!(param(s, "theta") > 0.0)) fail("theta must be > 0");
        if (param(s, "sigma") < 0.0) fail("sigma must be >= 0");
        param(s, "mu");
        param(s, "x0");
        break;
    case ProcessKind::besq:
        if (!(param(s, "delta") > 0.0)) fail("delta must be > 0");
        if (param(s, "x") < 0.0) fail("x must be >= 0");
        break;
    case ProcessKind::heston:
        for (const char* k : {"kappa", "theta", "xi", "mu"})
            if (!(param(s, k) > 0.0)) fail(std::string(k) + " must be > 0");
        if (!(std::abs(param(s, "rho")) <= 1.0)) fail("rho must lie in [-1,1]");
        if (param(s, "v0") < 0.0) fail("v0 must be >= 0");
        break;
    case ProcessKind::generic_sde:
        for (const char* k : {"x0", "a_scale", "a_root", "a_exp", "b_const", "b_scale", "b_root", "b_exp"}) param(s, k);
        if (param(s, "a_exp") < 0.0 || param(s, "b_exp") < 0.0) fail("exponents must be >= 0");
        break;
    }
}

SynthResult synth_all(const ProcessSpec& s) {
    validate(s);
    const double dt = dt_of(s);
    switch (s.kind) {
    case ProcessKind::bm: {
        auto dw = increments(s, streams::main_noise);
        const double sigma = param_or(s, "sigma", 1.0);
        for (auto& x : dw) x *= sigma;
        return {make_path(s, bm_from(dw, param_or(s, "x0", 0.0)), "bm"), {}};
    }
    case ProcessKind::fbm: {
        const double h = param(s, "H");
        auto g = fgn(s.n, h, s.seed);
        const double scale = std::pow(dt, h);
        for (auto& x : g) x *= scale;
        return {make_path(s, bm_from(g), "fbm"), {}};
    }
    case ProcessKind::mbm: return synth_mbm(s);
    case ProcessKind::time_changed_bm: {
        auto g = render_time_change(s);
        auto m = bm_at_times(g, s.n, s.seed);
        SynthResult r{make_path(s, std::move(m), "time_changed_bm"), {}};
        r.components.emplace("time_change", make_path(s, std::move(g), "g"));
        return r;
    }
    case ProcessKind::ito_integral: return synth_ito(s);
    case ProcessKind::ou: {
        const double theta = param(s, "theta"), mu = param(s, "mu"), sigma = param(s, "sigma");
        auto dw = increments(s, streams::main_noise);
        std::vector<double> x(s.n + 1, param(s, "x0"));
        for (std::size_t i = 0; i < s.n; ++i) x[i + 1] = x[i] + theta * (mu - x[i]) * dt + sigma * dw[i];
        return {make_path(s, std::move(x), "ou"), {}};
    }
    case ProcessKind::besq: {
        const double delta = param(s, "delta");
        auto dw = increments(s, streams::main_noise);
        std::vector<double> z(s.n + 1);
        double state = param(s, "x");
        z[0] = state;
        for (std::size_t i = 0; i < s.n; ++i) {
            const double pos = std::max(state, 0.0);
            state = state + delta * dt + 2.0 * std::sqrt(pos) * dw[i];
            z[i + 1] = std::max(state, 0.0);
        }
        return {make_path(s, std::move(z), "besq"), {}};
    }
    case ProcessKind::heston: return synth_heston(s);
    case ProcessKind::generic_sde: {
        const double as = param(s, "a_scale"), ar = param(s, "a_root"), ae = param(s, "a_exp");
        const double bc = param(s, "b_const"), bs = param(s, "b_scale"), br = param(s, "b_root"), be = param(s, "b_exp");
        auto dw = increments(s, streams::main_noise);
        std::vector<double> x(s.n + 1, param(s, "x0"));
        for (std::size_t i = 0; i < s.n; ++i) {
            const double a = as * std::pow(std::abs(x[i] - ar), ae);
            const double b = bc + bs * std::pow(std::abs(x[i] - br), be);
            x[i + 1] = x[i] + a * dw[i] + b * dt;
        }
        return {make_path(s, std::move(x), "generic_sde"), {}};
    }
    }
    throw std::invalid_argument("synth: unknown kind");
}

SamplePath synth(const ProcessSpec& spec) { return synth_all(spec).path; }

SamplePath qv_of_integral(const SamplePath& h_path, const SamplePath& m_path) {
    if (h_path.size() != m_path.size() || h_path.t_start() != m_path.t_start() || h_path.t_end() != m_path.t_end())
        throw std::invalid_argument("qv_of_integral: grid mismatch");
    std::vector<double> out(h_path.size(), 0.0);
    for (std::size_t i = 0; i + 1 < h_path.size(); ++i) {
        const double d = m_path[i + 1] - m_path[i];
        out[i + 1] = out[i] + h_path[i] * h_path[i] * d * d;
    }
    return SamplePath(h_path.t_start(), h_path.t_end(), std::move(out), "qv_of_integral");
}

std::vector<double> mbm_at_times(std::span<const double> tau, const HurstSpec& hurst, double t_hist,
                                 std::uint64_t seed) {
    const std::size_t n = tau.size();
    std::vector<double> out(n, 0.0);
    if (n == 0) return out;
    for (std::size_t i = 0; i < n; ++i)
        if (tau[i] < 0.0 || (i && tau[i] < tau[i - 1])) throw std::invalid_argument("mbm_at_times: times must be sorted and >= 0");

    // Noise cells between consecutive distinct times, starting at 0.
    std::vector<double> bound{0.0};
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (tau[i] > bound.back()) bound.push_back(tau[i]);
        pos[i] = bound.size() - 1;
    }
    const std::size_t cells = bound.size() - 1;
    std::vector<double> dw(cells);
    NormalStream(seed, streams::main_noise).fill(dw);
    for (std::size_t c = 0; c < cells; ++c) dw[c] *= std::sqrt(bound[c + 1] - bound[c]);

    const double top = std::max(bound.back(), 1e-300);
    const auto hb = history_bounds(top / static_cast<double>(std::max<std::size_t>(cells, 1)), t_hist);
    const auto zh = history_noise(hb, seed);

    std::vector<double> powb, hk;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = pos[i];
        if (r == 0) continue; // X at time 0 is 0
        const double t = bound[r];
        const double h = hurst(t);
        const double p = h + 0.5;
        powb.resize(r + 1);
        for (std::size_t c = 0; c <= r; ++c) powb[c] = std::pow(t - bound[c], p);
        double acc = 0.0;
        for (std::size_t c = 0; c + 1 < r; ++c) {
            const double w = bound[c + 1] - bound[c];
            acc += (powb[c] - powb[c + 1]) / (p * w) * dw[c];
        }
        const double last = bound[r] - bound[r - 1];
        acc += std::pow(last, h - 0.5) / std::sqrt(2.0 * h) * dw[r - 1];
        history_kernel(t, p, hb, hk);
        for (std::size_t c = 0; c < hk.size(); ++c) acc += hk[c] * zh[c];
        out[i] = acc / std::tgamma(p);
    }
    return out;
}

double mbm_increment_variance(double t_end, std::size_t n, const HurstSpec& hurst, double t_hist, std::size_t i1,
                              std::size_t i2) {
    const double dt = t_end / static_cast<double>(n);
    const auto hb = history_bounds(dt, t_hist);
    auto weights = [&](std::size_t i, std::vector<double>& grid_w, std::vector<double>& hist_w) {
        grid_w.assign(n, 0.0);
        hist_w.assign(hb.size() - 1, 0.0);
        if (i == 0) return;
        const double t = static_cast<double>(i) * dt;
        const double h = hurst(t), p = h + 0.5;
        const double c = 1.0 / std::tgamma(p);
        const double scale = std::pow(dt, h - 0.5);
        for (std::size_t l = 2; l <= i; ++l)
            grid_w[i - l] =
                c * scale * (std::pow(static_cast<double>(l), p) - std::pow(static_cast<double>(l - 1), p)) / p;
        grid_w[i - 1] = c * scale / std::sqrt(2.0 * h);
        history_kernel(t, p, hb, hist_w);
        for (auto& w : hist_w) w *= c;
    };
    std::vector<double> g1, h1, g2, h2;
    weights(i1, g1, h1);
    weights(i2, g2, h2);
    double var = 0.0;
    for (std::size_t m = 0; m < n; ++m) var += (g2[m] - g1[m]) * (g2[m] - g1[m]) * dt;
    for (std::size_t c = 0; c < h1.size(); ++c) var += (h2[c] - h1[c]) * (h2[c] - h1[c]) * (hb[c] - hb[c + 1]);
    return var;
}

std::string to_string(ProcessKind k) {
    switch (k) {
    case ProcessKind::bm: return "bm";
    case ProcessKind::fbm: return "fbm";
    case ProcessKind::mbm: return "mbm";
    case ProcessKind::time_changed_bm: return "time_changed_bm";
    case ProcessKind::ito_integral: return "ito_integral";
    case ProcessKind::ou: return "ou";
    case ProcessKind::besq: return "besq";
    case ProcessKind::heston: return "heston";
    case ProcessKind::generic_sde: return "generic_sde";
    }
    return "?";
}

ProcessKind process_kind_from_string(const std::string& s) {
    for (auto k : {ProcessKind::bm, ProcessKind::fbm, ProcessKind::mbm, ProcessKind::time_changed_bm,
                   ProcessKind::ito_integral, ProcessKind::ou, ProcessKind::besq, ProcessKind::heston,
                   ProcessKind::generic_sde})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("synth: unknown process kind '" + s + "'");
}

nlohmann::json to_json(const ProcessSpec& s) {
    nlohmann::json j;
    j["kind"] = to_string(s.kind);
    j["params"] = nlohmann::json::object();
    for (const auto& [k, v] : s.params) j["params"][k] = v;
    if (s.kind == ProcessKind::mbm)
        j["hurst"] = {{"a", s.hurst.a}, {"b", s.hurst.b}, {"h_min", s.hurst.h_min}, {"h_max", s.hurst.h_max}};
    if (s.driver) j["driver"] = to_json(*s.driver);
    if (s.time_change) j["time_change"] = to_json(*s.time_change);
    j["seed"] = s.seed;
    j["t_end"] = s.t_end;
    j["n"] = s.n;
    return j;
}

ProcessSpec process_from_json(const nlohmann::json& j) {
    ProcessSpec s;
    s.kind = process_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("params"))
        for (const auto& [k, v] : j.at("params").items()) s.params[k] = v.get<double>();
    if (j.contains("hurst")) {
        const auto& h = j.at("hurst");
        s.hurst.a = h.value("a", s.hurst.a);
        s.hurst.b = h.value("b", s.hurst.b);
        s.hurst.h_min = h.value("h_min", s.hurst.h_min);
        s.hurst.h_max = h.value("h_max", s.hurst.h_max);
    }
    if (j.contains("driver")) s.driver = std::make_shared<ProcessSpec>(process_from_json(j.at("driver")));
    if (j.contains("time_change")) s.time_change = detfun_from_json(j.at("time_change"));
    s.seed = j.value("seed", std::uint64_t{0});
    s.t_end = j.value("t_end", 1.0);
    s.n = j.value("n", std::size_t{1024});
    validate(s);
    return s;
}

} // namespace microloc
