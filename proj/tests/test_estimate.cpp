#include <cmath>
#include <random>

#include <doctest.h>

#include "microloc/detfun.hpp"
#include "microloc/estimate.hpp"
#include "microloc/synth.hpp"

using namespace microloc;

namespace {

SamplePath draw(DetFunKind k, std::map<std::string, double> p, std::size_t n, int depth = 40) {
    return render({k, std::move(p), depth}, {0.0, 1.0, n});
}

std::vector<double> s_grid() { return {-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0}; }

// Deterministic fixtures with their base points.
std::vector<std::pair<SamplePath, double>> fixtures(std::size_t n) {
    return {
        {draw(DetFunKind::chirp, {{"alpha", 1}, {"beta", 1}, {"t0", 0.5}}, n), 0.5},
        {draw(DetFunKind::power, {{"alpha", 0.5}, {"t0", 0.5}}, n), 0.5},
        {draw(DetFunKind::power, {{"alpha", 0.3}, {"t0", 0.25}}, n), 0.25},
        {draw(DetFunKind::cantor_f_alpha, {{"alpha", 0.5}}, n), 0.0},
        {draw(DetFunKind::identity, {}, n), 0.5},
        {draw(DetFunKind::polynomial, {{"t0", 0.5}, {"c2", 1}}, n), 0.5},
    };
}

} // namespace

TEST_CASE("oscillation matrix agrees with pair enumeration") {
    for (const auto& [p, t0] : fixtures(1025)) {
        for (double t : {t0, 0.3, 1.0}) {
            const auto fast = osc_matrix(p, t, 1, 8, 0, 9);
            const auto brute = osc_matrix_brute(p, t, 1, 8, 0, 9);
            REQUIRE(fast.values.size() == brute.values.size());
            for (std::size_t i = 0; i < fast.values.size(); ++i) {
                if (std::isnan(brute.values[i])) CHECK(std::isnan(fast.values[i]));
                else CHECK(fast.values[i] == brute.values[i]);
            }
        }
    }
    // also on a random walk
    std::mt19937_64 gen(5);
    std::normal_distribution<double> nd;
    std::vector<double> v(2049, 0.0);
    for (std::size_t i = 1; i < v.size(); ++i) v[i] = v[i - 1] + nd(gen);
    const SamplePath rw(0.0, 2.0, v);
    const auto fast = osc_matrix(rw, 1.3, -1, 8, -1, 10);
    const auto brute = osc_matrix_brute(rw, 1.3, -1, 8, -1, 10);
    for (std::size_t i = 0; i < fast.values.size(); ++i)
        if (!std::isnan(brute.values[i])) CHECK(fast.values[i] == brute.values[i]);
}

TEST_CASE("oscillation of constants and of the identity") {
    const SamplePath c(0.0, 1.0, std::vector<double>(1025, 3.0));
    const auto mc = osc_matrix(c, 0.5, 1, 8, 0, 8);
    for (int j = 1; j <= 8; ++j)
        for (int k = 0; k <= 8; ++k)
            if (!mc.empty(j, k)) CHECK(mc.at(j, k) == 0.0);

    const auto id = draw(DetFunKind::identity, {}, 4097);
    const auto m = osc_matrix(id, 0.5, 1, 10, 0, 10);
    for (int j = 1; j <= 10; ++j)
        for (int k = 0; k <= 10; ++k)
            if (!m.empty(j, k)) {
                CHECK(m.at(j, k) > std::ldexp(1.0, -j - 1));
                CHECK(m.at(j, k) <= std::ldexp(1.0, -j) * (1 + 1e-12));
            }
}

TEST_CASE("pointwise and local exponents of deterministic functions") {
    const auto chirp = draw(DetFunKind::chirp, {{"alpha", 1}, {"beta", 1}, {"t0", 0.5}}, (1 << 18) + 1);
    CHECK(estimate_pointwise(chirp, 0.5) == doctest::Approx(1.0).epsilon(0.1));
    CHECK(std::abs(estimate_local(chirp, 0.5) - 0.5) <= 0.1);

    const auto root = draw(DetFunKind::power, {{"alpha", 0.5}, {"t0", 0.5}}, (1 << 16) + 1);
    CHECK(std::abs(estimate_pointwise(root, 0.5) - 0.5) <= 0.05);

    const auto cantor = draw(DetFunKind::cantor_f_alpha, {{"alpha", 0.5}}, (1 << 18) + 1);
    CHECK(std::abs(estimate_local(cantor, 0.0) - 0.5) <= 0.1);
}

TEST_CASE("frontier estimates of deterministic functions") {
    const auto grid = s_grid();
    const SamplePath c(0.0, 1.0, std::vector<double>(1025, -2.0));
    for (double v : estimate_frontier(c, 0.5, grid).sigma_projected) CHECK(std::isinf(v));

    const auto id = draw(DetFunKind::identity, {}, (1 << 16) + 1);
    auto e = estimate_frontier(id, 0.5, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(e.sigma_projected[i] - std::min(1.0 + grid[i], 1.0)) <= 0.1);

    const auto root = draw(DetFunKind::power, {{"alpha", 0.5}, {"t0", 0.5}}, 2049);
    e = brute_frontier(root, 0.5, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(e.sigma_projected[i] - std::min(0.5 + grid[i], 1.0)) <= 0.1);
}

TEST_CASE("fast and brute frontiers agree on deterministic fixtures") {
    const auto grid = s_grid();
    for (auto method : {FrontierMethod::envelope_regression, FrontierMethod::min_cells}) {
        FitWindow w;
        w.method = method;
        for (const auto& [p, t0] : fixtures(1025)) {
            const auto a = estimate_frontier(p, t0, grid, w);
            const auto b = brute_frontier(p, t0, grid, w);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                if (std::isinf(b.sigma_projected[i])) CHECK(a.sigma_projected[i] == b.sigma_projected[i]);
                else CHECK(std::abs(a.sigma_projected[i] - b.sigma_projected[i]) <= 0.05);
            }
        }
    }
}

TEST_CASE("estimator consistency properties") {
    const auto grid = s_grid();
    std::vector<std::pair<SamplePath, double>> paths = fixtures(1 << 14 | 1);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        ProcessSpec bm;
        bm.n = 1 << 14;
        bm.seed = seed;
        paths.push_back({synth(bm), 0.5});
        ProcessSpec fbm = bm;
        fbm.kind = ProcessKind::fbm;
        fbm.params["H"] = 0.3 * static_cast<double>(seed);
        paths.push_back({synth(fbm), 0.25});
    }
    for (bool gm : {false, true}) {
        FitWindow w;
        w.gaussian_modulus = gm;
        for (const auto& [p, t0] : paths) {
            const auto e = estimate_frontier(p, t0, std::vector<double>{0.0}, w);
            const double local = estimate_local(p, t0, w);
            if (std::isinf(local)) continue;
            // same code path
            CHECK(std::abs(local - e.local_hat) <= 1e-9);
            CHECK(std::abs(local - e.sigma_raw[0]) <= 1e-9);
            CHECK(local <= estimate_pointwise(p, t0, w) + 0.05);

            // the cell minimum is monotone in s' before projection
            FitWindow mc = w;
            mc.method = FrontierMethod::min_cells;
            const auto raw = estimate_frontier(p, t0, grid, mc);
            for (std::size_t i = 1; i < grid.size(); ++i) CHECK(raw.sigma_raw[i] >= raw.sigma_raw[i - 1] - 1e-12);

            // projection is concave, non-decreasing, slope in [0,1]
            const auto full = estimate_frontier(p, t0, grid, w);
            for (std::size_t i = 1; i < grid.size(); ++i) {
                const double slope = (full.sigma_projected[i] - full.sigma_projected[i - 1]) / (grid[i] - grid[i - 1]);
                CHECK(slope >= -1e-9);
                CHECK(slope <= 1 + 1e-9);
                if (i + 1 < grid.size()) {
                    const double next = (full.sigma_projected[i + 1] - full.sigma_projected[i]) / (grid[i + 1] - grid[i]);
                    CHECK(next <= slope + 1e-9);
                }
            }

            // scale invariance
            std::vector<double> scaled = p.values();
            for (double& v : scaled) v *= 37.5;
            const auto s = estimate_frontier(SamplePath(p.t_start(), p.t_end(), scaled), t0, grid, w);
            for (std::size_t i = 0; i < grid.size(); ++i)
                CHECK(std::abs(s.sigma_projected[i] - full.sigma_projected[i]) <= 0.02);
        }
    }
}

TEST_CASE("isotonic concave projection") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    std::vector<double> x;
    for (int i = 0; i < 25; ++i) x.push_back(-2.0 + 0.2 * i);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> y(x.size());
        for (double& v : y) v = u(gen);
        const auto p = isotonic_concave_projection(x, y);
        REQUIRE(p.size() == x.size());
        double prev_slope = 2.0;
        for (std::size_t i = 1; i < x.size(); ++i) {
            const double slope = (p[i] - p[i - 1]) / (x[i] - x[i - 1]);
            CHECK(slope >= -1e-9);
            CHECK(slope <= 1.0 + 1e-9);
            CHECK(slope <= prev_slope + 1e-9);
            prev_slope = slope;
        }
        for (double v : p) CHECK(v <= 1.0 + 1e-12);
    }
    // a valid frontier is a fixed point
    std::vector<double> f;
    for (double s : x) f.push_back(std::min(0.5 + s, 0.5));
    const auto p = isotonic_concave_projection(x, f);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(p[i] == doctest::Approx(f[i]));
}

TEST_CASE("oscillation lower check") {
    // identity: osc(B(t, rho)) = 2 rho, which is not >= C rho^0.6 as rho -> 0
    const auto id = draw(DetFunKind::identity, {}, (1 << 14) + 1);
    const auto slow = oscillation_lower_check(id, [](double) { return 0.5; }, 0.1, 4, 10);
    CHECK_FALSE(slow.pass);
    // margin 1 - 0.4 r on interior balls: the fine half loses 0.4 per octave against r = 4..6
    CHECK(slow.worst_margin == doctest::Approx(-0.4 * 4).epsilon(1e-6));
    // but 2 rho >= rho^1.05
    const auto res = oscillation_lower_check(id, [](double) { return 0.95; }, 0.1, 4, 10);
    CHECK(res.pass);
    CHECK(res.worst_margin >= 0.0);

    // a path that is flat at fine scales fails
    std::vector<double> steps((1 << 14) + 1);
    for (std::size_t i = 0; i < steps.size(); ++i) steps[i] = std::floor(static_cast<double>(i) / 256.0);
    CHECK_FALSE(oscillation_lower_check(SamplePath(0.0, 1.0, steps), [](double) { return 0.5; }, 0.1, 4, 12).pass);
    CHECK_THROWS_AS(oscillation_lower_check(id, [](double) { return 0.5; }, 0.1, 4, 4), std::invalid_argument);
}

TEST_CASE("ols slope") {
    std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    CHECK(ols_slope(x, y) == doctest::Approx(2.0));
}
