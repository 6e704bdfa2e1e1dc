#include <cmath>

#include <doctest.h>

#include "microloc/detfun.hpp"
#include "microloc/rng.hpp"
#include "microloc/synth.hpp"

using namespace microloc;

namespace {

ProcessSpec make(ProcessKind k, std::size_t n = 4096, std::uint64_t seed = 1) {
    ProcessSpec s;
    s.kind = k;
    s.n = n;
    s.seed = seed;
    return s;
}

// Mean over seeds of the squared increment over `lag` steps, averaged along the path.
double increment_variance(const ProcessSpec& base, std::size_t lag, int seeds) {
    double acc = 0.0;
    std::size_t count = 0;
    for (int s = 0; s < seeds; ++s) {
        ProcessSpec spec = base;
        spec.seed = derive_seed(99, static_cast<std::uint64_t>(s));
        const auto p = synth(spec);
        for (std::size_t i = lag; i < p.size(); i += lag) {
            const double d = p[i] - p[i - lag];
            acc += d * d;
            ++count;
        }
    }
    return acc / static_cast<double>(count);
}

} // namespace

TEST_CASE("paths are deterministic in the seed") {
    for (auto k : {ProcessKind::bm, ProcessKind::fbm, ProcessKind::mbm, ProcessKind::ou, ProcessKind::besq}) {
        auto s = make(k, 1024);
        s.params["H"] = 0.7;
        s.params["delta"] = 0.5;
        s.params["x"] = 0.5;
        if (k == ProcessKind::ou) s.params = {{"theta", 1.0}, {"mu", 0.0}, {"sigma", 1.0}, {"x0", 0.0}};
        const auto a = synth(s), b = synth(s);
        CHECK(a.values() == b.values());
        s.seed = 2;
        CHECK(synth(s).values() != a.values());
        CHECK(a.size() == 1025);
    }
}

TEST_CASE("Brownian and fractional Brownian increments") {
    auto bm = make(ProcessKind::bm, 4096);
    const double dt = 1.0 / 4096.0;
    CHECK(increment_variance(bm, 1, 20) == doctest::Approx(dt).epsilon(0.03));
    CHECK(increment_variance(bm, 64, 20) == doctest::Approx(64 * dt).epsilon(0.1));

    for (double h : {0.3, 0.7}) {
        auto fbm = make(ProcessKind::fbm, 4096);
        fbm.params["H"] = h;
        CHECK(increment_variance(fbm, 1, 20) == doctest::Approx(std::pow(dt, 2 * h)).epsilon(0.05));
        CHECK(increment_variance(fbm, 16, 20) == doctest::Approx(std::pow(16 * dt, 2 * h)).epsilon(0.1));
    }
}

TEST_CASE("mBm with H = 1/2 has Brownian increment variance") {
    const HurstSpec half{0.5, 0.0};
    const std::size_t n = 2048;
    const double dt = 1.0 / static_cast<double>(n);
    for (std::size_t lag : {1u, 7u, 300u})
        CHECK(mbm_increment_variance(1.0, n, half, 10.0, 1000, 1000 + lag) ==
              doctest::Approx(static_cast<double>(lag) * dt).epsilon(1e-9));

    auto m = make(ProcessKind::mbm, 2048);
    m.hurst = half;
    CHECK(increment_variance(m, 1, 20) == doctest::Approx(dt).epsilon(0.05));
}

TEST_CASE("mBm increment variance scales like lag^(2H)") {
    const HurstSpec h{0.7, 0.0};
    const double v1 = mbm_increment_variance(1.0, 4096, h, 10.0, 2000, 2008);
    const double v2 = mbm_increment_variance(1.0, 4096, h, 10.0, 2000, 2016);
    CHECK(v2 / v1 == doctest::Approx(std::pow(2.0, 1.4)).epsilon(0.02));

    auto m = make(ProcessKind::mbm, 4096);
    m.hurst = h;
    const double emp = increment_variance(m, 8, 20);
    CHECK(emp == doctest::Approx(v1).epsilon(0.1));
}

TEST_CASE("mBm history truncation bias is below 2%") {
    for (const HurstSpec h : {HurstSpec{0.3, 0.4}, HurstSpec{0.8, 0.0}}) {
        for (std::size_t lag : {1u, 64u, 1024u}) {
            const double base = mbm_increment_variance(1.0, 2048, h, 10.0, 1000, 1000 + lag);
            const double doubled = mbm_increment_variance(1.0, 2048, h, 20.0, 1000, 1000 + lag);
            CHECK(std::abs(base / doubled - 1.0) < 0.02);
        }
    }
}

TEST_CASE("mBm at explicit times matches the grid synthesis") {
    auto m = make(ProcessKind::mbm, 512, 3);
    m.hurst = {0.3, 0.4};
    m.params["t_hist"] = 10.0;
    const auto grid = synth(m);
    std::vector<double> tau(513);
    for (std::size_t i = 0; i < tau.size(); ++i) tau[i] = grid.time(i);
    const auto direct = mbm_at_times(tau, m.hurst, 10.0, m.seed);
    double worst = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) worst = std::max(worst, std::abs(direct[i] - grid[i]));
    CHECK(worst < 1e-9);
}

TEST_CASE("time-changed Brownian motion") {
    auto t = make(ProcessKind::time_changed_bm, 4096);
    t.time_change = DetFunSpec{DetFunKind::identity, {}, 30};
    CHECK(increment_variance(t, 4, 20) == doctest::Approx(4.0 / 4096.0).epsilon(0.05));

    t.time_change = DetFunSpec{DetFunKind::cantor_f_alpha, {{"alpha", 0.5}}, 30};
    const auto r = synth_all(t);
    CHECK(r.components.count("time_change") == 1);
    // flat stretches of the time change give flat stretches of the path
    const auto& g = r.components.at("time_change");
    for (std::size_t i = 1; i < g.size(); ++i)
        if (g[i] == g[i - 1]) CHECK(r.path[i] == r.path[i - 1]);
}

TEST_CASE("stochastic integral, BESQ and Heston components") {
    auto ito = make(ProcessKind::ito_integral, 2048);
    ito.driver = std::make_shared<ProcessSpec>(make(ProcessKind::bm, 2048));
    const auto r = synth_all(ito);
    REQUIRE(r.components.count("integrand") == 1);
    REQUIRE(r.components.count("driver") == 1);
    const auto& x = r.components.at("integrand");
    const auto& b = r.components.at("driver");
    // left-point sum against the shared noise
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) acc += x[i - 1] * (b[i] - b[i - 1]);
    CHECK(r.path[r.path.size() - 1] == doctest::Approx(acc).epsilon(1e-9));

    auto z = make(ProcessKind::besq, 8192);
    z.params = {{"delta", 0.5}, {"x", 0.1}};
    z.t_end = 4.0;
    for (double v : synth(z).values()) CHECK(v >= 0.0);

    auto h = make(ProcessKind::heston, 8192);
    h.params = {{"mu", 0.05}, {"kappa", 1.0}, {"theta", 0.04}, {"xi", 0.5}, {"rho", -0.5}, {"v0", 0.04}};
    const auto hr = synth_all(h);
    REQUIRE(hr.components.count("vol") == 1);
    for (double v : hr.components.at("vol").values()) CHECK(v >= 0.0);
    CHECK(hr.path[0] == doctest::Approx(1.0));
}

TEST_CASE("quadratic variation of an integral") {
    auto bm = make(ProcessKind::bm, 1024);
    const auto m = synth(bm);
    const SamplePath one(0.0, 1.0, std::vector<double>(1025, 1.0));
    const SamplePath three(0.0, 1.0, std::vector<double>(1025, 3.0));
    const auto q1 = qv_of_integral(one, m);
    const auto q3 = qv_of_integral(three, m);
    const auto rq = realized_qv(m);
    for (std::size_t i = 0; i < q1.size(); i += 64) {
        CHECK(q1[i] == doctest::Approx(rq[i]));
        CHECK(q3[i] == doctest::Approx(9.0 * rq[i]));
    }
}

TEST_CASE("specs validate and round-trip") {
    auto f = make(ProcessKind::fbm);
    CHECK_THROWS_AS(validate(f), std::invalid_argument);
    f.params["H"] = 1.5;
    CHECK_THROWS_AS(validate(f), std::invalid_argument);
    CHECK_THROWS_AS(validate(make(ProcessKind::ito_integral)), std::invalid_argument);
    CHECK_THROWS_AS(process_kind_from_string("levy"), std::invalid_argument);

    auto m = make(ProcessKind::mbm, 256, 9);
    m.hurst = {0.3, 0.4};
    const auto back = process_from_json(to_json(m));
    CHECK(synth(back).values() == synth(m).values());
}
