#include <cmath>
#include <numbers>

#include <doctest.h>

#include "microloc/detfun.hpp"

using namespace microloc;

namespace {

DetFunSpec spec(DetFunKind k, std::map<std::string, double> p = {}, int depth = 30) { return {k, std::move(p), depth}; }

SamplePath constant(double c, std::size_t n, double t_end = 1.0) {
    return SamplePath(0.0, t_end, std::vector<double>(n, c));
}

} // namespace

TEST_CASE("rendering") {
    const auto chirp = spec(DetFunKind::chirp, {{"alpha", 1}, {"beta", 1}, {"t0", 0.5}});
    CHECK(evaluate(chirp, 0.5) == 0.0);
    CHECK(evaluate(chirp, 0.75) == doctest::Approx(0.25 * std::sin(4.0)));

    const auto sq = render(spec(DetFunKind::power, {{"alpha", 2}}), {0.0, 1.0, 101});
    for (std::size_t i = 0; i < sq.size(); ++i) CHECK(sq[i] == doctest::Approx(sq.time(i) * sq.time(i)));

    const auto poly = spec(DetFunKind::polynomial, {{"t0", 1}, {"c0", 2}, {"c2", -3}});
    CHECK(evaluate(poly, 3.0) == doctest::Approx(2.0 - 12.0));
    CHECK_THROWS_AS(validate(spec(DetFunKind::chirp, {{"alpha", 1}})), std::invalid_argument);
    CHECK_THROWS_AS(render(spec(DetFunKind::cantor_f_alpha, {{"alpha", 0.5}}), {0.5, 1.0, 11}), std::invalid_argument);
    CHECK_THROWS_AS(validate(spec(DetFunKind::cantor_f_alpha, {{"alpha", 0.001}})), std::invalid_argument);
}

TEST_CASE("cantor function structure") {
    const double a = 0.25;
    const auto f = spec(DetFunKind::cantor_f_alpha, {{"alpha", a}}, 40);
    for (int n = 1; n < 20; ++n) {
        const double right = std::ldexp(1.0, -n);
        CHECK(evaluate(f, right) == doctest::Approx(right));
        // plateau at half height, ramp of width (a/2)^(n+1) climbing 2^-(n+1)
        const double width = std::pow(a / 2.0, n + 1);
        CHECK(evaluate(f, right - 2.0 * width) == doctest::Approx(0.5 * right));
        CHECK(evaluate(f, right - width) == doctest::Approx(0.5 * right));
        CHECK(evaluate(f, right) - evaluate(f, right - width) == doctest::Approx(std::ldexp(1.0, -n - 1)));
    }
    const auto p = render(f, {0.0, 1.0, 1 << 16});
    for (std::size_t i = 1; i < p.size(); ++i) CHECK(p[i] >= p[i - 1]);
    CHECK(p[0] == 0.0);
    CHECK(p[p.size() - 1] == 1.0);
}

TEST_CASE("fractional integral of a constant") {
    const auto one = frac_integral(constant(1.0, 1025), 1.0);
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i] == doctest::Approx(one.time(i)).epsilon(1e-12));

    const auto c = constant(1.0, 4097);
    const auto half = frac_integral(c, 0.5);
    double worst = 0.0;
    for (std::size_t i = 0; i < half.size(); ++i)
        worst = std::max(worst, std::abs(half[i] - 2.0 * std::sqrt(half.time(i)) / std::sqrt(std::numbers::pi)));
    CHECK(worst <= 2.0 * std::sqrt(c.dt()));

    // base index: zero before the base point
    const auto based = frac_integral(c, 1.0, 2048);
    CHECK(based[2000] == 0.0);
    CHECK(based[4096] == doctest::Approx(0.5));
}

TEST_CASE("envelope multiply") {
    const auto f = spec(DetFunKind::power, {{"alpha", 0.5}});
    const auto p = render(f, {-1.0, 1.0, 2001});
    const auto zero = envelope_multiply(p, 0.0, 0.0);
    for (std::size_t i = 0; i < p.size(); i += 50) CHECK(zero[i] == doctest::Approx(p[i]));
    const auto up = envelope_multiply(p, 0.0, 1.0);
    for (std::size_t i = 0; i < p.size(); i += 50) CHECK(up[i] == doctest::Approx(std::pow(std::abs(p.time(i)), 1.5)));
}

TEST_CASE("primitive and realized quadratic variation") {
    const auto prim = primitive(constant(1.0, 101, 2.0));
    for (std::size_t i = 0; i < prim.size(); ++i) CHECK(prim[i] == doctest::Approx(prim.time(i)));
    const auto lin = primitive(render(spec(DetFunKind::identity), {0.0, 1.0, 1001}));
    CHECK(lin[lin.size() - 1] == doctest::Approx(0.5).epsilon(1e-12));

    for (std::size_t n : {101u, 1001u, 10001u}) {
        const auto qv = realized_qv(render(spec(DetFunKind::identity), {0.0, 1.0, n}));
        const double dt = 1.0 / static_cast<double>(n - 1);
        CHECK(qv[qv.size() - 1] == doctest::Approx(dt));
    }
}

TEST_CASE("json round trip") {
    const auto f = spec(DetFunKind::chirp, {{"alpha", 1}, {"beta", 2}, {"t0", 0.1}});
    const auto g = detfun_from_json(to_json(f));
    CHECK(g.kind == f.kind);
    CHECK(g.params == f.params);
}
