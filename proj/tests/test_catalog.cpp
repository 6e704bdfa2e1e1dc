#include <cmath>

#include <doctest.h>

#include "microloc/catalog.hpp"

using namespace microloc;

namespace {

CatalogKey key(CatalogKind k, std::map<std::string, double> p = {}, CatalogCase c = CatalogCase::generic) {
    return {k, std::move(p), c};
}

template <class Fn>
double gap_to(const FrontierPL& f, Fn&& g) {
    double worst = 0.0;
    for (double s : probe_grid()) worst = std::max(worst, std::abs(f(s) - g(s)));
    return worst;
}

} // namespace

TEST_CASE("closed-form frontiers") {
    const auto chirp = analytic_frontier(key(CatalogKind::chirp, {{"alpha", 1}, {"beta", 1}}), true);
    REQUIRE(chirp.pieces().size() == 1);
    CHECK(chirp.pieces()[0].slope == doctest::Approx(0.5));
    CHECK(chirp.pieces()[0].intercept == doctest::Approx(0.5));

    auto one_half = [](double s) { return std::min(1.0 + s, 0.5); };
    CHECK(gap_to(analytic_frontier(key(CatalogKind::besq, {{"delta", 0.5}}, CatalogCase::at_zero)), one_half) < 1e-12);
    CHECK(gap_to(analytic_frontier(key(CatalogKind::square_brownian_at0)), one_half) < 1e-12);
    CHECK(gap_to(analytic_frontier(key(CatalogKind::mbm, {{"H", 0.3}})), [](double s) { return std::min(s + 0.3, 0.3); }) <
          1e-12);
    CHECK(gap_to(analytic_frontier(key(CatalogKind::power, {{"alpha", 0.5}})), [](double s) { return std::min(0.5 + s, 1.0); }) <
          1e-12);
    CHECK(analytic_frontier(key(CatalogKind::power, {{"alpha", 2}}), true).is_infinite());

    const double d = 1.0 - std::log2(0.25);
    CHECK(gap_to(analytic_frontier(key(CatalogKind::cantor_f_alpha, {{"alpha", 0.25}})),
                 [&](double s) { return std::min((s + 1.0) / d, 1.0); }) < 1e-12);
    CHECK(gap_to(analytic_frontier(key(CatalogKind::time_changed_bm, {{"alpha", 0.5}})),
                 [](double s) { return std::min((s + 0.5) / 2.0, 0.5); }) < 1e-12);
    CHECK(gap_to(analytic_frontier(key(CatalogKind::stoch_int_bm, {{"H", 0.3}}, CatalogCase::at_zero)),
                 [](double s) { return std::min(s + 0.8, 0.5); }) < 1e-12);
    CHECK(analytic_frontier(key(CatalogKind::stoch_int_bm, {}, CatalogCase::locally_zero)).is_infinite());
}

TEST_CASE("BESQ zero frontier solves its fixed-point equation") {
    const auto f = analytic_frontier(key(CatalogKind::besq, {{"delta", 0.5}}, CatalogCase::at_zero));
    for (double s : probe_grid(-3.0, 1.5))
        CHECK(std::abs(f(s) - std::min({0.5 + 0.5 * f(2.0 * s), 1.0 + s, 0.5})) < 1e-9);
}

TEST_CASE("sde bounds") {
    auto half_half = [](double s) { return std::min(0.5 + s, 0.5); };
    auto one_half = [](double s) { return std::min(1.0 + s, 0.5); };
    auto b = sde_frontier_bounds(0.7, 0.3, SdeCase::a_nonzero);
    CHECK(gap_to(b.lower, half_half) < 1e-12);
    CHECK(gap_to(b.upper, half_half) < 1e-12);

    b = sde_frontier_bounds(0.5, 0.9, SdeCase::a_zero_b_nonzero);
    CHECK(gap_to(b.lower, one_half) < 1e-12);
    CHECK(gap_to(b.upper, one_half) < 1e-12);

    // alpha_a = 1/4: 1/(2(1 - 1/4)) = 2/3
    b = sde_frontier_bounds(0.25, 0.5, SdeCase::a_zero_b_nonzero);
    CHECK(gap_to(b.lower, [](double s) { return std::min({2.0 / 3.0 + s, 1.0 + s, 0.5}); }) < 1e-12);
    CHECK(gap_to(b.upper, one_half) < 1e-12);

    for (auto c : {SdeCase::a_nonzero, SdeCase::a_zero_b_nonzero, SdeCase::a_zero_b_zero, SdeCase::a_locally_zero})
        for (double aa : {0.1, 0.25, 0.5, 1.0})
            for (double ab : {0.0, 0.5, 1.0}) {
                const auto r = sde_frontier_bounds(aa, ab, c);
                CHECK(check_invariants(r.lower).ok());
                CHECK(check_invariants(r.upper).ok());
                for (double s : probe_grid()) CHECK(r.lower(s) <= r.upper(s) + 1e-12);
            }
}

TEST_CASE("every catalog frontier is concave, non-decreasing, slopes in [0,1]") {
    std::vector<CatalogKey> keys{
        key(CatalogKind::chirp, {{"alpha", 1}, {"beta", 1}}),
        key(CatalogKind::chirp, {{"alpha", 0.5}, {"beta", 2}}),
        key(CatalogKind::power, {{"alpha", 0.5}}),
        key(CatalogKind::power, {{"alpha", 1.5}}, CatalogCase::at_zero),
        key(CatalogKind::cantor_f_alpha, {{"alpha", 0.5}}),
        key(CatalogKind::brownian),
        key(CatalogKind::square_brownian_at0),
        key(CatalogKind::mbm, {{"H", 0.7}}),
        key(CatalogKind::ou),
        key(CatalogKind::besq, {{"delta", 0.5}}, CatalogCase::nonzero),
        key(CatalogKind::heston_vol, {}, CatalogCase::at_zero),
        key(CatalogKind::heston_price, {}, CatalogCase::nonzero),
        key(CatalogKind::time_changed_bm, {{"abs_m", 2}}),
        key(CatalogKind::stoch_int_bm, {}, CatalogCase::nonzero),
        key(CatalogKind::sde_bound, {{"alpha_a", 0.25}, {"alpha_b", 0.5}, {"b_at_zero", 0}}, CatalogCase::at_zero),
    };
    for (const auto& k : keys) {
        CAPTURE(to_json(k).dump());
        CHECK(check_invariants(analytic_frontier(k)).ok());
        CHECK(frontier_equal(analytic_frontier(catalog_key_from_json(to_json(k))), analytic_frontier(k)));
    }
}

TEST_CASE("invalid keys are rejected") {
    CHECK_THROWS_AS(validate(key(CatalogKind::chirp, {{"alpha", 1}})), std::exception);
    CHECK_THROWS_AS(validate(key(CatalogKind::mbm, {{"H", 1.2}})), std::invalid_argument);
    CHECK_THROWS_AS(validate(key(CatalogKind::besq, {{"delta", 0.5}}, CatalogCase::generic)), std::invalid_argument);
    CHECK_THROWS_AS(catalog_kind_from_string("nope"), std::invalid_argument);
}
