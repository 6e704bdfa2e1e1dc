#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <doctest.h>

#include "microloc/harness.hpp"

using namespace microloc;
using nlohmann::json;

namespace {

json small_config() {
    return json::parse(R"({
        "name": "small-power",
        "detfun": {"kind": "power", "params": {"alpha": 0.5, "t0": 0.5}},
        "grid": {"n": 4097},
        "probes": {"times": [0.5]},
        "measure": "frontier",
        "s_grid": [-0.25, 0, 0.5],
        "expectation": {"catalog": {"kind": "power", "params": {"alpha": 0.5}, "case": "at_zero"}},
        "tolerance": 0.15
    })");
}

json small_stochastic() {
    return json::parse(R"({
        "name": "small-bm",
        "process": {"kind": "bm", "n": 4096},
        "seeds": {"count": 4, "master": 3},
        "probes": {"times": [0.25, 0.75]},
        "measure": "local",
        "window": {"gaussian_modulus": true},
        "expectation": {"catalog": {"kind": "brownian"}},
        "tolerance": 0.2
    })");
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("bundled configs parse") {
    const auto files = config_files(MICROLOC_CONFIG_DIR);
    CHECK(files.size() >= 40);
    for (const auto& f : files) {
        CAPTURE(f);
        CHECK_NOTHROW(load_config(f));
    }
}

TEST_CASE("invalid configs are rejected") {
    auto j = small_config();
    j.erase("tolerance");
    CHECK_THROWS(config_from_json(j));
    j = small_config();
    j["measure"] = "magic";
    CHECK_THROWS(config_from_json(j));
    j = small_config();
    j["expectation"] = json{{"nothing", 1}};
    CHECK_THROWS(config_from_json(j));
    j = small_config();
    j["probes"] = json{{"zero_set", "zeros"}};
    CHECK_THROWS(config_from_json(j)); // deterministic function has no zero set
}

TEST_CASE("expectation forms") {
    const auto chain = target_from_json(json::parse(R"({"chain": {"base": {"catalog": {"kind": "power",
        "params": {"alpha": 1}, "case": "at_zero"}}, "ops": [{"op": "mg_transform"}]}})"));
    for (double s : {-0.5, 0.0, 0.5}) CHECK(chain.lower(s) == doctest::Approx(std::min(0.5 + s, 0.5)));

    const auto sde = target_from_json(json::parse(R"({"sde_bounds": {"alpha_a": 0.25, "alpha_b": 1, "case": "a_zero_b_nonzero"}})"));
    CHECK(sde.lower(-0.5) == doctest::Approx(2.0 / 3.0 - 0.5));
    CHECK(sde.upper(-0.5) == doctest::Approx(0.5));

    const auto v = target_from_json(json{{"value_range", {0.2, 0.4}}});
    CHECK(v.has_value);
    CHECK(v.value_lo == 0.2);
    CHECK(v.value_hi == 0.4);
}

TEST_CASE("zero set detection on a known coordinate") {
    // integrand sin(6 pi t): zeros at k/6, k = 1..6 (the samples straddle t = 1 too)
    ProcessSpec spec;
    spec.kind = ProcessKind::ito_integral;
    spec.n = 6000;
    std::vector<double> x(6001), zeros(6001, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(6.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / 6000.0);
    SynthResult r{SamplePath(0.0, 1.0, zeros), {}};
    r.components.emplace("integrand", SamplePath(0.0, 1.0, x));
    const auto z = detect_zero_set(r, spec, 4);
    REQUIRE(z.zeros.size() == 6);
    for (std::size_t i = 0; i < z.zeros.size(); ++i) CHECK(std::abs(z.zeros[i] - (i + 1) / 6.0) < 1e-3);
    CHECK(z.nonzeros.size() == 6);
    for (double t : z.nonzeros) CHECK(std::abs(std::sin(6.0 * std::numbers::pi * (t + 0.5 / 6000.0))) >= 0.25);

    // thinning to spacing 2^(1-k_min)
    const auto coarse = detect_zero_set(r, spec, 2);
    CHECK(coarse.zeros.size() == 2);
    for (std::size_t i = 1; i < coarse.zeros.size(); ++i) CHECK(coarse.zeros[i] - coarse.zeros[i - 1] >= 0.5);

    spec.kind = ProcessKind::besq;
    spec.params["delta"] = 0.5;
    CHECK(zero_threshold(spec) == doctest::Approx(3.0 * 0.5 / 6000.0));
    spec.kind = ProcessKind::bm;
    CHECK_THROWS(detect_zero_set(r, spec, 1));
}

TEST_CASE("deterministic config passes") {
    const auto r = run(config_from_json(small_config()));
    CHECK(r.pass);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].expected_lower == doctest::Approx(0.25));
    CHECK(r.rows[2].expected_upper == doctest::Approx(1.0));
}

TEST_CASE("reports are reproducible and round-trip") {
    const auto c = config_from_json(small_stochastic());
    const auto a = run(c), b = run(c);
    CHECK(to_json(a).dump() == to_json(b).dump());
    CHECK(a.rows.size() == 2);
    CHECK(a.per_seed.size() == 4);

    const auto back = report_from_json(to_json(a));
    CHECK(to_json(back).dump() == to_json(a).dump());
    std::ostringstream os;
    write_report_csv(os, a);
    CHECK(os.str().rfind("probe,s_prime,median_estimate,expected_lower,expected_upper,abs_error,verdict\n", 0) == 0);

    const auto dir = std::filesystem::temp_directory_path() / "microloc_harness_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir / "cfg");
    std::ofstream(dir / "cfg" / "a.json") << small_config().dump(2);
    std::ofstream(dir / "cfg" / "b.json") << small_stochastic().dump(2);
    const auto s1 = verify((dir / "cfg").string(), (dir / "r1").string());
    const auto s2 = verify((dir / "cfg").string(), (dir / "r2").string());
    CHECK(s1.reports.size() == 2);
    for (const auto& e : std::filesystem::directory_iterator(dir / "r1")) {
        const auto name = e.path().filename();
        if (name == "runtime.json") continue;
        CAPTURE(name.string());
        CHECK(slurp(e.path()) == slurp(dir / "r2" / name));
    }
    CHECK(std::filesystem::exists(dir / "r1" / "summary.csv"));
    CHECK(std::filesystem::exists(dir / "r1" / "runtime.json"));
    CHECK(summarize_reports((dir / "r1").string()).find("small-bm") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("environment stamp") {
    const auto e = environment_stamp();
    CHECK(e.contains("library"));
    CHECK(e.contains("rng"));
}
