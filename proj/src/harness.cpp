#include "microloc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "microloc/catalog.hpp"
#include "microloc/parallel.hpp"
#include "microloc/rng.hpp"

#ifndef MICROLOC_BUILD_TYPE
#define MICROLOC_BUILD_TYPE "unknown"
#endif

namespace microloc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string time_label(double t) { return "t=" + fmt("%.6g", t); }

json enc(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double dec(const json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    return kNaN;
}

double median(std::vector<double> v) {
    if (v.empty()) return kNaN;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2) return v[n / 2];
    const double a = v[n / 2 - 1], b = v[n / 2];
    if (std::isinf(a) && a == b) return a;
    return 0.5 * (a + b);
}

double distance(double est, double lo, double hi) {
    if (std::isnan(est)) return kInf;
    if (est < lo) return lo - est;
    if (est > hi) return est - hi;
    return 0.0;
}

FrontierPL exact_of(const Target& t, const char* what) {
    if (t.has_value || t.half_plus_hurst || t.fraction) throw std::invalid_argument(std::string(what) + ": needs a frontier");
    if (!frontier_equal(t.lower, t.upper) && !(t.lower.is_infinite() && t.upper.is_infinite()))
        throw std::invalid_argument(std::string(what) + ": needs an exact frontier, not bounds");
    return t.lower;
}

FrontierPL apply_op(const FrontierPL& f, const json& op) {
    const auto name = op.at("op").get<std::string>();
    if (name == "mg_transform") return frontier_mg_transform(f);
    if (name == "shift") return frontier_shift_s(f, op.at("delta").get<double>());
    if (name == "add_const") return frontier_add_const(f, op.at("gamma").get<double>());
    if (name == "cap") return frontier_cap(f, op.at("c").get<double>());
    if (name == "classic_to_pseudo") {
        std::optional<int> p;
        if (op.contains("p") && !op.at("p").is_null()) p = op.at("p").get<int>();
        return classic_to_pseudo(f, p);
    }
    if (name == "scale") return frontier_scale(f, op.at("c").get<double>(), op.value("d", op.at("c").get<double>()));
    if (name == "min") return frontier_min(f, exact_of(target_from_json(op.at("with")), "min"));
    throw std::invalid_argument("expectation: unknown chain op '" + name + "'");
}

// Coordinate whose zeros change the regularity, and whether zeros are read from sign changes.
struct ZeroCoordinate {
    std::vector<double> values;
    bool sign_change = false;
    double eps = 0.0;
};

ZeroCoordinate zero_coordinate(const SynthResult& r, const ProcessSpec& s) {
    ZeroCoordinate z;
    z.eps = zero_threshold(s);
    switch (s.kind) {
    case ProcessKind::besq: z.values = r.path.values(); break;
    case ProcessKind::heston: z.values = r.components.at("vol").values(); break;
    case ProcessKind::ito_integral:
        z.values = r.components.at("integrand").values();
        z.sign_change = true;
        break;
    case ProcessKind::generic_sde: {
        z.values = r.path.values();
        const double root = s.params.at("a_root");
        for (auto& v : z.values) v -= root;
        z.sign_change = true;
        break;
    }
    default: throw std::invalid_argument("detect_zero_set: " + to_string(s.kind) + " has no zero-sensitive coordinate");
    }
    return z;
}

bool zero_capable(ProcessKind k) {
    return k == ProcessKind::besq || k == ProcessKind::heston || k == ProcessKind::ito_integral ||
           k == ProcessKind::generic_sde;
}

std::function<double(double)> hurst_of(const ProcessSpec& s) {
    switch (s.kind) {
    case ProcessKind::bm: return [](double) { return 0.5; };
    case ProcessKind::fbm: {
        const double h = s.params.at("H");
        return [h](double) { return h; };
    }
    case ProcessKind::mbm: {
        const HurstSpec hs = s.hurst;
        return [hs](double t) { return hs(t); };
    }
    case ProcessKind::ito_integral:
        if (s.driver) return hurst_of(*s.driver);
        break;
    default: break;
    }
    throw std::invalid_argument("no Hurst function for " + to_string(s.kind));
}

// Per seed: for each probe group, one value per s' (or a single value) plus the expected value
// when it depends on the probes.
struct SeedResult {
    std::map<std::string, std::vector<double>> values;
    std::map<std::string, double> expected;
};

std::vector<std::string> group_names(const ExperimentConfig& c) {
    if (c.measure == Measure::oscillation_lower || c.measure == Measure::zero_presence) return {"all"};
    if (c.probes.zero_set) return {c.probes.zero_side ? "zeros" : "nonzeros"};
    std::vector<std::string> g;
    for (double t : c.probes.times) g.push_back(time_label(t));
    return g;
}

SeedResult run_seed(const ExperimentConfig& c, std::uint64_t seed) {
    std::optional<SynthResult> full;
    const SamplePath path = produce_path(c, seed, c.process ? &full : nullptr);
    SeedResult out;
    const FitWindow& w = c.window;

    if (c.measure == Measure::oscillation_lower) {
        const auto res = oscillation_lower_check(path, hurst_of(*c.process), c.eps, c.r_min, c.r_max);
        out.values["all"] = {res.pass ? 1.0 : 0.0};
        return out;
    }
    if (c.measure == Measure::zero_presence) {
        const auto z = detect_zero_set(*full, *c.process, w.k_min);
        const bool hit = c.expect_zeros ? !z.zeros.empty() : z.zeros.empty();
        out.values["all"] = {hit ? 1.0 : 0.0};
        return out;
    }

    std::vector<std::pair<std::string, std::vector<double>>> groups;
    if (c.probes.zero_set) {
        const auto z = detect_zero_set(*full, *c.process, w.k_min);
        groups.push_back({c.probes.zero_side ? "zeros" : "nonzeros", c.probes.zero_side ? z.zeros : z.nonzeros});
    } else {
        for (double t : c.probes.times) groups.push_back({time_label(t), {t}});
    }
    const Target target = target_from_json(c.expectation);
    for (const auto& [name, times] : groups) {
        if (times.empty()) continue;
        std::vector<std::vector<double>> per_probe;
        std::vector<double> expected;
        for (double t : times) {
            switch (c.measure) {
            case Measure::frontier: per_probe.push_back(estimate_frontier(path, t, c.s_grid, w).sigma_projected); break;
            case Measure::local: per_probe.push_back({estimate_local(path, t, w)}); break;
            case Measure::pointwise: per_probe.push_back({estimate_pointwise(path, t, w, c.detrend)}); break;
            default: break;
            }
            if (target.half_plus_hurst) expected.push_back(0.5 + hurst_of(*c.process)(t));
        }
        std::vector<double> agg(per_probe.front().size());
        for (std::size_t i = 0; i < agg.size(); ++i) {
            std::vector<double> col;
            for (const auto& p : per_probe) col.push_back(p[i]);
            agg[i] = median(col);
        }
        out.values[name] = agg;
        if (!expected.empty()) out.expected[name] = median(expected);
    }
    return out;
}

std::vector<double> grid_of(const ExperimentConfig& c) {
    if (c.measure == Measure::frontier) return c.s_grid;
    return {0.0};
}

void svg_text(std::ostringstream& os, double x, double y, const std::string& s, const char* anchor = "middle") {
    os << "<text x=\"" << fmt("%.1f", x) << "\" y=\"" << fmt("%.1f", y) << "\" font-size=\"11\" text-anchor=\"" << anchor
       << "\">" << s << "</text>\n";
}

std::string sanitize(const std::string& s) {
    std::string r;
    for (char ch : s) r += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-') ? ch : '_';
    return r;
}

} // namespace

double zero_threshold(const ProcessSpec& s) {
    const double dt = s.t_end / static_cast<double>(s.n);
    if (s.kind == ProcessKind::besq) return 3.0 * s.params.at("delta") * dt;
    if (s.kind == ProcessKind::heston) return 3.0 * s.params.at("kappa") * s.params.at("theta") * dt;
    return 0.0;
}

ZeroProbes detect_zero_set(const SynthResult& r, const ProcessSpec& spec, int k_min) {
    const ZeroCoordinate z = zero_coordinate(r, spec);
    const SamplePath& grid = r.path;
    const double gap = std::ldexp(1.0, 1 - k_min);
    const std::size_t n = z.values.size();
    auto thin = [&](const std::vector<std::size_t>& idx) {
        std::vector<double> out;
        for (auto i : idx)
            if (out.empty() || grid.time(i) - out.back() >= gap) out.push_back(grid.time(i));
        return out;
    };
    std::vector<std::size_t> zc, nc;
    double scale = 0.0;
    for (double v : z.values) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) {
        const double v = z.values[i];
        const bool zero = z.sign_change ? (v == 0.0 || (i + 1 < n && v * z.values[i + 1] < 0.0)) : v <= z.eps;
        if (zero) zc.push_back(i);
        else if (std::abs(v) >= 0.25 * scale) nc.push_back(i);
    }
    ZeroProbes p;
    p.zeros = thin(zc);
    const auto far = thin(nc);
    const std::size_t want = std::min(far.size(), std::max<std::size_t>(p.zeros.size(), 4));
    for (std::size_t i = 0; i < want; ++i) {
        const auto k = static_cast<std::size_t>((static_cast<double>(i) + 0.5) * static_cast<double>(far.size()) /
                                                static_cast<double>(want));
        p.nonzeros.push_back(far[k]);
    }
    return p;
}

Target target_from_json(const json& j) {
    Target t;
    if (j.contains("catalog")) {
        t.lower = t.upper = analytic_frontier(catalog_key_from_json(j.at("catalog")), j.value("classic", false));
    } else if (j.contains("frontier")) {
        t.lower = t.upper = frontier_from_json(j.at("frontier"));
    } else if (j.contains("chain")) {
        FrontierPL f = exact_of(target_from_json(j.at("chain").at("base")), "chain");
        for (const auto& op : j.at("chain").value("ops", json::array())) f = apply_op(f, op);
        t.lower = t.upper = f;
    } else if (j.contains("min")) {
        FrontierPL f = FrontierPL::infinite();
        for (const auto& e : j.at("min")) f = frontier_min(f, exact_of(target_from_json(e), "min"));
        t.lower = t.upper = f;
    } else if (j.contains("compose_lower")) {
        const auto& c = j.at("compose_lower");
        const FrontierPL ff = exact_of(target_from_json(c.at("f")), "compose_lower f");
        const FrontierPL fg = exact_of(target_from_json(c.at("g")), "compose_lower g");
        const auto ef = exponents_of(ff), eg = exponents_of(fg);
        t.lower = frontier_compose_lower(ff, fg, c.value("alpha_f_pt", ef.pointwise), c.value("alpha_g_pt", eg.pointwise),
                                         c.value("alpha_g_loc", eg.local), c.value("alpha_f_loc", ef.local));
        t.upper = FrontierPL::infinite();
    } else if (j.contains("bounds")) {
        const auto& b = j.at("bounds");
        if (b.contains("lower")) t.lower = target_from_json(b.at("lower")).lower;
        else t.lower = FrontierPL::affine(0.0, -1e300);
        t.upper = b.contains("upper") ? target_from_json(b.at("upper")).upper : FrontierPL::infinite();
    } else if (j.contains("sde_bounds")) {
        const auto& b = j.at("sde_bounds");
        const auto fb = sde_frontier_bounds(b.at("alpha_a").get<double>(), b.at("alpha_b").get<double>(),
                                            sde_case_from_string(b.at("case").get<std::string>()));
        t.lower = fb.lower;
        t.upper = fb.upper;
    } else if (j.contains("value")) {
        t.has_value = true;
        t.value_lo = t.value_hi = j.at("value").get<double>();
    } else if (j.contains("value_range")) {
        t.has_value = true;
        t.value_lo = j.at("value_range").at(0).get<double>();
        t.value_hi = j.at("value_range").at(1).get<double>();
    } else if (j.value("half_plus_hurst", false)) {
        t.half_plus_hurst = true;
    } else if (j.contains("fraction")) {
        t.fraction = true;
        t.value_lo = j.at("fraction").get<double>();
        t.value_hi = 1.0;
    } else {
        throw std::invalid_argument("expectation: unrecognised form " + j.dump());
    }
    return t;
}

Target target_for_group(const ExperimentConfig& c, const std::string& probe) {
    if (!c.probes.zero_set && !c.probes.expectations.empty())
        for (std::size_t i = 0; i < c.probes.times.size(); ++i)
            if (time_label(c.probes.times[i]) == probe) return target_from_json(c.probes.expectations[i]);
    return target_from_json(c.expectation);
}

SamplePath produce_path(const ExperimentConfig& c, std::uint64_t seed, std::optional<SynthResult>* full) {
    std::optional<SamplePath> path;
    if (c.process) {
        ProcessSpec s = *c.process;
        s.seed = seed;
        SynthResult r = synth_all(s);
        path = c.component.empty() ? r.path : r.components.at(c.component);
        if (full) full->emplace(std::move(r));
    } else {
        path = render(*c.detfun, c.grid);
    }
    for (const auto& t : c.transforms) {
        if (t.op == "frac_integral") {
            path = frac_integral(*path, t.args.at("order").get<double>(), t.args.value("base_index", std::size_t{0}));
        } else if (t.op == "envelope") {
            path = envelope_multiply(*path, t.args.at("t0").get<double>(), t.args.at("gamma").get<double>());
        } else if (t.op == "primitive") {
            path = primitive(*path);
        } else if (t.op == "realized_qv") {
            path = realized_qv(*path, t.args.value("block", std::size_t{1}));
        } else if (t.op == "square" || t.op == "scale" || t.op == "add_detfun") {
            std::vector<double> v = path->values();
            if (t.op == "square") {
                for (auto& x : v) x *= x;
            } else if (t.op == "scale") {
                const double k = t.args.at("c").get<double>();
                for (auto& x : v) x *= k;
            } else {
                const auto g = render(detfun_from_json(t.args.at("spec")), {path->t_start(), path->t_end(), path->size()});
                for (std::size_t i = 0; i < v.size(); ++i) v[i] += g[i];
            }
            path = SamplePath(path->t_start(), path->t_end(), std::move(v), path->label() + "+" + t.op);
        } else {
            throw std::invalid_argument("transform: unknown op '" + t.op + "'");
        }
    }
    return *path;
}

void validate(const ExperimentConfig& c) {
    auto fail = [&](const std::string& m) { throw std::invalid_argument("config '" + c.name + "': " + m); };
    if (c.name.empty()) throw std::invalid_argument("config: name is required");
    if (!(c.tolerance > 0.0)) fail("tolerance must be > 0");
    if (c.seed_count < 1) fail("seeds must be >= 1");
    if (c.process.has_value() == c.detfun.has_value()) fail("exactly one of process and detfun is required");
    if (c.process) validate(*c.process);
    if (c.detfun) validate(*c.detfun);
    if (c.measure == Measure::frontier && c.s_grid.empty()) fail("frontier measure needs an s_grid");
    const bool needs_zero = c.probes.zero_set || c.measure == Measure::zero_presence;
    if (needs_zero && !(c.process && zero_capable(c.process->kind))) fail("zero-set probes need a zero-sensitive process");
    if (c.measure == Measure::oscillation_lower && !c.process) fail("oscillation check needs a process");
    if (c.measure == Measure::oscillation_lower && c.r_min >= c.r_max) fail("r_min must be < r_max");
    const bool per_probe = c.measure == Measure::frontier || c.measure == Measure::local || c.measure == Measure::pointwise;
    if (per_probe && !c.probes.zero_set) {
        if (c.probes.times.empty()) fail("probe times are required");
        const double lo = c.process ? 0.0 : c.grid.t_start;
        const double hi = c.process ? c.process->t_end : c.grid.t_end;
        for (double t : c.probes.times)
            if (t < lo || t > hi) fail("probe time outside the path domain");
        if (!c.probes.expectations.empty() && c.probes.expectations.size() != c.probes.times.size())
            fail("one expectation per probe time is required");
    }
    for (const auto& e : c.probes.expectations) target_from_json(e);
    const Target t = target_from_json(c.expectation);
    if (t.half_plus_hurst && !(c.measure == Measure::pointwise && c.process)) fail("half_plus_hurst needs a pointwise measure");
    if (t.fraction != (c.measure == Measure::oscillation_lower || c.measure == Measure::zero_presence))
        fail("fraction expectations go with oscillation_lower/zero_presence measures");
}

ExperimentReport run(const ExperimentConfig& c) {
    validate(c);
    const auto start = std::chrono::steady_clock::now();
    std::vector<SeedResult> seeds(c.seed_count);
    parallel_for(c.seed_count, [&](std::size_t i) {
        try {
            seeds[i] = run_seed(c, derive_seed(c.master_seed, i));
        } catch (const std::exception& e) {
            throw std::runtime_error("config '" + c.name + "', seed #" + std::to_string(i) + ": " + e.what());
        }
    });

    ExperimentReport r;
    r.name = c.name;
    r.anchor = c.anchor;
    r.measure = to_string(c.measure);
    r.tolerance = c.tolerance;
    const auto grid = grid_of(c);
    bool all = true;
    for (const auto& g : group_names(c)) {
        const Target t = target_for_group(c, g);
        std::vector<double> exp_seeds;
        for (const auto& s : seeds)
            if (auto it = s.expected.find(g); it != s.expected.end()) exp_seeds.push_back(it->second);
        const std::size_t width = (c.measure == Measure::frontier) ? grid.size() : 1;
        for (std::size_t i = 0; i < width; ++i) {
            std::vector<double> col;
            for (const auto& s : seeds)
                if (auto it = s.values.find(g); it != s.values.end()) col.push_back(it->second[i]);
            ReportRow row;
            row.probe = g;
            row.s_prime = c.measure == Measure::frontier ? grid[i] : kNaN;
            if (t.fraction) {
                double hits = 0.0;
                for (double v : col) hits += v;
                row.estimate = col.empty() ? 0.0 : hits / static_cast<double>(col.size());
            } else {
                row.estimate = median(col);
            }
            double lo = kNaN, hi = kNaN;
            if (t.has_value || t.fraction) {
                lo = t.value_lo;
                hi = t.value_hi;
            } else if (t.half_plus_hurst) {
                lo = hi = median(exp_seeds);
            } else if (c.measure == Measure::frontier) {
                lo = t.lower(grid[i]);
                hi = t.upper(grid[i]);
            } else if (c.measure == Measure::local) {
                lo = t.lower(0.0);
                hi = t.upper(0.0);
            } else {
                lo = exponents_of(t.lower).pointwise;
                hi = exponents_of(t.upper).pointwise;
            }
            row.expected_lower = lo;
            row.expected_upper = hi;
            row.abs_error = distance(row.estimate, lo, hi);
            row.pass = t.fraction ? row.abs_error == 0.0 : row.abs_error <= c.tolerance;
            all = all && row.pass;
            r.rows.push_back(row);
        }
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        json s;
        s["seed_index"] = i;
        for (const auto& [g, v] : seeds[i].values) {
            json arr = json::array();
            for (double x : v) arr.push_back(enc(x));
            s["values"][g] = arr;
        }
        r.per_seed.push_back(s);
    }
    r.pass = all && !r.rows.empty();
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

std::string to_string(Measure m) {
    switch (m) {
    case Measure::frontier: return "frontier";
    case Measure::local: return "local";
    case Measure::pointwise: return "pointwise";
    case Measure::oscillation_lower: return "oscillation_lower";
    case Measure::zero_presence: return "zero_presence";
    }
    return "?";
}

Measure measure_from_string(const std::string& s) {
    for (auto m : {Measure::frontier, Measure::local, Measure::pointwise, Measure::oscillation_lower, Measure::zero_presence})
        if (s == to_string(m)) return m;
    throw std::invalid_argument("config: unknown measure '" + s + "'");
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.name = j.at("name").get<std::string>();
    c.anchor = j.value("anchor", std::string{});
    if (j.contains("process")) c.process = process_from_json(j.at("process"));
    if (j.contains("detfun")) c.detfun = detfun_from_json(j.at("detfun"));
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.grid = {g.value("t_start", 0.0), g.value("t_end", 1.0), g.at("n").get<std::size_t>()};
    }
    c.component = j.value("component", std::string{});
    for (const auto& t : j.value("transforms", json::array())) {
        Transform tr;
        tr.op = t.at("op").get<std::string>();
        tr.args = t;
        c.transforms.push_back(tr);
    }
    if (j.contains("probes")) {
        const auto& p = j.at("probes");
        if (p.contains("times")) c.probes.times = p.at("times").get<std::vector<double>>();
        if (p.contains("expectations"))
            for (const auto& e : p.at("expectations")) c.probes.expectations.push_back(e);
        if (p.contains("zero_set")) {
            c.probes.zero_set = true;
            const auto side = p.at("zero_set").get<std::string>();
            if (side != "zeros" && side != "nonzeros") throw std::invalid_argument("config: zero_set must be zeros or nonzeros");
            c.probes.zero_side = side == "zeros";
        }
    }
    c.measure = measure_from_string(j.value("measure", std::string{"frontier"}));
    c.s_grid = j.value("s_grid", std::vector<double>{});
    if (j.contains("seeds")) {
        c.seed_count = j.at("seeds").value("count", std::size_t{1});
        c.master_seed = j.at("seeds").value("master", std::uint64_t{0});
    }
    c.expectation = j.at("expectation");
    c.tolerance = j.at("tolerance").get<double>();
    if (j.contains("window")) {
        const auto& w = j.at("window");
        const auto method = w.value("method", std::string{"envelope_regression"});
        if (method == "envelope_regression") c.window.method = FrontierMethod::envelope_regression;
        else if (method == "min_cells") c.window.method = FrontierMethod::min_cells;
        else throw std::invalid_argument("config: unknown estimator method '" + method + "'");
        c.window.j_min = w.value("j_min", c.window.j_min);
        c.window.j_max = w.value("j_max", c.window.j_max);
        c.window.k_min = w.value("k_min", c.window.k_min);
        c.window.k_max = w.value("k_max", c.window.k_max);
        c.window.diag_gap = w.value("diag_gap", c.window.diag_gap);
        c.window.gaussian_modulus = w.value("gaussian_modulus", false);
        c.detrend = w.value("detrend", false);
    }
    if (j.contains("oscillation")) {
        const auto& o = j.at("oscillation");
        c.eps = o.value("eps", c.eps);
        c.r_min = o.value("r_min", c.r_min);
        c.r_max = o.value("r_max", c.r_max);
    }
    c.expect_zeros = j.value("expect_zeros", c.expect_zeros);
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open config " + file);
    try {
        return config_from_json(json::parse(in));
    } catch (const std::exception& e) {
        throw std::runtime_error(file + ": " + e.what());
    }
}

std::vector<std::string> config_files(const std::string& path) {
    if (!fs::exists(path)) throw std::runtime_error("no such config path " + path);
    if (!fs::is_directory(path)) return {path};
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(path))
        if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path().string());
    std::sort(out.begin(), out.end());
    return out;
}

json environment_stamp() {
    return {{"library", "microloc 1.0.0"},
            {"compiler", __VERSION__},
            {"cxx_standard", static_cast<long>(__cplusplus)},
            {"build_type", MICROLOC_BUILD_TYPE},
            {"rng", "philox4x32-10"}};
}

json to_json(const ExperimentReport& r) {
    json j;
    j["name"] = r.name;
    j["anchor"] = r.anchor;
    j["measure"] = r.measure;
    j["tolerance"] = r.tolerance;
    j["verdict"] = r.pass ? "pass" : "fail";
    j["rows"] = json::array();
    for (const auto& row : r.rows)
        j["rows"].push_back({{"probe", row.probe},
                             {"s_prime", enc(row.s_prime)},
                             {"median_estimate", enc(row.estimate)},
                             {"expected_lower", enc(row.expected_lower)},
                             {"expected_upper", enc(row.expected_upper)},
                             {"abs_error", enc(row.abs_error)},
                             {"verdict", row.pass ? "pass" : "fail"}});
    j["per_seed"] = r.per_seed;
    j["environment"] = environment_stamp();
    return j;
}

ExperimentReport report_from_json(const json& j) {
    ExperimentReport r;
    r.name = j.at("name").get<std::string>();
    r.anchor = j.value("anchor", std::string{});
    r.measure = j.value("measure", std::string{});
    r.tolerance = j.value("tolerance", 0.0);
    r.pass = j.at("verdict").get<std::string>() == "pass";
    for (const auto& x : j.at("rows")) {
        ReportRow row;
        row.probe = x.at("probe").get<std::string>();
        row.s_prime = dec(x.at("s_prime"));
        row.estimate = dec(x.at("median_estimate"));
        row.expected_lower = dec(x.at("expected_lower"));
        row.expected_upper = dec(x.at("expected_upper"));
        row.abs_error = dec(x.at("abs_error"));
        row.pass = x.at("verdict").get<std::string>() == "pass";
        r.rows.push_back(row);
    }
    r.per_seed = j.value("per_seed", json::array());
    return r;
}

void write_report_csv(std::ostream& os, const ExperimentReport& r) {
    os << "probe,s_prime,median_estimate,expected_lower,expected_upper,abs_error,verdict\n";
    for (const auto& row : r.rows)
        os << row.probe << ',' << fmt("%.17g", row.s_prime) << ',' << fmt("%.17g", row.estimate) << ','
           << fmt("%.17g", row.expected_lower) << ',' << fmt("%.17g", row.expected_upper) << ','
           << fmt("%.17g", row.abs_error) << ',' << (row.pass ? "pass" : "fail") << '\n';
}

std::string frontier_svg(const ExperimentReport& r, const std::string& probe, const Target& t) {
    constexpr double W = 480, H = 320, L = 50, R = 20, T = 30, B = 40;
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : r.rows)
        if (row.probe == probe && std::isfinite(row.s_prime)) pts.push_back({row.s_prime, row.estimate});
    if (pts.empty()) return {};
    double x0 = pts.front().first, x1 = pts.front().first;
    for (auto [x, y] : pts) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
    }
    x0 -= 0.25;
    x1 += 0.25;
    constexpr int kSamples = 200;
    auto sample = [&](const FrontierPL& f) {
        std::vector<std::pair<double, double>> v;
        if (f.is_infinite()) return v;
        for (int i = 0; i <= kSamples; ++i) {
            const double s = x0 + (x1 - x0) * i / kSamples;
            const double y = f(s);
            if (std::isfinite(y) && y > -1e100) v.push_back({s, y});
        }
        return v;
    };
    const auto lo = sample(t.lower), hi = sample(t.upper);
    double y0 = kInf, y1 = -kInf;
    for (const auto* set : {&std::as_const(pts), &lo, &hi})
        for (auto [x, y] : *set)
            if (std::isfinite(y)) {
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
    if (!std::isfinite(y0)) {
        y0 = 0.0;
        y1 = 1.0;
    }
    if (y1 - y0 < 0.5) y1 = y0 + 0.5;
    y0 -= 0.1;
    y1 += 0.1;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    svg_text(os, W / 2, 18, r.name + " (" + probe + ")");
    svg_text(os, W / 2, H - 8, "s'");
    svg_text(os, L, H - B + 14, fmt("%.2f", x0));
    svg_text(os, W - R, H - B + 14, fmt("%.2f", x1));
    svg_text(os, L - 4, H - B, fmt("%.2f", y0), "end");
    svg_text(os, L - 4, T + 4, fmt("%.2f", y1), "end");
    auto polyline = [&](const std::vector<std::pair<double, double>>& v, const char* colour) {
        if (v.empty()) return;
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : v) os << fmt("%.2f", px(x)) << ',' << fmt("%.2f", py(y)) << ' ';
        os << "\"/>\n";
    };
    polyline(lo, "steelblue");
    if (!frontier_equal(t.lower, t.upper)) polyline(hi, "seagreen");
    for (auto [x, y] : pts)
        if (std::isfinite(y))
            os << "<circle cx=\"" << fmt("%.2f", px(x)) << "\" cy=\"" << fmt("%.2f", py(y))
               << "\" r=\"3.5\" fill=\"firebrick\"/>\n";
    os << "</svg>\n";
    return os.str();
}

std::vector<std::string> write_report(const ExperimentReport& r, const ExperimentConfig& c, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    {
        std::ofstream js(dir / (r.name + ".json"));
        js << to_json(r).dump(2) << '\n';
    }
    {
        std::ofstream csv(dir / (r.name + ".csv"));
        write_report_csv(csv, r);
    }
    std::vector<std::string> plots;
    if (c.measure != Measure::frontier) return plots;
    for (const auto& g : group_names(c)) {
        const std::string svg = frontier_svg(r, g, target_for_group(c, g));
        if (svg.empty()) continue;
        const std::string file = r.name + "_" + sanitize(g) + ".svg";
        std::ofstream os(dir / file);
        os << svg;
        plots.push_back(file);
    }
    return plots;
}

SuiteResult verify(const std::string& config_path, const std::string& out_dir) {
    SuiteResult s;
    s.all_pass = true;
    json runtime;
    runtime["threads"] = thread_count();
    double total = 0.0;
    std::ostringstream summary;
    summary << "name,measure,verdict,max_abs_error\n";
    for (const auto& file : config_files(config_path)) {
        const ExperimentConfig c = load_config(file);
        ExperimentReport r = run(c);
        if (!out_dir.empty()) write_report(r, c, out_dir);
        double worst = 0.0;
        for (const auto& row : r.rows) worst = std::max(worst, row.abs_error);
        summary << r.name << ',' << r.measure << ',' << (r.pass ? "pass" : "fail") << ',' << fmt("%.6g", worst) << '\n';
        runtime["configs"][r.name] = r.runtime_s;
        total += r.runtime_s;
        s.all_pass = s.all_pass && r.pass;
        s.reports.push_back(std::move(r));
    }
    runtime["total_s"] = total;
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream(fs::path(out_dir) / "summary.csv") << summary.str();
        std::ofstream(fs::path(out_dir) / "runtime.json") << runtime.dump(2) << '\n';
    }
    return s;
}

std::string summarize_reports(const std::string& dir) {
    std::vector<ExperimentReport> reports;
    for (const auto& file : config_files(dir)) {
        std::ifstream in(file);
        const json j = json::parse(in);
        if (!j.is_object() || !j.contains("rows")) continue;
        reports.push_back(report_from_json(j));
    }
    std::ostringstream os;
    std::size_t passed = 0;
    os << "| experiment | measure | verdict | worst error | tolerance | anchor |\n|---|---|---|---|---|---|\n";
    for (const auto& r : reports) {
        double worst = 0.0;
        for (const auto& row : r.rows) worst = std::max(worst, row.abs_error);
        passed += r.pass;
        os << "| " << r.name << " | " << r.measure << " | " << (r.pass ? "pass" : "FAIL") << " | " << fmt("%.4g", worst)
           << " | " << fmt("%.4g", r.tolerance) << " | " << r.anchor << " |\n";
    }
    os << "\n" << passed << "/" << reports.size() << " experiments pass\n";
    return os.str();
}

} // namespace microloc
