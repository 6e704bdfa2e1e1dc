// Command-line front end: synth, estimate, frontier, verify, report.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "microloc/catalog.hpp"
#include "microloc/detfun.hpp"
#include "microloc/estimate.hpp"
#include "microloc/harness.hpp"
#include "microloc/sample_path.hpp"
#include "microloc/synth.hpp"

using namespace microloc;
using nlohmann::json;

namespace {

json read_json_arg(const std::string& arg) {
    std::ifstream in(arg);
    if (in) return json::parse(in);
    return json::parse(arg);
}

std::vector<double> parse_sgrid(const std::string& s) {
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(s);
    if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0) || b < a)
        throw std::invalid_argument("--sgrid must be A:B:STEP with A <= B and STEP > 0");
    std::vector<double> g;
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= count; ++i) g.push_back(a + static_cast<double>(i) * step);
    return g;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo 2-microlocal frontier toolkit"};
    app.require_subcommand(1);

    std::string spec_file, out_file;
    auto* synth_cmd = app.add_subcommand("synth", "Synthesize a path from a JSON spec (process or detfun+grid)");
    synth_cmd->add_option("--spec", spec_file, "spec JSON file")->required();
    synth_cmd->add_option("--out", out_file, "output CSV")->required();

    std::string path_file, sgrid = "-1:1:0.25", method = "envelope_regression";
    double t0 = 0.0;
    FitWindow win;
    bool detrend = false;
    auto* est_cmd = app.add_subcommand("estimate", "Estimate the frontier of a CSV path at t0");
    est_cmd->add_option("--path", path_file, "input CSV (t,value)")->required();
    est_cmd->add_option("--t0", t0, "base point")->required();
    est_cmd->add_option("--sgrid", sgrid, "A:B:STEP");
    est_cmd->add_option("--out", out_file, "output CSV (stdout if omitted)");
    est_cmd->add_option("--method", method, "envelope_regression | min_cells");
    est_cmd->add_option("--jmin", win.j_min);
    est_cmd->add_option("--jmax", win.j_max);
    est_cmd->add_option("--kmin", win.k_min);
    est_cmd->add_option("--kmax", win.k_max);
    est_cmd->add_flag("--gaussian-modulus", win.gaussian_modulus, "apply the Gaussian modulus correction");
    est_cmd->add_flag("--detrend", detrend, "detrend the pointwise estimate");

    std::string key_arg;
    bool classic = false;
    auto* fr_cmd = app.add_subcommand("frontier", "Print an analytic frontier for a catalog key");
    fr_cmd->add_option("--key", key_arg, "catalog key as JSON text or file")->required();
    fr_cmd->add_flag("--classic", classic, "classic instead of pseudo frontier");

    std::string config_path, out_dir;
    auto* ver_cmd = app.add_subcommand("verify", "Run experiment config(s); exit 0 all pass, 1 any fail, 2 error");
    ver_cmd->add_option("--config", config_path, "config file or directory")->required();
    ver_cmd->add_option("--out", out_dir, "report directory");

    std::string report_dir;
    auto* rep_cmd = app.add_subcommand("report", "Summarize the reports in a directory");
    rep_cmd->add_option("--dir", report_dir, "report directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth_cmd) {
            const json j = read_json_arg(spec_file);
            if (j.contains("process") || j.contains("detfun")) {
                ExperimentConfig c;
                if (j.contains("process")) c.process = process_from_json(j.at("process"));
                if (j.contains("detfun")) {
                    c.detfun = detfun_from_json(j.at("detfun"));
                    const auto& g = j.at("grid");
                    c.grid = {g.value("t_start", 0.0), g.value("t_end", 1.0), g.at("n").get<std::size_t>()};
                }
                c.component = j.value("component", std::string{});
                const std::uint64_t seed = c.process ? c.process->seed : 0;
                write_csv(out_file, produce_path(c, seed));
            } else {
                write_csv(out_file, synth(process_from_json(j)));
            }
            return 0;
        }
        if (*est_cmd) {
            if (method == "min_cells") win.method = FrontierMethod::min_cells;
            else if (method != "envelope_regression") throw std::invalid_argument("unknown --method " + method);
            const SamplePath p = read_csv(path_file);
            const auto grid = parse_sgrid(sgrid);
            const auto e = estimate_frontier(p, t0, grid, win);
            if (out_file.empty()) write_csv(std::cout, e);
            else write_csv(out_file, e);
            std::cerr << "local " << e.local_hat << "  pointwise " << estimate_pointwise(p, t0, win, detrend) << '\n';
            return 0;
        }
        if (*fr_cmd) {
            const CatalogKey key = catalog_key_from_json(read_json_arg(key_arg));
            const FrontierPL f = analytic_frontier(key, classic);
            const auto ex = exponents_of(f);
            std::cout << to_string(f) << '\n' << to_json(f).dump() << '\n'
                      << "pointwise " << ex.pointwise << "  local " << ex.local << '\n';
            return 0;
        }
        if (*ver_cmd) {
            const SuiteResult s = verify(config_path, out_dir);
            for (const auto& r : s.reports) std::cout << (r.pass ? "pass  " : "FAIL  ") << r.name << '\n';
            return s.all_pass ? 0 : 1;
        }
        if (*rep_cmd) {
            std::cout << summarize_reports(report_dir);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
