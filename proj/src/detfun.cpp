#include "microloc/detfun.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "microloc/parallel.hpp"

namespace microloc {

namespace {

double get(const DetFunSpec& s, const char* name, double fallback) {
    auto it = s.params.find(name);
    return it == s.params.end() ? fallback : it->second;
}

double need(const DetFunSpec& s, const char* name) {
    auto it = s.params.find(name);
    if (it == s.params.end()) throw std::invalid_argument(std::string("detfun: missing parameter '") + name + "'");
    return it->second;
}

double cantor(double alpha, int depth, double u) {
    if (u <= 0.0 || u > 0.5) return u;
    int e = 0;
    const double m = std::frexp(u, &e);
    // u lies in (2^-(N+1), 2^-N].
    const int level = (m == 0.5) ? 1 - e : -e;
    if (level > depth) return u;
    const double right = std::ldexp(1.0, -level);
    const double width = std::pow(alpha / 2.0, level + 1);
    if (u <= right - width) return 0.5 * right;
    return right - (right - u) * std::pow(alpha, -(level + 1));
}

} // namespace

void validate(const DetFunSpec& spec) {
    switch (spec.kind) {
    case DetFunKind::chirp:
        if (!(need(spec, "alpha") > 0) || !(need(spec, "beta") > 0))
            throw std::invalid_argument("detfun: chirp needs alpha > 0 and beta > 0");
        break;
    case DetFunKind::power:
        if (!(need(spec, "alpha") >= 0)) throw std::invalid_argument("detfun: power needs alpha >= 0");
        break;
    case DetFunKind::cantor_f_alpha: {
        double a = need(spec, "alpha");
        // below 2^-8 the ramps fall under double precision within a few levels
        if (!(a >= 1.0 / 256.0 && a < 1)) throw std::invalid_argument("detfun: cantor needs alpha in [2^-8, 1)");
        if (spec.depth < 1) throw std::invalid_argument("detfun: cantor needs depth >= 1");
        break;
    }
    case DetFunKind::identity:
    case DetFunKind::polynomial: break;
    }
}

double evaluate(const DetFunSpec& spec, double t) {
    switch (spec.kind) {
    case DetFunKind::chirp: {
        const double d = std::abs(t - get(spec, "t0", 0.0));
        if (d == 0.0) return 0.0;
        return std::pow(d, spec.params.at("alpha")) * std::sin(std::pow(d, -spec.params.at("beta")));
    }
    case DetFunKind::power: return std::pow(std::abs(t - get(spec, "t0", 0.0)), spec.params.at("alpha"));
    case DetFunKind::cantor_f_alpha: return cantor(spec.params.at("alpha"), spec.depth, t);
    case DetFunKind::identity: return t;
    case DetFunKind::polynomial: {
        const double x = t - get(spec, "t0", 0.0);
        double acc = 0.0;
        for (int k = 31; k >= 0; --k) acc = acc * x + get(spec, ("c" + std::to_string(k)).c_str(), 0.0);
        return acc;
    }
    }
    return 0.0;
}

SamplePath render(const DetFunSpec& spec, const Grid& grid) {
    validate(spec);
    if (grid.n < 2 || !(grid.t_end > grid.t_start)) throw std::invalid_argument("render: invalid grid");
    if (spec.kind == DetFunKind::cantor_f_alpha && grid.t_start != 0.0)
        throw std::invalid_argument("render: cantor function requires t_start = 0");
    std::vector<double> v(grid.n);
    const double dt = (grid.t_end - grid.t_start) / static_cast<double>(grid.n - 1);
    for (std::size_t i = 0; i < grid.n; ++i) v[i] = evaluate(spec, grid.t_start + static_cast<double>(i) * dt);
    return SamplePath(grid.t_start, grid.t_end, std::move(v), to_string(spec.kind));
}

SamplePath frac_integral(const SamplePath& path, double order, std::size_t base_index) {
    if (!(order > 0.0 && order <= 1.0)) throw std::invalid_argument("frac_integral: order must lie in (0,1]");
    const std::size_t n = path.size();
    if (base_index >= n) throw std::invalid_argument("frac_integral: base index outside grid");
    const double scale = std::pow(path.dt(), order) / (order * std::tgamma(order));
    std::vector<double> w(n, 0.0);
    for (std::size_t l = 1; l < n; ++l)
        w[l] = scale * (std::pow(static_cast<double>(l), order) - std::pow(static_cast<double>(l - 1), order));

    std::vector<double> out(n, 0.0);
    const auto& f = path.values();
    constexpr std::size_t chunk = 256;
    const std::size_t chunks = (n + chunk - 1) / chunk;
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t end = std::min(n, (c + 1) * chunk);
        for (std::size_t k = std::max(c * chunk, base_index + 1); k < end; ++k) {
            double acc = 0.0;
            for (std::size_t i = base_index; i < k; ++i) acc += f[i] * w[k - i];
            out[k] = acc;
        }
    });
    return SamplePath(path.t_start(), path.t_end(), std::move(out), path.label() + "|I^" + std::to_string(order));
}

SamplePath envelope_multiply(const SamplePath& path, double t0, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("envelope_multiply: gamma must be >= 0");
    if (t0 < path.t_start() || t0 > path.t_end()) throw std::invalid_argument("envelope_multiply: t0 outside grid");
    const double f0 = path[path.index_of(t0)];
    std::vector<double> out(path.size());
    for (std::size_t i = 0; i < path.size(); ++i)
        out[i] = std::pow(std::abs(path.time(i) - t0), gamma) * (path[i] - f0);
    return SamplePath(path.t_start(), path.t_end(), std::move(out), path.label() + "|env");
}

SamplePath primitive(const SamplePath& path) {
    std::vector<double> out(path.size(), 0.0);
    const double h = 0.5 * path.dt();
    for (std::size_t i = 1; i < path.size(); ++i) out[i] = out[i - 1] + h * (path[i - 1] + path[i]);
    return SamplePath(path.t_start(), path.t_end(), std::move(out), path.label() + "|prim");
}

SamplePath realized_qv(const SamplePath& path, std::size_t block) {
    if (block < 1) throw std::invalid_argument("realized_qv: block must be >= 1");
    const std::size_t m = (path.size() - 1) / block;
    if (m < 1) throw std::invalid_argument("realized_qv: block larger than the path");
    std::vector<double> out(m + 1, 0.0);
    for (std::size_t i = 1; i <= m; ++i) {
        const double d = path[i * block] - path[(i - 1) * block];
        out[i] = out[i - 1] + d * d;
    }
    const double t_end = path.t_start() + static_cast<double>(m * block) * path.dt();
    return SamplePath(path.t_start(), t_end, std::move(out), path.label() + "|qv");
}

std::string to_string(DetFunKind k) {
    switch (k) {
    case DetFunKind::chirp: return "chirp";
    case DetFunKind::power: return "power";
    case DetFunKind::cantor_f_alpha: return "cantor_f_alpha";
    case DetFunKind::identity: return "identity";
    case DetFunKind::polynomial: return "polynomial";
    }
    return "?";
}

DetFunKind detfun_kind_from_string(const std::string& s) {
    for (auto k : {DetFunKind::chirp, DetFunKind::power, DetFunKind::cantor_f_alpha, DetFunKind::identity,
                   DetFunKind::polynomial})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("detfun: unknown kind '" + s + "'");
}

nlohmann::json to_json(const DetFunSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    j["params"] = nlohmann::json::object();
    for (const auto& [k, v] : spec.params) j["params"][k] = v;
    if (spec.kind == DetFunKind::cantor_f_alpha) j["depth"] = spec.depth;
    return j;
}

DetFunSpec detfun_from_json(const nlohmann::json& j) {
    DetFunSpec spec;
    spec.kind = detfun_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("params"))
        for (const auto& [k, v] : j.at("params").items()) spec.params[k] = v.get<double>();
    spec.depth = j.value("depth", spec.depth);
    validate(spec);
    return spec;
}

} // namespace microloc
