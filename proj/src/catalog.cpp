#include "microloc/catalog.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace microloc {

namespace {

struct KindRule {
    CatalogKind kind;
    const char* name;
    std::vector<std::set<std::string>> param_sets; // any one set is accepted
    std::set<CatalogCase> cases;
};

using C = CatalogCase;

const std::vector<KindRule>& rules() {
    static const std::vector<KindRule> table = {
        {CatalogKind::chirp, "chirp", {{"alpha", "beta"}}, {C::generic}},
        {CatalogKind::power, "power", {{"alpha"}}, {C::generic, C::at_zero}},
        {CatalogKind::cantor_f_alpha, "cantor_f_alpha", {{"alpha"}}, {C::generic, C::at_zero}},
        {CatalogKind::brownian, "brownian", {{}}, {C::generic}},
        {CatalogKind::square_brownian_at0, "square_brownian_at0", {{}}, {C::generic, C::at_zero}},
        {CatalogKind::mbm, "mbm", {{"H"}}, {C::generic}},
        {CatalogKind::ou, "ou", {{}}, {C::generic}},
        {CatalogKind::besq, "besq", {{"delta"}}, {C::at_zero, C::nonzero}},
        {CatalogKind::heston_price, "heston_price", {{}}, {C::at_zero, C::nonzero}},
        {CatalogKind::heston_vol, "heston_vol", {{}}, {C::at_zero, C::nonzero}},
        {CatalogKind::time_changed_bm, "time_changed_bm", {{"alpha"}, {"abs_m"}}, {C::generic}},
        {CatalogKind::stoch_int_bm, "stoch_int_bm", {{}, {"H"}}, {C::nonzero, C::at_zero, C::locally_zero}},
        {CatalogKind::sde_bound, "sde_bound", {{"alpha_a", "alpha_b", "b_at_zero"}},
         {C::nonzero, C::at_zero, C::locally_zero}},
    };
    return table;
}

const KindRule& rule_for(CatalogKind k) {
    for (const auto& r : rules())
        if (r.kind == k) return r;
    throw std::invalid_argument("catalog: unknown kind");
}

double param(const CatalogKey& key, const char* name) { return key.params.at(name); }

FrontierPL pl(std::vector<AffinePiece> pieces) { return FrontierPL::from_pieces(std::move(pieces)); }

FrontierPL half_half() { return pl({{1.0, 0.5}, {0.0, 0.5}}); }
FrontierPL one_half() { return pl({{1.0, 1.0}, {0.0, 0.5}}); }

// Piece (1, 1/(c (1-x)_+)) or nothing when (1-x)_+ = 0.
void push_inverse_piece(std::vector<AffinePiece>& pieces, double c, double x) {
    if (x < 1.0) pieces.push_back({1.0, 1.0 / (c * (1.0 - x))});
}

bool is_even_integer(double a) { return a == std::floor(a) && std::fmod(a, 2.0) == 0.0; }

} // namespace

void validate(const CatalogKey& key) {
    const auto& rule = rule_for(key.kind);
    std::set<std::string> names;
    for (const auto& [k, v] : key.params) {
        if (!std::isfinite(v)) throw std::invalid_argument("catalog: parameter '" + k + "' is not finite");
        names.insert(k);
    }
    bool matched = false;
    for (const auto& s : rule.param_sets) matched = matched || s == names;
    if (!matched) throw std::invalid_argument(std::string("catalog: wrong parameter names for kind ") + rule.name);
    if (!rule.cases.count(key.case_))
        throw std::invalid_argument(std::string("catalog: case ") + to_string(key.case_) + " not defined for kind " +
                                    rule.name);

    auto require = [&](bool ok, const char* msg) {
        if (!ok) throw std::invalid_argument(std::string("catalog: ") + msg);
    };
    switch (key.kind) {
    case CatalogKind::chirp:
        require(param(key, "alpha") > 0 && param(key, "beta") > 0, "chirp needs alpha > 0 and beta > 0");
        break;
    case CatalogKind::power: require(param(key, "alpha") > 0, "power needs alpha > 0"); break;
    case CatalogKind::cantor_f_alpha:
    case CatalogKind::time_changed_bm:
        if (key.params.count("alpha"))
            require(param(key, "alpha") > 0 && param(key, "alpha") <= 1, "cantor parameter must lie in (0,1]");
        else
            require(param(key, "abs_m") >= 0, "abs_m must be >= 0");
        break;
    case CatalogKind::mbm: require(param(key, "H") > 0 && param(key, "H") < 1, "mbm needs H in (0,1)"); break;
    case CatalogKind::besq: require(param(key, "delta") > 0, "besq needs delta > 0"); break;
    case CatalogKind::stoch_int_bm:
        require((key.case_ == C::at_zero) == (key.params.count("H") == 1), "stoch_int_bm takes H exactly at zeros");
        if (key.params.count("H")) require(param(key, "H") > 0 && param(key, "H") < 1, "H must lie in (0,1)");
        break;
    case CatalogKind::sde_bound:
        require(param(key, "alpha_a") >= 0 && param(key, "alpha_b") >= 0, "sde exponents must be >= 0");
        require(param(key, "b_at_zero") == 0 || param(key, "b_at_zero") == 1, "b_at_zero must be 0 or 1");
        break;
    default: break;
    }
}

FrontierPL analytic_frontier(const CatalogKey& key, bool classic) {
    validate(key);
    switch (key.kind) {
    case CatalogKind::chirp: {
        const double a = param(key, "alpha"), b = param(key, "beta");
        auto f = pl({{1.0 / (1.0 + b), a / (1.0 + b)}});
        return classic ? f : frontier_cap(f, 1.0);
    }
    case CatalogKind::power: {
        const double a = param(key, "alpha");
        if (classic) return is_even_integer(a) ? FrontierPL::infinite() : pl({{1.0, a}});
        return pl({{1.0, a}, {0.0, 1.0}});
    }
    case CatalogKind::cantor_f_alpha: {
        if (classic) throw std::invalid_argument("catalog: no classic frontier for cantor_f_alpha");
        const double d = 1.0 - std::log2(param(key, "alpha"));
        return pl({{1.0 / d, 1.0 / d}, {0.0, 1.0}});
    }
    case CatalogKind::brownian:
    case CatalogKind::ou: return half_half();
    case CatalogKind::square_brownian_at0: return one_half();
    case CatalogKind::mbm: {
        const double h = param(key, "H");
        return pl({{1.0, h}, {0.0, h}});
    }
    case CatalogKind::besq:
    case CatalogKind::heston_price:
    case CatalogKind::heston_vol: return key.case_ == C::at_zero ? one_half() : half_half();
    case CatalogKind::time_changed_bm: {
        double d = key.params.count("alpha") ? 1.0 - std::log2(param(key, "alpha")) : 1.0 + param(key, "abs_m");
        return pl({{1.0 / d, 0.5 / d}, {0.0, 0.5}});
    }
    case CatalogKind::stoch_int_bm:
        if (key.case_ == C::locally_zero) return FrontierPL::infinite();
        if (key.case_ == C::nonzero) return half_half();
        return pl({{1.0, 0.5 + param(key, "H")}, {0.0, 0.5}});
    case CatalogKind::sde_bound: {
        SdeCase c = SdeCase::a_nonzero;
        if (key.case_ == C::at_zero) c = param(key, "b_at_zero") == 1 ? SdeCase::a_zero_b_zero : SdeCase::a_zero_b_nonzero;
        if (key.case_ == C::locally_zero) c = SdeCase::a_locally_zero;
        return sde_frontier_bounds(param(key, "alpha_a"), param(key, "alpha_b"), c).lower;
    }
    }
    throw std::invalid_argument("catalog: unknown kind");
}

FrontierBounds sde_frontier_bounds(double alpha_a, double alpha_b, SdeCase c) {
    if (!(alpha_a >= 0) || !(alpha_b >= 0)) throw std::invalid_argument("sde_frontier_bounds: exponents must be >= 0");
    switch (c) {
    case SdeCase::a_nonzero: return {half_half(), half_half()};
    case SdeCase::a_zero_b_nonzero: {
        if (alpha_a >= 0.5) return {one_half(), one_half()};
        std::vector<AffinePiece> lower{{1.0, 1.0}, {0.0, 0.5}};
        push_inverse_piece(lower, 2.0, alpha_a);
        return {pl(std::move(lower)), one_half()};
    }
    case SdeCase::a_zero_b_zero: {
        std::vector<AffinePiece> lower{{0.0, 0.5}};
        push_inverse_piece(lower, 2.0, alpha_a);
        push_inverse_piece(lower, 1.0, alpha_b);
        return {pl(std::move(lower)), pl({{0.0, 0.5}})};
    }
    case SdeCase::a_locally_zero: {
        std::vector<AffinePiece> lower{{0.0, 1.0}};
        push_inverse_piece(lower, 1.0, alpha_b);
        return {pl(std::move(lower)), pl({{0.0, 1.0}})};
    }
    }
    throw std::invalid_argument("sde_frontier_bounds: unknown case");
}

std::string to_string(CatalogKind k) { return rule_for(k).name; }

std::string to_string(CatalogCase c) {
    switch (c) {
    case C::generic: return "generic";
    case C::at_zero: return "at_zero";
    case C::nonzero: return "nonzero";
    case C::locally_zero: return "locally_zero";
    }
    return "?";
}

std::string to_string(SdeCase c) {
    switch (c) {
    case SdeCase::a_nonzero: return "a_nonzero";
    case SdeCase::a_zero_b_nonzero: return "a_zero_b_nonzero";
    case SdeCase::a_zero_b_zero: return "a_zero_b_zero";
    case SdeCase::a_locally_zero: return "a_locally_zero";
    }
    return "?";
}

CatalogKind catalog_kind_from_string(const std::string& s) {
    for (const auto& r : rules())
        if (s == r.name) return r.kind;
    throw std::invalid_argument("catalog: unknown kind '" + s + "'");
}

CatalogCase catalog_case_from_string(const std::string& s) {
    for (auto c : {C::generic, C::at_zero, C::nonzero, C::locally_zero})
        if (s == to_string(c)) return c;
    throw std::invalid_argument("catalog: unknown case '" + s + "'");
}

SdeCase sde_case_from_string(const std::string& s) {
    for (auto c : {SdeCase::a_nonzero, SdeCase::a_zero_b_nonzero, SdeCase::a_zero_b_zero, SdeCase::a_locally_zero})
        if (s == to_string(c)) return c;
    throw std::invalid_argument("unknown sde case '" + s + "'");
}

nlohmann::json to_json(const CatalogKey& key) {
    nlohmann::json j;
    j["kind"] = to_string(key.kind);
    j["params"] = nlohmann::json::object();
    for (const auto& [k, v] : key.params) j["params"][k] = v;
    j["case"] = to_string(key.case_);
    return j;
}

CatalogKey catalog_key_from_json(const nlohmann::json& j) {
    CatalogKey key;
    key.kind = catalog_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("params"))
        for (const auto& [k, v] : j.at("params").items()) key.params[k] = v.get<double>();
    key.case_ = catalog_case_from_string(j.value("case", std::string("generic")));
    validate(key);
    return key;
}

} // namespace microloc
