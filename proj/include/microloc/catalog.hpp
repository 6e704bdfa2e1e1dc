#pragma once

#include <map>
#include <string>
#include <utility>

#include <json.hpp>

#include "microloc/frontier.hpp"

namespace microloc {

enum class CatalogKind {
    chirp,
    power,
    cantor_f_alpha,
    brownian,
    square_brownian_at0,
    mbm,
    ou,
    besq,
    heston_price,
    heston_vol,
    time_changed_bm,
    stoch_int_bm,
    sde_bound,
};

enum class CatalogCase { generic, at_zero, nonzero, locally_zero };

struct CatalogKey {
    CatalogKind kind = CatalogKind::brownian;
    std::map<std::string, double> params;
    CatalogCase case_ = CatalogCase::generic;
};

/// Throws std::invalid_argument when params or case do not fit the kind.
void validate(const CatalogKey& key);

/// Pseudo frontier of the keyed object; `classic` asks for the classic frontier where one is known.
FrontierPL analytic_frontier(const CatalogKey& key, bool classic = false);

enum class SdeCase { a_nonzero, a_zero_b_nonzero, a_zero_b_zero, a_locally_zero };

struct FrontierBounds {
    FrontierPL lower;
    FrontierPL upper;
};

FrontierBounds sde_frontier_bounds(double alpha_a, double alpha_b, SdeCase c);

std::string to_string(CatalogKind k);
std::string to_string(CatalogCase c);
std::string to_string(SdeCase c);
CatalogKind catalog_kind_from_string(const std::string& s);
CatalogCase catalog_case_from_string(const std::string& s);
SdeCase sde_case_from_string(const std::string& s);

nlohmann::json to_json(const CatalogKey& key);
CatalogKey catalog_key_from_json(const nlohmann::json& j);

} // namespace microloc
