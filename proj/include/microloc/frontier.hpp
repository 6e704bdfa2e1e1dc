#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace microloc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct AffinePiece {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Concave piecewise-linear frontier stored as min_i (m_i s' + b_i), or identically +inf.
class FrontierPL {
public:
    /// Identically +inf (locally constant case).
    static FrontierPL infinite();
    /// Throws std::invalid_argument on an empty set, a slope outside [0,1] or a non-finite coefficient.
    static FrontierPL from_pieces(std::vector<AffinePiece> pieces);
    static FrontierPL affine(double slope, double intercept);

    bool is_infinite() const { return infinite_; }
    const std::vector<AffinePiece>& pieces() const { return pieces_; }

    double operator()(double s) const;

private:
    FrontierPL() = default;
    bool infinite_ = false;
    std::vector<AffinePiece> pieces_;
};

struct ExponentPair {
    double pointwise = kInf;
    double local = kInf;
};

double frontier_eval(const FrontierPL& f, double s);
FrontierPL frontier_min(const FrontierPL& f, const FrontierPL& g);
FrontierPL frontier_shift_s(const FrontierPL& f, double delta);
FrontierPL frontier_add_const(const FrontierPL& f, double gamma);
FrontierPL frontier_mg_transform(const FrontierPL& f_qv);
FrontierPL frontier_cap(const FrontierPL& f, double c);

/// F ∧ (s'+p) ∧ 1; an empty `p` stands for p = inf.
FrontierPL classic_to_pseudo(const FrontierPL& f_classic, std::optional<int> p);

/// s' -> c F(s'/d). Pieces (m,b) become (m c/d, c b); requires c, d > 0 and c <= d.
FrontierPL frontier_scale(const FrontierPL& f, double c, double d);
inline FrontierPL frontier_scale(const FrontierPL& f, double c) { return frontier_scale(f, c, c); }

/// Least concave majorant of max(F, G). Any concave frontier above both bounds is above it.
FrontierPL frontier_max_hull(const FrontierPL& f, const FrontierPL& g);

/// Lower bound for h = g∘f combining both scaled bounds.
FrontierPL frontier_compose_lower(const FrontierPL& f_f, const FrontierPL& f_g, double alpha_f_pt,
                                  double alpha_g_pt, double alpha_g_loc, double alpha_f_loc);

ExponentPair exponents_of(const FrontierPL& f);

// Probe grid helpers.
std::vector<double> probe_grid(double lo = -3.0, double hi = 3.0, double step = 1.0 / 64.0);
double max_abs_diff(const FrontierPL& f, const FrontierPL& g, std::span<const double> grid);
bool frontier_equal(const FrontierPL& f, const FrontierPL& g, double tol = 1e-9);

struct InvariantReport {
    bool concave = true;
    bool nondecreasing = true;
    bool slopes_in_range = true;
    bool ok() const { return concave && nondecreasing && slopes_in_range; }
};
InvariantReport check_invariants(const FrontierPL& f, std::span<const double> grid);
InvariantReport check_invariants(const FrontierPL& f);

std::string to_string(const FrontierPL& f);

nlohmann::json to_json(const FrontierPL& f);
FrontierPL frontier_from_json(const nlohmann::json& j);

} // namespace microloc
