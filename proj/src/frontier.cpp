#include "microloc/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace microloc {

namespace {

constexpr double kSlopeSlack = 1e-12;

double clamp_slope(double m) {
    if (m < 0.0 && m > -kSlopeSlack) return 0.0;
    if (m > 1.0 && m < 1.0 + kSlopeSlack) return 1.0;
    return m;
}

} // namespace

FrontierPL FrontierPL::infinite() {
    FrontierPL f;
    f.infinite_ = true;
    return f;
}

FrontierPL FrontierPL::from_pieces(std::vector<AffinePiece> pieces) {
    if (pieces.empty()) throw std::invalid_argument("FrontierPL: empty piece set");
    for (auto& p : pieces) {
        if (!std::isfinite(p.slope) || !std::isfinite(p.intercept))
            throw std::invalid_argument("FrontierPL: non-finite coefficient");
        p.slope = clamp_slope(p.slope);
        if (p.slope < 0.0 || p.slope > 1.0)
            throw std::invalid_argument("FrontierPL: slope outside [0,1]");
    }
    FrontierPL f;
    f.pieces_ = std::move(pieces);
    return f;
}

FrontierPL FrontierPL::affine(double slope, double intercept) {
    return from_pieces({{slope, intercept}});
}

double FrontierPL::operator()(double s) const {
    if (infinite_) return kInf;
    double v = kInf;
    for (const auto& p : pieces_) v = std::min(v, p.slope * s + p.intercept);
    return v;
}

double frontier_eval(const FrontierPL& f, double s) { return f(s); }

FrontierPL frontier_min(const FrontierPL& f, const FrontierPL& g) {
    if (f.is_infinite()) return g;
    if (g.is_infinite()) return f;
    auto pieces = f.pieces();
    pieces.insert(pieces.end(), g.pieces().begin(), g.pieces().end());
    return FrontierPL::from_pieces(std::move(pieces));
}

FrontierPL frontier_shift_s(const FrontierPL& f, double delta) {
    if (f.is_infinite()) return f;
    auto pieces = f.pieces();
    for (auto& p : pieces) p.intercept += p.slope * delta;
    return FrontierPL::from_pieces(std::move(pieces));
}

FrontierPL frontier_add_const(const FrontierPL& f, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("frontier_add_const: gamma must be >= 0");
    if (f.is_infinite()) return f;
    auto pieces = f.pieces();
    for (auto& p : pieces) p.intercept += gamma;
    return FrontierPL::from_pieces(std::move(pieces));
}

FrontierPL frontier_mg_transform(const FrontierPL& f_qv) {
    if (f_qv.is_infinite()) return f_qv;
    auto pieces = f_qv.pieces();
    for (auto& p : pieces) p.intercept *= 0.5;
    return FrontierPL::from_pieces(std::move(pieces));
}

FrontierPL frontier_cap(const FrontierPL& f, double c) {
    return frontier_min(f, FrontierPL::affine(0.0, c));
}

FrontierPL classic_to_pseudo(const FrontierPL& f_classic, std::optional<int> p) {
    if (p && *p < 1) throw std::invalid_argument("classic_to_pseudo: p must be a positive integer");
    if (!p) {
        if (f_classic.is_infinite()) return f_classic;
        return frontier_cap(f_classic, 1.0);
    }
    auto out = frontier_min(f_classic, FrontierPL::affine(1.0, static_cast<double>(*p)));
    return frontier_cap(out, 1.0);
}

FrontierPL frontier_scale(const FrontierPL& f, double c, double d) {
    if (!(c > 0.0) || !(d > 0.0)) throw std::invalid_argument("frontier_scale: scale factors must be positive");
    if (f.is_infinite()) return f;
    auto pieces = f.pieces();
    for (auto& p : pieces) {
        p.slope = p.slope * c / d;
        p.intercept *= c;
    }
    return FrontierPL::from_pieces(std::move(pieces));
}

FrontierPL frontier_max_hull(const FrontierPL& f, const FrontierPL& g) {
    if (f.is_infinite() || g.is_infinite()) return FrontierPL::infinite();
    auto upper = [&](double x) { return std::max(f(x), g(x)); };

    std::vector<AffinePiece> all = f.pieces();
    all.insert(all.end(), g.pieces().begin(), g.pieces().end());
    std::vector<double> xs{0.0};
    for (std::size_t a = 0; a < all.size(); ++a)
        for (std::size_t b = a + 1; b < all.size(); ++b) {
            double dm = all[a].slope - all[b].slope;
            if (dm != 0.0) xs.push_back((all[b].intercept - all[a].intercept) / dm);
        }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    const double lo = xs.front() - 1.0;
    const double hi = xs.back() + 1.0;
    xs.insert(xs.begin(), lo);
    xs.push_back(hi);

    // Beyond lo and hi the max is affine, so the tails are exact.
    const double left_slope = upper(lo) - upper(lo - 1.0);
    const double right_slope = upper(hi + 1.0) - upper(hi);
    if (left_slope < right_slope - 1e-12)
        throw std::domain_error("frontier_max_hull: bounds admit no concave majorant");

    std::vector<std::pair<double, double>> hull;
    for (double x : xs) {
        std::pair<double, double> p{x, upper(x)};
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            double cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
            if (cross >= -1e-15) hull.pop_back();
            else break;
        }
        hull.push_back(p);
    }

    // The tails are supporting lines with the tail slopes; they touch the chain at a and b.
    auto support = [&](double m, bool rightmost) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < hull.size(); ++i) {
            const double d = (hull[i].second - m * hull[i].first) - (hull[best].second - m * hull[best].first);
            if (d > 1e-15 || (rightmost && d >= -1e-15)) best = i;
        }
        return best;
    };
    const std::size_t a = support(left_slope, true);
    const std::size_t b = std::max(a, support(right_slope, false));

    std::vector<AffinePiece> pieces;
    pieces.push_back({left_slope, hull[a].second - left_slope * hull[a].first});
    for (std::size_t i = a; i < b; ++i) {
        double m = (hull[i + 1].second - hull[i].second) / (hull[i + 1].first - hull[i].first);
        m = std::clamp(m, 0.0, 1.0);
        pieces.push_back({m, hull[i].second - m * hull[i].first});
    }
    pieces.push_back({right_slope, hull[b].second - right_slope * hull[b].first});
    for (auto& p : pieces) p.slope = std::clamp(p.slope, 0.0, 1.0);
    return FrontierPL::from_pieces(std::move(pieces));
}

FrontierPL frontier_compose_lower(const FrontierPL& f_f, const FrontierPL& f_g, double alpha_f_pt,
                                  double alpha_g_pt, double alpha_g_loc, double alpha_f_loc) {
    for (double a : {alpha_f_pt, alpha_g_pt, alpha_g_loc, alpha_f_loc})
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("frontier_compose_lower: exponents must be positive and finite");
    // Outer local exponent rescales the inner frontier, inner exponents rescale the outer one.
    FrontierPL outer_scaled = frontier_scale(f_f, alpha_g_loc);
    FrontierPL inner_scaled = frontier_scale(f_g, alpha_f_loc, alpha_f_pt);
    return frontier_max_hull(outer_scaled, inner_scaled);
}

ExponentPair exponents_of(const FrontierPL& f) {
    if (f.is_infinite()) return {};
    ExponentPair e;
    e.local = f(0.0);
    double pointwise = kInf;
    for (const auto& p : f.pieces()) {
        if (p.slope > 0.0) pointwise = std::min(pointwise, p.intercept / p.slope);
        else if (p.intercept < 0.0) pointwise = -kInf;
    }
    e.pointwise = pointwise;
    return e;
}

std::vector<double> probe_grid(double lo, double hi, double step) {
    std::vector<double> grid;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) grid.push_back(lo + static_cast<double>(i) * step);
    return grid;
}

double max_abs_diff(const FrontierPL& f, const FrontierPL& g, std::span<const double> grid) {
    double worst = 0.0;
    for (double s : grid) {
        double a = f(s), b = g(s);
        if (std::isinf(a) || std::isinf(b)) {
            if (a != b) return kInf;
            continue;
        }
        worst = std::max(worst, std::abs(a - b));
    }
    return worst;
}

bool frontier_equal(const FrontierPL& f, const FrontierPL& g, double tol) {
    auto grid = probe_grid();
    return max_abs_diff(f, g, grid) <= tol;
}

InvariantReport check_invariants(const FrontierPL& f, std::span<const double> grid) {
    InvariantReport r;
    if (f.is_infinite()) return r;
    for (const auto& p : f.pieces())
        if (p.slope < 0.0 || p.slope > 1.0) r.slopes_in_range = false;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        double a = f(grid[i]), b = f(grid[i + 1]);
        if (b < a - 1e-12) r.nondecreasing = false;
        double slope = (b - a) / (grid[i + 1] - grid[i]);
        if (slope < -1e-9 || slope > 1.0 + 1e-9) r.slopes_in_range = false;
        if (i + 2 < grid.size()) {
            double c = f(grid[i + 2]);
            // Equal spacing assumed for the midpoint test.
            if (b < 0.5 * (a + c) - 1e-12) r.concave = false;
        }
    }
    return r;
}

InvariantReport check_invariants(const FrontierPL& f) {
    auto grid = probe_grid();
    return check_invariants(f, grid);
}

std::string to_string(const FrontierPL& f) {
    if (f.is_infinite()) return "+inf";
    std::ostringstream os;
    os.precision(6);
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        if (i) os << " ^ ";
        os << "(" << f.pieces()[i].slope << "s'+" << f.pieces()[i].intercept << ")";
    }
    return os.str();
}

nlohmann::json to_json(const FrontierPL& f) {
    nlohmann::json j;
    j["infinite"] = f.is_infinite();
    j["pieces"] = nlohmann::json::array();
    for (const auto& p : f.pieces()) j["pieces"].push_back({p.slope, p.intercept});
    return j;
}

FrontierPL frontier_from_json(const nlohmann::json& j) {
    if (j.value("infinite", false)) return FrontierPL::infinite();
    std::vector<AffinePiece> pieces;
    for (const auto& p : j.at("pieces")) {
        if (!p.is_array() || p.size() != 2) throw std::invalid_argument("frontier JSON: piece must be [m, b]");
        pieces.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return FrontierPL::from_pieces(std::move(pieces));
}

} // namespace microloc
