#include "microloc/sample_path.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace microloc {

SamplePath::SamplePath(double t_start, double t_end, std::vector<double> values, std::string label)
    : t_start_(t_start), t_end_(t_end), values_(std::move(values)), label_(std::move(label)) {
    if (values_.size() < 2) throw std::invalid_argument("SamplePath: need at least 2 samples");
    if (!(t_end_ > t_start_) || !std::isfinite(t_start_) || !std::isfinite(t_end_))
        throw std::invalid_argument("SamplePath: need t_end > t_start");
    for (double v : values_)
        if (!std::isfinite(v)) throw std::invalid_argument("SamplePath: non-finite sample");
}

std::size_t SamplePath::index_of(double t) const {
    double x = std::round((t - t_start_) / dt());
    if (x <= 0.0) return 0;
    if (x >= static_cast<double>(size() - 1)) return size() - 1;
    return static_cast<std::size_t>(x);
}

void write_csv(std::ostream& os, const SamplePath& path) {
    os << "t,value\n";
    os << std::setprecision(17);
    for (std::size_t i = 0; i < path.size(); ++i) os << path.time(i) << ',' << path[i] << '\n';
}

void write_csv(const std::string& file, const SamplePath& path) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open " + file + " for writing");
    write_csv(os, path);
}

SamplePath read_csv(std::istream& is, std::string label) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("path CSV: empty input");
    if (line.rfind("t,value", 0) != 0) throw std::runtime_error("path CSV: expected header 't,value'");
    std::vector<double> ts, vs;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("path CSV: malformed row '" + line + "'");
        try {
            ts.push_back(std::stod(line.substr(0, comma)));
            vs.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw std::runtime_error("path CSV: malformed row '" + line + "'");
        }
    }
    if (ts.size() < 2) throw std::runtime_error("path CSV: need at least 2 rows");
    const double dt = (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double expect = ts.front() + static_cast<double>(i) * dt;
        if (std::abs(ts[i] - expect) > 1e-9 * std::max(1.0, std::abs(dt) * ts.size()))
            throw std::runtime_error("path CSV: grid is not uniform");
    }
    return SamplePath(ts.front(), ts.back(), std::move(vs), std::move(label));
}

SamplePath read_csv(const std::string& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("cannot open " + file);
    return read_csv(is, file);
}

} // namespace microloc
