#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace microloc {

/// Samples on the uniform grid t_i = t_start + i*dt, dt = (t_end - t_start)/(n-1).
class SamplePath {
public:
    SamplePath(double t_start, double t_end, std::vector<double> values, std::string label = {});

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    std::size_t size() const { return values_.size(); }
    double dt() const { return (t_end_ - t_start_) / static_cast<double>(values_.size() - 1); }
    double time(std::size_t i) const { return t_start_ + static_cast<double>(i) * dt(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::string& label() const { return label_; }

    /// Index of the grid point nearest to t (clamped to the grid).
    std::size_t index_of(double t) const;

private:
    double t_start_;
    double t_end_;
    std::vector<double> values_;
    std::string label_;
};

void write_csv(std::ostream& os, const SamplePath& path);
void write_csv(const std::string& file, const SamplePath& path);
/// Reads a "t,value" CSV; the grid must be uniform to within 1e-9 relative spacing.
SamplePath read_csv(std::istream& is, std::string label = {});
SamplePath read_csv(const std::string& file);

} // namespace microloc
