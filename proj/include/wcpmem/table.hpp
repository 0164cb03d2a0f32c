#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wcpmem/params.hpp"

namespace wcpmem {

/// Complex samples on a strictly increasing time axis, linearly interpolated
/// between nodes and zero outside [front, back].
class SampledCurve {
public:
    SampledCurve() = default;
    SampledCurve(std::vector<double> times, std::vector<cplx> values);

    cplx operator()(double t) const;

    std::span<const double> times() const { return times_; }
    std::span<const cplx> values() const { return values_; }
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }

    /// Trapezoid rule for the integral of |value|^2 restricted to [a, b].
    double integrate_abs2(double a, double b) const;

private:
    std::vector<double> times_;
    std::vector<cplx> values_;
};

/// Reads a CSV with a header row and two (t, Re) or three (t, Re, Im) columns.
SampledCurve read_curve_csv(const std::filesystem::path& path);

/// Formats a double with 12 significant digits, the precision used by every
/// CSV this project writes.
std::string format_number(double x);

}  // namespace wcpmem
