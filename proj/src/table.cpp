#include "wcpmem/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wcpmem/errors.hpp"

namespace wcpmem {

SampledCurve::SampledCurve(std::vector<double> times, std::vector<cplx> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size())
        throw DimensionMismatch("sampled curve: time and value columns differ in length");
    if (times_.size() < 2)
        throw InvalidParameter("sampled curve: at least two samples are required");
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1]))
            throw InvalidParameter("sampled curve: times must be strictly increasing");
    }
}

cplx SampledCurve::operator()(double t) const {
    if (times_.empty() || t < times_.front() || t > times_.back()) return {0.0, 0.0};
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.end()) return values_.back();
    const auto hi = static_cast<std::size_t>(it - times_.begin());
    const auto lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
}

double SampledCurve::integrate_abs2(double a, double b) const {
    if (times_.empty() || b <= a) return 0.0;
    const double lo = std::max(a, times_.front());
    const double hi = std::min(b, times_.back());
    if (hi <= lo) return 0.0;
    // Nodes inside (lo, hi) plus the clipped end points.
    std::vector<double> nodes{lo};
    for (double t : times_)
        if (t > lo && t < hi) nodes.push_back(t);
    nodes.push_back(hi);
    double sum = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double f0 = std::norm((*this)(nodes[i - 1]));
        const double f1 = std::norm((*this)(nodes[i]));
        sum += 0.5 * (f0 + f1) * (nodes[i] - nodes[i - 1]);
    }
    return sum;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

double parse_cell(const std::string& cell, const std::filesystem::path& path, std::size_t line_no) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == begin || (end && *end != '\0') || !std::isfinite(v)) {
        throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": cannot parse number '" + cell + "'");
    }
    return v;
}

}  // namespace

SampledCurve read_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open table file " + path.string());

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty file, header row expected");
    ++line_no;
    const std::size_t columns = split_csv_line(line).size();
    if (columns != 2 && columns != 3)
        throw ConfigError(path.string() + ": expected 2 (t, re) or 3 (t, re, im) columns, header has " +
                          std::to_string(columns));

    std::vector<double> times;
    std::vector<cplx> values;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != columns)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": wrong number of columns");
        times.push_back(parse_cell(cells[0], path, line_no));
        const double re = parse_cell(cells[1], path, line_no);
        const double im = columns == 3 ? parse_cell(cells[2], path, line_no) : 0.0;
        values.emplace_back(re, im);
    }
    try {
        return SampledCurve(std::move(times), std::move(values));
    } catch (const Error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace wcpmem
