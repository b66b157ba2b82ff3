// CSV, JSON and SVG encodings of fields and density surfaces.
//
// CSV files start with a header line and print every number with 17
// significant digits, so reading a file and writing it again reproduces it
// byte for byte:
//   spinor      n,re_R,im_R,re_L,im_L
//   scalar      n,re,im
//   probability n,p
//   chiral      n,p_R,p_L
//   surface     t,n,rho
// Rows run over n = -N/2 .. N/2-1.

#ifndef QWALK_IO_HPP
#define QWALK_IO_HPP

#include "lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qwalk::io
{

inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline constexpr std::string_view spinor_header = "n,re_R,im_R,re_L,im_L";
inline constexpr std::string_view scalar_header = "n,re,im";
inline constexpr std::string_view probability_header = "n,p";
inline constexpr std::string_view chiral_header = "n,p_R,p_L";
inline constexpr std::string_view surface_header = "t,n,rho";

enum class CsvKind
{
    spinor,
    scalar,
    probability,
    chiral,
    surface,
};

inline void write_csv(std::ostream& os, const SpinorField& f)
{
    os << spinor_header << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << f.ring.site(i) << ',' << format_number(f.right[i].real()) << ',' << format_number(f.right[i].imag())
           << ',' << format_number(f.left[i].real()) << ',' << format_number(f.left[i].imag()) << '\n';
    }
}

inline void write_csv(std::ostream& os, const ScalarField& f)
{
    os << scalar_header << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << f.ring.site(i) << ',' << format_number(f.amp[i].real()) << ',' << format_number(f.amp[i].imag())
           << '\n';
    }
}

inline void write_csv(std::ostream& os, const ProbabilityField& f)
{
    os << probability_header << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << f.ring.site(i) << ',' << format_number(f.p[i]) << '\n';
    }
}

inline void write_csv(std::ostream& os, const ChiralProbabilityField& f)
{
    os << chiral_header << '\n';
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << f.ring.site(i) << ',' << format_number(f.right[i]) << ',' << format_number(f.left[i]) << '\n';
    }
}

/// rho(n, t) sampled at a list of times; rows[j] is the density at times[j].
struct DensitySurface
{
    std::vector<double> times;
    std::vector<ProbabilityField> rows;
};

inline void write_csv(std::ostream& os, const DensitySurface& s)
{
    os << surface_header << '\n';
    for (std::size_t j = 0; j < s.rows.size(); ++j) {
        const auto& row = s.rows[j];
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << format_number(s.times[j]) << ',' << row.ring.site(i) << ',' << format_number(row.p[i]) << '\n';
        }
    }
}

namespace detail
{

inline std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

inline double parse_double(const std::string& s, std::size_t line_no)
{
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
}

inline std::int64_t parse_int(const std::string& s, std::size_t line_no)
{
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad site index '" + s + "'");
    }
    return v;
}

struct CsvTable
{
    CsvKind kind = CsvKind::scalar;
    std::vector<std::int64_t> sites;
    std::vector<std::vector<double>> values;
};

inline CsvTable read_table(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line)) {
        throw std::runtime_error("csv: empty input");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    CsvTable t;
    std::size_t columns = 0;
    if (line == spinor_header) {
        t.kind = CsvKind::spinor;
        columns = 5;
    } else if (line == scalar_header) {
        t.kind = CsvKind::scalar;
        columns = 3;
    } else if (line == probability_header) {
        t.kind = CsvKind::probability;
        columns = 2;
    } else if (line == chiral_header) {
        t.kind = CsvKind::chiral;
        columns = 3;
    } else {
        throw std::runtime_error("csv: unrecognized header '" + line + "'");
    }
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto cells = split_line(line);
        if (cells.size() != columns) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected "
                                     + std::to_string(columns) + " columns");
        }
        t.sites.push_back(parse_int(cells[0], line_no));
        std::vector<double> row;
        for (std::size_t c = 1; c < columns; ++c) {
            row.push_back(parse_double(cells[c], line_no));
        }
        t.values.push_back(std::move(row));
    }
    const std::size_t n = t.sites.size();
    if (n == 0) {
        throw std::runtime_error("csv: no data rows");
    }
    const Ring ring(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (t.sites[i] != ring.site(i)) {
            throw std::runtime_error("csv: rows must list n = -N/2 .. N/2-1 in order (row "
                                     + std::to_string(i + 1) + " has n=" + std::to_string(t.sites[i]) + ")");
        }
    }
    return t;
}

} // namespace detail

inline CsvKind peek_kind(std::istream& is)
{
    return detail::read_table(is).kind;
}

inline SpinorField read_spinor_csv(std::istream& is)
{
    const auto t = detail::read_table(is);
    if (t.kind != CsvKind::spinor) {
        throw std::runtime_error("csv: expected a spinor state file");
    }
    SpinorField f(t.sites.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.right[i] = {t.values[i][0], t.values[i][1]};
        f.left[i] = {t.values[i][2], t.values[i][3]};
    }
    return f;
}

inline ScalarField read_scalar_csv(std::istream& is)
{
    const auto t = detail::read_table(is);
    if (t.kind != CsvKind::scalar) {
        throw std::runtime_error("csv: expected a scalar state file");
    }
    ScalarField f(t.sites.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.amp[i] = {t.values[i][0], t.values[i][1]};
    }
    return f;
}

inline ProbabilityField read_probability_csv(std::istream& is)
{
    const auto t = detail::read_table(is);
    if (t.kind != CsvKind::probability) {
        throw std::runtime_error("csv: expected a probability file");
    }
    ProbabilityField f(t.sites.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.p[i] = t.values[i][0];
    }
    return f;
}

inline ChiralProbabilityField read_chiral_csv(std::istream& is)
{
    const auto t = detail::read_table(is);
    if (t.kind != CsvKind::chiral) {
        throw std::runtime_error("csv: expected a chiral probability file");
    }
    ChiralProbabilityField f(t.sites.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.right[i] = t.values[i][0];
        f.left[i] = t.values[i][1];
    }
    return f;
}

/// Self-contained grayscale heatmap: one rect per (n, t) cell, time running
/// down, lightness (rho / rho_max)^(1/2).
inline void write_svg(std::ostream& os, const DensitySurface& s, const std::string& title, int cell = 3)
{
    const std::size_t rows = s.rows.size();
    const std::size_t cols = rows == 0 ? 0 : s.rows.front().size();
    double peak = 0.0;
    for (const auto& r : s.rows) {
        for (double v : r.p) {
            peak = std::max(peak, v);
        }
    }
    const std::size_t width = cols * static_cast<std::size_t>(cell);
    const std::size_t height = rows * static_cast<std::size_t>(cell);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\" shape-rendering=\"crispEdges\">\n"
       << "<title>" << title << "</title>\n";
    for (std::size_t j = 0; j < rows; ++j) {
        for (std::size_t i = 0; i < cols; ++i) {
            const double v = peak > 0.0 ? std::sqrt(std::max(0.0, s.rows[j].p[i]) / peak) : 0.0;
            const int g = static_cast<int>(std::lround(255.0 * v));
            os << "<rect x=\"" << i * static_cast<std::size_t>(cell) << "\" y=\"" << j * static_cast<std::size_t>(cell)
               << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"rgb(" << g << ',' << g << ',' << g
               << ")\"/>\n";
        }
    }
    os << "</svg>\n";
}

} // namespace qwalk::io

#endif
