#ifndef XCAUSAL_IO_HPP
#define XCAUSAL_IO_HPP

/// @file
/// Two-column CSV ingestion and plot-ready CSV output.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "xcausal/causal.hpp"
#include "xcausal/core.hpp"

namespace xcausal {

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        out.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace detail

/// Parses `timestamp,value` rows. A first row whose fields are not numeric
/// is taken as a header. Blank lines are skipped.
inline std::vector<Observation> read_observations(std::istream& in, const std::string& source = "input") {
    std::vector<Observation> obs;
    std::string line;
    std::size_t lineno = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = detail::trim(line);
        if (row.empty()) continue;
        const auto fields = detail::split_commas(row);
        double t = 0.0;
        double v = 0.0;
        const bool ok = fields.size() == 2 && detail::parse_double(fields[0], t) && detail::parse_double(fields[1], v);
        if (!ok) {
            if (first_row) {
                first_row = false;
                continue;
            }
            throw Error(ErrorKind::ParseError, source + ":" + std::to_string(lineno) + ": expected two numeric fields");
        }
        first_row = false;
        if (!std::isfinite(t) || !std::isfinite(v))
            throw Error(ErrorKind::NonFinite, source + ":" + std::to_string(lineno) + ": non-finite value");
        obs.push_back({t, v});
    }
    return obs;
}

inline IrregularSeries read_series(std::istream& in, const std::string& label, const std::string& source = "input") {
    return dedup_and_sort(read_observations(in, source), label);
}

inline IrregularSeries read_series_file(const std::string& path, const std::string& label) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return read_series(in, label, path);
}

inline void write_series_csv(std::ostream& os, const IrregularSeries& s) {
    os.precision(17);
    os << "timestamp,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) os << s.timestamps()[i] << ',' << s.values()[i] << '\n';
}

inline void write_correlogram_csv(std::ostream& os, const CrossCorrelogram& c) {
    os.precision(17);
    os << "lag,rho\n";
    for (std::size_t i = 0; i < c.rho.size(); ++i) os << c.lag_grid.lag(i) << ',' << c.rho[i] << '\n';
}

/// Reads a `lag,rho` file back; the lags must form a symmetric uniform grid.
inline CrossCorrelogram read_correlogram(std::istream& in, const std::string& source = "input") {
    const auto obs = read_observations(in, source);
    if (obs.size() < 3 || obs.size() % 2 == 0)
        throw Error(ErrorKind::ParseError, source + ": correlogram needs an odd number (>= 3) of lags");
    const std::size_t half = obs.size() / 2;
    const double dh = obs[half + 1].t - obs[half].t;
    if (!(dh > 0.0)) throw Error(ErrorKind::ParseError, source + ": lags are not increasing");
    LagGrid grid(dh, half);
    std::vector<double> rho(obs.size());
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (std::abs(obs[i].t - grid.lag(i)) > 1e-9 * dh * static_cast<double>(obs.size()))
            throw Error(ErrorKind::ParseError, source + ": lags do not form a symmetric uniform grid");
        rho[i] = obs[i].value;
    }
    return {grid, std::move(rho)};
}

inline CrossCorrelogram read_correlogram_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return read_correlogram(in, path);
}

inline void write_band_csv(std::ostream& os, const PercentileBand& b) {
    os.precision(17);
    os << "lag,p05,p50,p95\n";
    for (std::size_t i = 0; i < b.p05.size(); ++i)
        os << b.lag_grid.lag(i) << ',' << b.p05[i] << ',' << b.p50[i] << ',' << b.p95[i] << '\n';
}

}  // namespace xcausal

#endif  // XCAUSAL_IO_HPP
