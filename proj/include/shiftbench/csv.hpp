#pragma once

// Long-format CSV for PerformanceMatrix: header `seed,episode,return`, one row
// per (seed, episode). Doubles are written in shortest round-trip form, so
// export followed by import reproduces the matrix exactly.

#include "shiftbench/error.hpp"
#include "shiftbench/series.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace shiftbench::csv {

inline constexpr std::string_view kHeader = "seed,episode,return";

inline std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{}) {
        throw std::runtime_error("csv: failed to format double");
    }
    return {buf, end};
}

inline void write(std::ostream& out, const PerformanceMatrix& matrix) {
    out << kHeader << '\n';
    for (std::size_t i = 0; i < matrix.seed_count(); ++i) {
        const auto seed = matrix.seeds()[i].value;
        auto r = matrix.row(i);
        for (std::size_t t = 0; t < r.size(); ++t) {
            out << seed << ',' << t << ',' << format_double(r[t]) << '\n';
        }
    }
}

inline std::string to_string(const PerformanceMatrix& matrix) {
    std::ostringstream os;
    write(os, matrix);
    return os.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no, const char* what) {
    field = trim(field);
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ValidationError("csv line " + std::to_string(line_no) + ": invalid " + what + " '" +
                              std::string(field) + "'");
    }
    return value;
}

} // namespace detail

/// Parses the long format. Seeds keep their order of first appearance; rows
/// may be interleaved, but each seed must cover episodes 0..N-1 exactly once
/// and every seed must have the same N.
inline PerformanceMatrix read(std::istream& in, std::string label = {}) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<SeedId> order;
    std::map<std::uint64_t, std::map<std::size_t, double>> cells;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = detail::trim(line);
        if (view.empty()) {
            continue;
        }
        if (!header_seen) {
            require(view == kHeader, "csv: expected header '" + std::string(kHeader) + "'");
            header_seen = true;
            continue;
        }
        const auto c1 = view.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
        require(c2 != std::string_view::npos && view.find(',', c2 + 1) == std::string_view::npos,
                "csv line " + std::to_string(line_no) + ": expected 3 fields");
        const auto seed = detail::parse_number<std::uint64_t>(view.substr(0, c1), line_no, "seed");
        const auto episode = detail::parse_number<std::size_t>(view.substr(c1 + 1, c2 - c1 - 1), line_no, "episode");
        const auto value = detail::parse_number<double>(view.substr(c2 + 1), line_no, "return");

        auto [it, inserted] = cells.try_emplace(seed);
        if (inserted) {
            order.emplace_back(seed);
        }
        require(it->second.emplace(episode, value).second,
                "csv line " + std::to_string(line_no) + ": duplicate episode " + std::to_string(episode) +
                    " for seed " + std::to_string(seed));
    }
    require(header_seen, "csv: missing header");
    require(!order.empty(), "csv: no data rows");

    std::vector<std::vector<double>> rows;
    rows.reserve(order.size());
    for (SeedId s : order) {
        const auto& episodes = cells.at(s.value);
        std::vector<double> row;
        row.reserve(episodes.size());
        std::size_t expected = 0;
        for (const auto& [episode, value] : episodes) {
            require(episode == expected, "csv: episodes for seed " + std::to_string(s.value) +
                                             " are not contiguous from 0 (missing " + std::to_string(expected) + ")");
            row.push_back(value);
            ++expected;
        }
        rows.push_back(std::move(row));
    }
    return PerformanceMatrix(std::move(order), std::move(rows), std::move(label));
}

inline PerformanceMatrix from_string(const std::string& text, std::string label = {}) {
    std::istringstream is(text);
    return read(is, std::move(label));
}

inline PerformanceMatrix read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    try {
        return read(in, path);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

inline void write_file(const std::string& path, const PerformanceMatrix& matrix) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write(out, matrix);
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

} // namespace shiftbench::csv
