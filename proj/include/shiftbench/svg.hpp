#pragma once

// Minimal deterministic SVG output for impact and forecast plots. Coordinates
// are written with two fixed decimals so identical inputs give identical bytes.

#include "shiftbench/causal.hpp"
#include "shiftbench/error.hpp"
#include "shiftbench/interval.hpp"
#include "shiftbench/series.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shiftbench::svg {

inline std::string fixed(double v, int decimals = 2) {
    if (std::abs(v) < 0.5 * std::pow(10.0, -decimals)) {
        v = 0.0; // avoid "-0.00"
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    return ec == std::errc{} ? std::string(buf, end) : std::string("0");
}

inline std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline constexpr std::array<std::string_view, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                                          "#8c564b"};

/// Maps data coordinates into one rectangular plotting area.
class Panel {
public:
    Panel(double left, double top, double width, double height, std::pair<double, double> x_range,
          std::pair<double, double> y_range)
        : left_(left), top_(top), width_(width), height_(height), x_(x_range), y_(y_range) {
        if (x_.second <= x_.first) x_.second = x_.first + 1.0;
        if (y_.second <= y_.first) {
            y_.first -= 1.0;
            y_.second += 1.0;
        }
    }

    [[nodiscard]] double px(double x) const { return left_ + (x - x_.first) / (x_.second - x_.first) * width_; }
    [[nodiscard]] double py(double y) const { return top_ + (y_.second - y) / (y_.second - y_.first) * height_; }

    [[nodiscard]] std::string points(std::span<const double> xs, std::span<const double> ys) const {
        std::string out;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            if (i) out += ' ';
            out += fixed(px(xs[i])) + ',' + fixed(py(ys[i]));
        }
        return out;
    }

    [[nodiscard]] std::string frame(std::string_view title, std::string_view y_label) const {
        std::string s;
        s += "  <rect class=\"frame\" x=\"" + fixed(left_) + "\" y=\"" + fixed(top_) + "\" width=\"" + fixed(width_) +
             "\" height=\"" + fixed(height_) + "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
        s += "  <text class=\"title\" x=\"" + fixed(left_) + "\" y=\"" + fixed(top_ - 6) +
             "\" font-family=\"sans-serif\" font-size=\"13\">" + escape(title) + "</text>\n";
        s += "  <text x=\"" + fixed(left_ - 44) + "\" y=\"" + fixed(top_ + height_ / 2) +
             "\" font-family=\"sans-serif\" font-size=\"11\" transform=\"rotate(-90 " + fixed(left_ - 44) + " " +
             fixed(top_ + height_ / 2) + ")\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";
        for (double v : {y_.first, (y_.first + y_.second) / 2, y_.second}) {
            s += "  <text x=\"" + fixed(left_ - 4) + "\" y=\"" + fixed(py(v) + 4) +
                 "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" + fixed(v) + "</text>\n";
        }
        for (double v : {x_.first, (x_.first + x_.second) / 2, x_.second}) {
            s += "  <text x=\"" + fixed(px(v)) + "\" y=\"" + fixed(top_ + height_ + 14) +
                 "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" + fixed(v, 0) + "</text>\n";
        }
        return s;
    }

    [[nodiscard]] std::string polyline(std::string_view css_class, std::span<const double> xs,
                                       std::span<const double> ys, std::string_view color, bool dashed = false) const {
        return "  <polyline class=\"" + std::string(css_class) + "\" fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\"" + (dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" +
               points(xs, ys) + "\"/>\n";
    }

    [[nodiscard]] std::string hline(std::string_view css_class, double y) const {
        return "  <line class=\"" + std::string(css_class) + "\" x1=\"" + fixed(left_) + "\" y1=\"" + fixed(py(y)) +
               "\" x2=\"" + fixed(left_ + width_) + "\" y2=\"" + fixed(py(y)) +
               "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    }

    [[nodiscard]] std::string vrule(std::string_view css_class, double x) const {
        return "  <line class=\"" + std::string(css_class) + "\" x1=\"" + fixed(px(x)) + "\" y1=\"" + fixed(top_) +
               "\" x2=\"" + fixed(px(x)) + "\" y2=\"" + fixed(top_ + height_) +
               "\" stroke=\"#555\" stroke-width=\"1\" stroke-dasharray=\"4,3\"/>\n";
    }

    [[nodiscard]] double zero_y() const { return py(0.0); }

private:
    double left_, top_, width_, height_;
    std::pair<double, double> x_, y_;
};

namespace detail {

inline std::pair<double, double> padded_range(std::initializer_list<std::span<const double>> series,
                                              bool include_zero) {
    double lo = include_zero ? 0.0 : std::numeric_limits<double>::infinity();
    double hi = include_zero ? 0.0 : -std::numeric_limits<double>::infinity();
    for (auto s : series) {
        for (double v : s) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
    const double pad = hi > lo ? 0.05 * (hi - lo) : 1.0;
    return {lo - pad, hi + pad};
}

inline std::vector<double> episode_axis(std::size_t n, std::size_t first = 1) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(first + i);
    return xs;
}

inline std::string header(double width, double height) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(width, 0) + "\" height=\"" +
           fixed(height, 0) + "\" viewBox=\"0 0 " + fixed(width, 0) + " " + fixed(height, 0) + "\">\n" +
           "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

} // namespace detail

/// Three stacked panels: original (treated vs dashed counterfactual),
/// pointwise and cumulative impact, each with a dashed rule at T.
inline std::string render_impact_svg(const ImpactReport& report, std::string_view title = "Causal impact") {
    const std::size_t n = report.episodes();
    require(n >= 1, "render_impact_svg: empty report");
    require(report.original_treated.size() == n && report.original_counterfactual.size() == n &&
                report.cumulative.size() == n,
            "render_impact_svg: panel series lengths differ");

    constexpr double kWidth = 760, kLeft = 70, kPlotWidth = 660, kPanelHeight = 170, kGap = 50, kTop = 50;
    const auto xs = detail::episode_axis(n);
    const std::pair<double, double> x_range{1.0, static_cast<double>(std::max<std::size_t>(n, 2))};
    const auto t = static_cast<double>(report.intervention_episode);

    std::string s = detail::header(kWidth, kTop + 3 * (kPanelHeight + kGap));
    s += "  <text x=\"" + fixed(kLeft) + "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\">" + escape(title) +
         "</text>\n";

    const Panel original(kLeft, kTop, kPlotWidth, kPanelHeight, x_range,
                         detail::padded_range({report.original_treated.values, report.original_counterfactual.values},
                                              false));
    s += "  <g class=\"panel original\">\n";
    s += original.frame("original (rolling mean, window " + std::to_string(report.window) + ")", "return");
    s += original.polyline("series counterfactual", xs, report.original_counterfactual.values, kPalette[0], true);
    s += original.polyline("series treated", xs, report.original_treated.values, kPalette[1]);
    s += original.vrule("intervention", t);
    s += "  </g>\n";

    const Panel pointwise(kLeft, kTop + kPanelHeight + kGap, kPlotWidth, kPanelHeight, x_range,
                          detail::padded_range({report.pointwise.values}, true));
    s += "  <g class=\"panel pointwise\">\n";
    s += pointwise.frame("pointwise impact", "treated - counterfactual");
    s += pointwise.hline("zero", 0.0);
    s += pointwise.polyline("series pointwise", xs, report.pointwise.values, kPalette[1]);
    s += pointwise.vrule("intervention", t);
    s += "  </g>\n";

    const Panel cumulative(kLeft, kTop + 2 * (kPanelHeight + kGap), kPlotWidth, kPanelHeight, x_range,
                           detail::padded_range({report.cumulative.values}, true));
    s += "  <g class=\"panel cumulative\">\n";
    s += cumulative.frame("cumulative impact", "running sum");
    s += cumulative.hline("zero", 0.0);
    s += cumulative.polyline("series cumulative", xs, report.cumulative.values, kPalette[1]);
    s += cumulative.vrule("intervention", t);
    s += "  </g>\n";
    s += "</svg>\n";
    return s;
}

/// Measured history followed by one shaded prediction band and point line
/// per label. Bands must share horizon and level.
inline std::string render_forecast_svg(const MeanSeries& history,
                                       const std::vector<std::pair<std::string, ForecastBand>>& bands,
                                       std::string_view title = "Forecast") {
    require(history.size() >= 1, "render_forecast_svg: empty history");
    for (const auto& [label, band] : bands) {
        require(band.horizon == bands.front().second.horizon, "render_forecast_svg: bands have mixed horizons");
        require(band.level == bands.front().second.level, "render_forecast_svg: bands have mixed levels");
        require(band.point.size() == band.horizon && band.lower.size() == band.horizon &&
                    band.upper.size() == band.horizon,
                "render_forecast_svg: band '" + label + "' is malformed");
    }
    const std::size_t n = history.size();
    const std::size_t horizon = bands.empty() ? 0 : bands.front().second.horizon;

    constexpr double kWidth = 760, kLeft = 70, kPlotWidth = 520, kHeight = 320, kTop = 50;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : history.values) lo = std::min(lo, v), hi = std::max(hi, v);
    for (const auto& [label, band] : bands) {
        for (double v : band.lower) lo = std::min(lo, v);
        for (double v : band.upper) hi = std::max(hi, v);
    }
    const double pad = hi > lo ? 0.05 * (hi - lo) : 1.0;
    const Panel panel(kLeft, kTop, kPlotWidth, kHeight - kTop - 40, {1.0, static_cast<double>(std::max<std::size_t>(n + horizon, 2))},
                      {lo - pad, hi + pad});

    std::string s = detail::header(kWidth, kHeight);
    s += "  <text x=\"" + fixed(kLeft) + "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\">" + escape(title) +
         "</text>\n";
    std::string level_text = bands.empty() ? std::string() : fixed(100.0 * bands.front().second.level, 0) + "% prediction intervals";
    s += panel.frame(level_text.empty() ? "history" : "history and forecast, " + level_text, "average return");
    s += panel.polyline("series history", detail::episode_axis(n), history.values, "#333");
    if (horizon > 0) {
        s += panel.vrule("forecast-start", static_cast<double>(n));
    }

    const auto future = detail::episode_axis(horizon, n + 1);
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const auto& [label, band] = bands[i];
        const auto color = kPalette[i % kPalette.size()];
        std::string poly;
        for (std::size_t h = 0; h < horizon; ++h) {
            poly += (h ? " " : "") + fixed(panel.px(future[h])) + ',' + fixed(panel.py(band.upper[h]));
        }
        for (std::size_t h = horizon; h-- > 0;) {
            poly += ' ' + fixed(panel.px(future[h])) + ',' + fixed(panel.py(band.lower[h]));
        }
        s += "  <polygon class=\"band\" fill=\"" + std::string(color) + "\" fill-opacity=\"0.25\" stroke=\"none\" points=\"" +
             poly + "\"/>\n";
        s += panel.polyline("series forecast", future, band.point, color);

        const double ly = kTop + 14.0 + 18.0 * static_cast<double>(i);
        s += "  <g class=\"legend\">\n";
        s += "    <rect x=\"" + fixed(kLeft + kPlotWidth + 16) + "\" y=\"" + fixed(ly - 9) +
             "\" width=\"14\" height=\"10\" fill=\"" + std::string(color) + "\" fill-opacity=\"0.5\"/>\n";
        s += "    <text x=\"" + fixed(kLeft + kPlotWidth + 36) + "\" y=\"" + fixed(ly) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(label) + "</text>\n";
        s += "  </g>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace shiftbench::svg
