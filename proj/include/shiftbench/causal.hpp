#pragma once

// Difference-in-differences impact of a controlled intervention.
//
// Episode convention: the intervention episode T is 1-based and belongs to the
// post-period. With 0-based storage the pre-period is [0, T-1) and the
// post-period is [T-1, N).

#include "shiftbench/error.hpp"
#include "shiftbench/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string_view>
#include <utility>
#include <vector>

namespace shiftbench {

class GroupedExperiment {
public:
    GroupedExperiment(PerformanceMatrix treatment, PerformanceMatrix control, std::size_t intervention_episode)
        : treatment_(std::move(treatment)), control_(std::move(control)), intervention_(intervention_episode) {
        require(treatment_.seeds() == control_.seeds(), "GroupedExperiment: treatment and control seed lists differ");
        require(treatment_.episodes() == control_.episodes(),
                "GroupedExperiment: treatment and control episode counts differ");
        require(intervention_ >= 1 && intervention_ <= treatment_.episodes(),
                "GroupedExperiment: intervention episode must lie in [1, N]");
    }

    [[nodiscard]] const PerformanceMatrix& treatment() const noexcept { return treatment_; }
    [[nodiscard]] const PerformanceMatrix& control() const noexcept { return control_; }
    [[nodiscard]] std::size_t intervention_episode() const noexcept { return intervention_; }
    [[nodiscard]] std::size_t episodes() const noexcept { return treatment_.episodes(); }
    /// 0-based index of the first post-period episode.
    [[nodiscard]] std::size_t post_start() const noexcept { return intervention_ - 1; }

    [[nodiscard]] GroupedExperiment swapped() const { return {control_, treatment_, intervention_}; }

private:
    PerformanceMatrix treatment_;
    PerformanceMatrix control_;
    std::size_t intervention_;
};

namespace detail {

inline double mean_of(const std::vector<double>& v, std::size_t first, std::size_t last) {
    double sum = 0.0;
    for (std::size_t t = first; t < last; ++t) {
        sum += v[t];
    }
    return sum / static_cast<double>(last - first);
}

inline void require_both_periods(const GroupedExperiment& exp, const char* op) {
    require(exp.intervention_episode() >= 2, std::string(op) + ": pre-period is empty (need T >= 2)");
    require(exp.post_start() < exp.episodes(), std::string(op) + ": post-period is empty");
}

} // namespace detail

/// {mean(treated, post) - mean(treated, pre)} - {mean(control, post) - mean(control, pre)}
/// over the seed-averaged series.
inline double did_full(const GroupedExperiment& exp) {
    detail::require_both_periods(exp, "did_full");
    const auto treated = aggregate_mean(exp.treatment()).values;
    const auto control = aggregate_mean(exp.control()).values;
    const std::size_t split = exp.post_start(), n = exp.episodes();
    const double treated_change = detail::mean_of(treated, split, n) - detail::mean_of(treated, 0, split);
    const double control_change = detail::mean_of(control, split, n) - detail::mean_of(control, 0, split);
    return treated_change - control_change;
}

/// Post-period contrast only; equals did_full when the pre-periods match.
inline double did_post(const GroupedExperiment& exp) {
    detail::require_both_periods(exp, "did_post");
    const auto treated = aggregate_mean(exp.treatment()).values;
    const auto control = aggregate_mean(exp.control()).values;
    const std::size_t split = exp.post_start(), n = exp.episodes();
    return detail::mean_of(treated, split, n) - detail::mean_of(control, split, n);
}

inline MeanSeries pointwise_impact(const GroupedExperiment& exp) {
    auto treated = aggregate_mean(exp.treatment());
    const auto control = aggregate_mean(exp.control());
    for (std::size_t t = 0; t < treated.values.size(); ++t) {
        treated.values[t] -= control.values[t];
    }
    treated.source = "pointwise";
    return treated;
}

/// Zero before T, running sum of pointwise from T onwards.
inline MeanSeries cumulative_impact(const MeanSeries& pointwise, std::size_t intervention) {
    require(intervention >= 1 && intervention <= pointwise.size(),
            "cumulative_impact: intervention episode must lie in [1, N]");
    MeanSeries out{std::vector<double>(pointwise.size(), 0.0), "cumulative"};
    double running = 0.0;
    for (std::size_t t = intervention - 1; t < pointwise.size(); ++t) {
        running += pointwise.values[t];
        out.values[t] = running;
    }
    return out;
}

struct ImpactReport {
    std::size_t intervention_episode = 0; // 1-based, first post-period episode
    std::size_t window = 25;
    MeanSeries original_treated;        // rolling mean of the treated series
    MeanSeries original_counterfactual; // rolling mean of the control series
    MeanSeries pointwise;               // raw treated - control
    MeanSeries cumulative;
    double did_full = 0.0;
    double did_post = 0.0;
    double pre_gap = 0.0; // max |pointwise| before T
    double pre_gap_tolerance = 0.0;
    bool fixed_seed_violation = false; // pre_gap > pre_gap_tolerance

    [[nodiscard]] std::size_t episodes() const noexcept { return pointwise.size(); }
    [[nodiscard]] double final_cumulative() const { return cumulative.values.back(); }
};

/// Assembles the three-panel report. Rolling means feed only the display
/// panels; every causal number uses the raw seed means.
inline ImpactReport build_impact_report(const GroupedExperiment& exp, std::size_t window = 25,
                                        double pre_gap_tolerance = 0.0) {
    require(window >= 1, "build_impact_report: window must be >= 1");
    require(pre_gap_tolerance >= 0.0, "build_impact_report: tolerance must be non-negative");
    ImpactReport r;
    r.intervention_episode = exp.intervention_episode();
    r.window = window;
    r.original_treated = rolling_mean(aggregate_mean(exp.treatment()), window);
    r.original_treated.source = "treated";
    r.original_counterfactual = rolling_mean(aggregate_mean(exp.control()), window);
    r.original_counterfactual.source = "counterfactual";
    r.pointwise = pointwise_impact(exp);
    r.cumulative = cumulative_impact(r.pointwise, exp.intervention_episode());
    r.did_full = did_full(exp);
    r.did_post = did_post(exp);
    for (std::size_t t = 0; t < exp.post_start(); ++t) {
        r.pre_gap = std::max(r.pre_gap, std::abs(r.pointwise.values[t]));
    }
    r.pre_gap_tolerance = pre_gap_tolerance;
    r.fixed_seed_violation = r.pre_gap > pre_gap_tolerance;
    return r;
}

enum class CumulativeOrder { FirstBetter, SecondBetter, Tie };

inline std::string_view to_string(CumulativeOrder o) {
    switch (o) {
    case CumulativeOrder::FirstBetter: return "FirstBetter";
    case CumulativeOrder::SecondBetter: return "SecondBetter";
    case CumulativeOrder::Tie: return "Tie";
    }
    return "Tie";
}

/// Higher cumulative impact at the final episode is better.
inline CumulativeOrder compare_cumulative(const ImpactReport& a, const ImpactReport& b) {
    require(a.episodes() == b.episodes(), "compare_cumulative: episode counts differ");
    require(a.intervention_episode == b.intervention_episode, "compare_cumulative: intervention episodes differ");
    require(a.episodes() >= 1, "compare_cumulative: empty reports");
    const double fa = a.final_cumulative(), fb = b.final_cumulative();
    if (fa > fb) return CumulativeOrder::FirstBetter;
    if (fa < fb) return CumulativeOrder::SecondBetter;
    return CumulativeOrder::Tie;
}

} // namespace shiftbench
