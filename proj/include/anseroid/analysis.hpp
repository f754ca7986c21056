#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "anseroid/sim.hpp"

namespace anseroid {

// --- Cost ledger -----------------------------------------------------------

struct CostLedger {
    struct PerAgent {
        double total = 0.0;     // time-integrated E (left rectangles)
        double max_e = 0.0;
        double min_e = 0.0;
        double terminal = 0.0;
    };
    std::vector<PerAgent> agents;
};

inline CostLedger cost_ledger(const TrajectoryRecord& record) {
    if (record.tick_count() == 0) throw std::invalid_argument("cost_ledger: empty record");
    const std::size_t n = record.agent_count();
    const double dt = record.config.dt;
    CostLedger ledger;
    ledger.agents.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& entry = ledger.agents[i];
        entry.max_e = entry.min_e = record.ticks.front()[i].cost.cost_E;
        for (std::size_t k = 0; k < record.tick_count(); ++k) {
            const double e = record.ticks[k][i].cost.cost_E;
            entry.max_e = std::max(entry.max_e, e);
            entry.min_e = std::min(entry.min_e, e);
            if (k + 1 < record.tick_count()) entry.total += e * dt;
        }
        entry.terminal = record.ticks.back()[i].cost.cost_E;
    }
    return ledger;
}

// --- Formation detection ----------------------------------------------------

struct FormationConfig {
    double gap_lo_factor = 1.4142135623730951;  // sqrt(2), in units of b
    double gap_hi_factor = 2.5;
    double score_min = 0.9;
    double collinear_tol = 1e-6;  // m, lateral distance treated as on-axis
};

enum class FormationClass { V, Echelon, None };

struct FormationMetrics {
    std::vector<int> branch;  // +1 left of the leader's wake axis, -1 right, 0 on axis
    std::size_t front_agent = 0;
    double score_left = 1.0;
    double score_right = 1.0;
    double mean_lateral_gap = 0.0;   // |delta lateral| between streamwise-consecutive pairs
    double mean_stream_gap = 0.0;
    double gap_compliance = 1.0;     // fraction of lateral gaps inside the window
    FormationClass cls = FormationClass::None;
};

namespace detail {

struct BranchStats {
    double score = 1.0;
    std::vector<double> gaps;
    bool populated = false;
};

// Walk a branch front-to-rear starting from the reference (the frontmost
// agent, lateral zero) and score strict outward growth of |lateral|.
inline BranchStats branch_stats(std::vector<std::pair<double, double>> members) {
    BranchStats out;
    if (members.empty()) return out;
    out.populated = true;
    std::sort(members.begin(), members.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    double prev = 0.0;  // reference lateral offset
    int increasing = 0;
    for (const auto& [stream, lateral] : members) {
        const double mag = std::abs(lateral);
        out.gaps.push_back(mag - prev);
        if (mag > prev) ++increasing;
        prev = mag;
    }
    out.score = static_cast<double>(increasing) / static_cast<double>(members.size());
    return out;
}

}  // namespace detail

inline FormationMetrics detect_formation(const TrajectoryRecord& record, double at_time,
                                         const FormationConfig& fc = {}) {
    if (record.tick_count() == 0) throw std::invalid_argument("detect_formation: empty record");
    const double dt = record.config.dt;
    std::size_t tick = static_cast<std::size_t>(std::llround(at_time / dt));
    if (at_time < 0.0 || tick >= record.tick_count())
        throw std::invalid_argument("detect_formation: at_time outside record");

    const std::size_t n = record.agent_count();
    const double theta_g = record.config.controller.theta_g;
    const Vec2 xhat = heading_vector(theta_g);
    const Vec2 yhat{-xhat.y, xhat.x};

    std::vector<double> stream(n), lateral(n);
    std::size_t front = 0;
    for (std::size_t i = 0; i < n; ++i) {
        stream[i] = record.ticks[tick][i].state.position.dot(xhat);
        if (stream[i] > stream[front]) front = i;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 rel = record.ticks[tick][i].state.position - record.ticks[tick][front].state.position;
        lateral[i] = rel.dot(yhat);
    }

    double mean_b = 0.0;
    for (const auto& a : record.config.agents) mean_b += a.aero.vortex.half_span;
    mean_b /= static_cast<double>(n);

    FormationMetrics out;
    out.front_agent = front;
    out.branch.assign(n, 0);
    std::vector<std::pair<double, double>> left, right;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == front || std::abs(lateral[i]) <= fc.collinear_tol) continue;
        out.branch[i] = lateral[i] > 0.0 ? 1 : -1;
        (lateral[i] > 0.0 ? left : right).emplace_back(stream[i], lateral[i]);
    }

    const auto ls = detail::branch_stats(std::move(left));
    const auto rs = detail::branch_stats(std::move(right));
    out.score_left = ls.score;
    out.score_right = rs.score;

    std::vector<double> all_gaps = ls.gaps;
    all_gaps.insert(all_gaps.end(), rs.gaps.begin(), rs.gaps.end());
    if (!all_gaps.empty()) {
        out.mean_lateral_gap =
            std::accumulate(all_gaps.begin(), all_gaps.end(), 0.0) / all_gaps.size();
        const double lo = fc.gap_lo_factor * mean_b;
        const double hi = fc.gap_hi_factor * mean_b;
        const auto inside = std::count_if(all_gaps.begin(), all_gaps.end(),
                                          [&](double g) { return g > lo && g < hi; });
        out.gap_compliance = static_cast<double>(inside) / all_gaps.size();
    }

    std::vector<double> ordered = stream;
    std::sort(ordered.begin(), ordered.end(), std::greater<>());
    double stream_gap_sum = 0.0;
    for (std::size_t i = 0; i + 1 < ordered.size(); ++i) stream_gap_sum += ordered[i] - ordered[i + 1];
    if (n > 1) out.mean_stream_gap = stream_gap_sum / static_cast<double>(n - 1);

    if (ls.populated && rs.populated) {
        if (ls.score >= fc.score_min && rs.score >= fc.score_min) out.cls = FormationClass::V;
    } else if (ls.populated || rs.populated) {
        const double score = ls.populated ? ls.score : rs.score;
        if (score >= fc.score_min) out.cls = FormationClass::Echelon;
    }
    return out;
}

// --- Stability (speeds constant, headings aligned) --------------------------

struct StabilityReport {
    bool stable = false;
    std::vector<double> speed_residual;    // max |v(t) - v(t_f)| per agent
    std::vector<double> heading_residual;  // max |theta(t) - theta_g| per agent
};

inline StabilityReport stability_check(const TrajectoryRecord& record, double window) {
    if (record.tick_count() == 0) throw std::invalid_argument("stability_check: empty record");
    const double t_end = record.times.back();
    if (window > record.config.duration + 1e-12)
        throw std::invalid_argument("stability_check: window exceeds duration");

    const std::size_t n = record.agent_count();
    StabilityReport report;
    report.speed_residual.assign(n, 0.0);
    report.heading_residual.assign(n, 0.0);
    report.stable = true;

    for (std::size_t i = 0; i < n; ++i) {
        const double v_final = record.ticks.back()[i].u.v;
        for (std::size_t k = 0; k < record.tick_count(); ++k) {
            if (record.times[k] < t_end - window - 1e-12) continue;
            const auto& rec = record.ticks[k][i];
            report.speed_residual[i] =
                std::max(report.speed_residual[i], std::abs(rec.u.v - v_final));
            report.heading_residual[i] = std::max(
                report.heading_residual[i],
                std::abs(angle_difference(rec.state.heading, record.config.controller.theta_g)));
        }
        const auto& bounds = record.config.agents[i].bounds;
        if (report.speed_residual[i] >= 0.01 * (bounds.v_max - bounds.v_min)) report.stable = false;
        if (report.heading_residual[i] > record.config.controller.epsilon) report.stable = false;
    }
    return report;
}

// --- Greedy divergence experiment -------------------------------------------

struct SeparationSeries {
    struct Pair {
        std::size_t leader = 0;
        std::size_t follower = 0;
        std::vector<double> separation;
        std::vector<double> follower_upwash;
    };
    std::vector<double> times;
    std::vector<Pair> pairs;
};

inline SeparationSeries separation_series(const TrajectoryRecord& record) {
    SeparationSeries out;
    out.times = record.times;
    const std::size_t n = record.agent_count();
    if (n < 2) return out;

    const Vec2 xhat = heading_vector(record.config.controller.theta_g);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return record.ticks.front()[a].state.position.dot(xhat) >
               record.ticks.front()[b].state.position.dot(xhat);
    });

    for (std::size_t p = 0; p + 1 < n; ++p) {
        SeparationSeries::Pair pair;
        pair.leader = order[p];
        pair.follower = order[p + 1];
        pair.separation.reserve(record.tick_count());
        pair.follower_upwash.reserve(record.tick_count());
        for (std::size_t k = 0; k < record.tick_count(); ++k) {
            const Vec2 d = record.ticks[k][pair.leader].state.position -
                           record.ticks[k][pair.follower].state.position;
            pair.separation.push_back(d.norm());
            pair.follower_upwash.push_back(record.ticks[k][pair.follower].cost.upwash_W);
        }
        out.pairs.push_back(std::move(pair));
    }
    return out;
}

// Run the scenario with every agent forced into the relaxed (greedy) mode
// and report leader-follower separations over time.
inline SeparationSeries greedy_divergence_experiment(const ScenarioConfig& cfg) {
    ScenarioConfig greedy_cfg = cfg;
    greedy_cfg.greedy = true;
    return separation_series(run_scenario(greedy_cfg));
}

}  // namespace anseroid
