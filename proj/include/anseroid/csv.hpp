#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "anseroid/analysis.hpp"
#include "anseroid/sim.hpp"

namespace anseroid {

// 17 significant digits round-trip doubles exactly, which keeps the
// trajectory output reproducible bit for bit.
inline std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

inline const char* mode_name(ControllerMode mode) {
    return mode == ControllerMode::Constrained ? "constrained" : "relaxed";
}

inline void write_trajectory_csv(const TrajectoryRecord& record, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,id,x,y,theta,v,omega,mode,W,M,E\n";
    for (std::size_t k = 0; k < record.tick_count(); ++k) {
        for (std::size_t i = 0; i < record.agent_count(); ++i) {
            const auto& rec = record.ticks[k][i];
            out << format_double(record.times[k]) << ',' << i << ','
                << format_double(rec.state.position.x) << ',' << format_double(rec.state.position.y)
                << ',' << format_double(rec.state.heading) << ',' << format_double(rec.u.v) << ','
                << format_double(rec.u.omega) << ',' << mode_name(rec.mode) << ','
                << format_double(rec.cost.upwash_W) << ',' << format_double(rec.cost.moment_M)
                << ',' << format_double(rec.cost.cost_E) << '\n';
        }
    }
}

// Instantaneous cost per agent over time (one column per agent).
inline void write_cost_csv(const TrajectoryRecord& record, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t";
    for (std::size_t i = 0; i < record.agent_count(); ++i) out << ",E" << i;
    out << '\n';
    for (std::size_t k = 0; k < record.tick_count(); ++k) {
        out << format_double(record.times[k]);
        for (std::size_t i = 0; i < record.agent_count(); ++i)
            out << ',' << format_double(record.ticks[k][i].cost.cost_E);
        out << '\n';
    }
}

// Flock shape polylines at a handful of snapshot times: agent positions
// with their branch assignment, ordered front to rear.
inline void write_flock_shape_csv(const TrajectoryRecord& record, const FormationConfig& fc,
                                  const std::vector<double>& snapshot_times,
                                  const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,id,x,y,branch\n";
    for (const double t : snapshot_times) {
        const FormationMetrics metrics = detect_formation(record, t, fc);
        const std::size_t tick = static_cast<std::size_t>(std::llround(t / record.config.dt));
        for (std::size_t i = 0; i < record.agent_count(); ++i) {
            const auto& rec = record.ticks[tick][i];
            out << format_double(record.times[tick]) << ',' << i << ','
                << format_double(rec.state.position.x) << ','
                << format_double(rec.state.position.y) << ',' << metrics.branch[i] << '\n';
        }
    }
}

}  // namespace anseroid
