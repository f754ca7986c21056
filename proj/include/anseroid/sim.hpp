#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "anseroid/controller.hpp"
#include "anseroid/geometry.hpp"

namespace anseroid {

// Exact flow of the unicycle under piecewise-constant controls: a straight
// segment when the turn rate vanishes, a circular arc otherwise.
inline VehicleState integrate_step(const VehicleState& state, const ControlInput& u, double dt) {
    VehicleState out = state;
    if (std::abs(u.omega) < 1e-9) {
        out.position += u.v * dt * heading_vector(state.heading);
        out.heading = normalize_angle(state.heading + u.omega * dt);
    } else {
        const double theta_next = state.heading + u.omega * dt;
        const double radius = u.v / u.omega;
        out.position.x += radius * (std::sin(theta_next) - std::sin(state.heading));
        out.position.y += radius * (std::cos(state.heading) - std::cos(theta_next));
        out.heading = normalize_angle(theta_next);
    }
    return out;
}

struct AgentSpec {
    VehicleState initial_state;
    double initial_speed = 0.0;  // seeds the first frozen-speed snapshot
    AeroParams aero;
    DragParams drag;
    ControlBounds bounds;
};

// Zero-mean normal perturbations applied once to the initial states,
// drawn from the scenario seed.
struct InitJitter {
    double pos_x = 0.0;
    double pos_y = 0.0;
    double heading = 0.0;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::vector<AgentSpec> agents;
    ControllerConfig controller;
    FieldCutoff cutoff;
    double dt = 0.02;
    double duration = 20.0;
    std::uint64_t seed = 1;
    InitJitter jitter;
    bool greedy = false;  // force the relaxed problem everywhere
    int threads = 1;

    void validate() const {
        if (agents.empty()) throw std::invalid_argument("ScenarioConfig: no agents");
        if (!(dt > 0.0)) throw std::invalid_argument("ScenarioConfig: dt must be > 0");
        if (!(duration > dt)) throw std::invalid_argument("ScenarioConfig: duration must exceed dt");
        controller.validate();
        for (const auto& a : agents) {
            a.bounds.validate();
            a.drag.validate();
            a.aero.vortex.validate();
            a.aero.wake.validate();
            if (a.initial_speed < a.bounds.v_min || a.initial_speed > a.bounds.v_max)
                throw std::invalid_argument("ScenarioConfig: initial_speed outside bounds");
        }
    }
};

struct AgentRecord {
    VehicleState state;
    ControlInput u;
    ControllerMode mode = ControllerMode::Relaxed;
    FlockCostSample cost;
    double v_star = 0.0;
    bool gate_feasible = false;
};

struct TrajectoryRecord {
    ScenarioConfig config;  // resolved configuration the run used
    std::vector<double> times;
    std::vector<std::vector<AgentRecord>> ticks;  // [tick][agent]

    std::size_t agent_count() const { return config.agents.size(); }
    std::size_t tick_count() const { return times.size(); }
};

class SimulationError : public std::runtime_error {
  public:
    SimulationError(const std::string& what, long tick)
        : std::runtime_error(what), tick_(tick) {}
    long tick() const { return tick_; }

  private:
    long tick_;
};

namespace detail {

inline std::vector<VehicleState> jittered_initial_states(const ScenarioConfig& cfg) {
    std::vector<VehicleState> states;
    states.reserve(cfg.agents.size());
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (const auto& a : cfg.agents) {
        VehicleState s = a.initial_state;
        if (cfg.jitter.pos_x > 0.0) s.position.x += cfg.jitter.pos_x * unit(rng);
        if (cfg.jitter.pos_y > 0.0) s.position.y += cfg.jitter.pos_y * unit(rng);
        if (cfg.jitter.heading > 0.0) {
            const double margin = 0.9 * cfg.controller.epsilon;
            double dh = cfg.jitter.heading * unit(rng);
            dh = std::clamp(dh, -margin, margin);
            s.heading = normalize_angle(cfg.controller.theta_g + dh);
        }
        s.heading = normalize_angle(s.heading);
        states.push_back(s);
    }
    return states;
}

template <typename Fn>
inline void for_each_agent(std::size_t n, int threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        }));
    }
    for (auto& f : futures) f.get();
}

}  // namespace detail

// Fixed-step loop: snapshot the world, decide all controls against the
// immutable snapshot, record, then advance every agent synchronously.
// Deterministic for a given config and seed.
inline TrajectoryRecord run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.agents.size();

    TrajectoryRecord record;
    record.config = cfg;

    std::vector<VehicleState> states = detail::jittered_initial_states(cfg);
    std::vector<double> speeds;
    speeds.reserve(n);
    for (const auto& a : cfg.agents) speeds.push_back(a.initial_speed);
    // the record carries the realized (jittered) initial states
    for (std::size_t i = 0; i < n; ++i) record.config.agents[i].initial_state = states[i];

    const long steps = static_cast<long>(std::floor(cfg.duration / cfg.dt + 1e-9));
    record.times.reserve(steps + 1);
    record.ticks.reserve(steps + 1);

    std::vector<ControlDecision> decisions(n);
    for (long k = 0; k <= steps; ++k) {
        std::vector<NeighborSnapshot> world(n);
        for (std::size_t i = 0; i < n; ++i)
            world[i] = NeighborSnapshot{states[i], speeds[i], cfg.agents[i].aero};

        detail::for_each_agent(n, cfg.threads, [&](std::size_t i) {
            std::vector<NeighborSnapshot> neighbors;
            neighbors.reserve(n - 1);
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) neighbors.push_back(world[j]);
            if (cfg.greedy) {
                ControlDecision d;
                d.cost = flock_cost(states[i].position, neighbors, cfg.controller.kappa, cfg.cutoff);
                d.v_star = optimal_airspeed(d.cost.upwash_W, cfg.agents[i].drag);
                d.u = solve_relaxed(cfg.agents[i].bounds, d.v_star);
                d.mode = ControllerMode::Relaxed;
                decisions[i] = d;
            } else {
                decisions[i] = control_step(states[i], neighbors, cfg.agents[i].drag,
                                            cfg.agents[i].bounds, cfg.controller, cfg.cutoff,
                                            cfg.dt);
            }
        });

        record.times.push_back(k * cfg.dt);
        std::vector<AgentRecord> tick(n);
        for (std::size_t i = 0; i < n; ++i) {
            tick[i] = AgentRecord{states[i],        decisions[i].u,    decisions[i].mode,
                                  decisions[i].cost, decisions[i].v_star,
                                  decisions[i].gate_feasible};
            if (!std::isfinite(states[i].position.x) || !std::isfinite(states[i].position.y) ||
                !std::isfinite(states[i].heading) || !std::isfinite(decisions[i].u.v) ||
                !std::isfinite(decisions[i].u.omega))
                throw SimulationError("non-finite state for agent " + std::to_string(i), k);
        }
        record.ticks.push_back(std::move(tick));

        if (k < steps) {
            for (std::size_t i = 0; i < n; ++i) {
                states[i] = integrate_step(states[i], decisions[i].u, cfg.dt);
                speeds[i] = decisions[i].u.v;
            }
        }
    }
    return record;
}

}  // namespace anseroid
