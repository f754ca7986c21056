#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "anseroid/aeroforces.hpp"
#include "anseroid/drag.hpp"
#include "anseroid/geometry.hpp"

namespace anseroid {

struct ControlInput {
    double v = 0.0;      // airspeed, m/s
    double omega = 0.0;  // turn rate, rad/s
};

struct ControlBounds {
    double v_min = 0.0;
    double v_max = 0.0;
    double omega_max = 0.0;

    void validate() const {
        if (!(v_min > 0.0 && v_min < v_max))
            throw std::invalid_argument("ControlBounds: need 0 < v_min < v_max");
        if (!(omega_max > 0.0)) throw std::invalid_argument("ControlBounds: omega_max must be > 0");
    }
};

enum class SpeedObjective { Drag, Power };

struct ControllerConfig {
    double rho = 0.0;       // descent-rate bound, <= 0
    double epsilon = 0.1;   // heading corridor half-width, rad
    double theta_g = 0.0;   // global heading, rad
    double kappa = 0.25;    // roll/pitch tradeoff in E
    int omega_samples = 41;  // odd grid over the admissible corridor
    int refine_factor = 10;
    SpeedObjective speed_objective = SpeedObjective::Drag;

    void validate() const {
        if (rho > 0.0) throw std::invalid_argument("ControllerConfig: rho must be <= 0");
        if (!(epsilon > 0.0)) throw std::invalid_argument("ControllerConfig: epsilon must be > 0");
        if (kappa < 0.0) throw std::invalid_argument("ControllerConfig: kappa must be >= 0");
        if (omega_samples < 3 || omega_samples % 2 == 0)
            throw std::invalid_argument("ControllerConfig: omega_samples must be odd and >= 3");
        if (refine_factor < 1)
            throw std::invalid_argument("ControllerConfig: refine_factor must be >= 1");
    }
};

enum class ControllerMode { Constrained, Relaxed };

struct VelocityInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Feasible airspeed interval of v * lfe <= rhs within [v_min, v_max].
// The left side is linear in v, so only the endpoints matter.
inline std::optional<VelocityInterval> feasible_speed_interval(double lfe, double rhs,
                                                               const ControlBounds& bounds) {
    if (lfe > 0.0) {
        const double cap = rhs / lfe;
        if (cap < bounds.v_min) return std::nullopt;
        return VelocityInterval{bounds.v_min, std::min(bounds.v_max, cap)};
    }
    if (lfe < 0.0) {
        const double floor = rhs / lfe;
        if (floor > bounds.v_max) return std::nullopt;
        return VelocityInterval{std::max(bounds.v_min, floor), bounds.v_max};
    }
    if (rhs < 0.0) return std::nullopt;
    return VelocityInterval{bounds.v_min, bounds.v_max};
}

struct GateResult {
    bool premise_ok = false;  // |theta - theta_g| <= epsilon
    bool feasible = false;
    VelocityInterval interval;
    double lie_derivative = 0.0;
};

// Necessary-and-sufficient emptiness test for the constrained problem at
// the current heading: does some admissible airspeed satisfy
// v * L_f E <= rho - dE/dt?
inline GateResult feasibility_gate(const VehicleState& state, const FlockCostSample& cost,
                                   const ControlBounds& bounds, const ControllerConfig& cfg) {
    GateResult out;
    out.premise_ok = std::abs(angle_difference(state.heading, cfg.theta_g)) <= cfg.epsilon + 1e-12;
    out.lie_derivative = cost.grad_E.dot(heading_vector(state.heading));
    const double rhs = cfg.rho - cost.dE_dt;
    if (const auto iv = feasible_speed_interval(out.lie_derivative, rhs, bounds)) {
        out.feasible = true;
        out.interval = *iv;
    }
    return out;
}

// Relaxed problem: track the drag-minimizing speed, hold heading.
inline ControlInput solve_relaxed(const ControlBounds& bounds, double v_star) {
    return {std::clamp(v_star, bounds.v_min, bounds.v_max), 0.0};
}

struct ConstrainedSolution {
    bool feasible = false;
    ControlInput u;
    double objective = 0.0;
};

namespace detail {

struct Candidate {
    bool valid = false;
    double v = 0.0;
    double omega = 0.0;
    double objective = 0.0;
};

inline Candidate evaluate_omega(double omega, const VehicleState& state,
                                const FlockCostSample& cost, const ControlBounds& bounds,
                                const ControllerConfig& cfg, double v_star, double dt) {
    Candidate c;
    const double theta_next = state.heading + omega * dt;
    const double lfe = cost.grad_E.dot(heading_vector(theta_next));
    const auto iv = feasible_speed_interval(lfe, cfg.rho - cost.dE_dt, bounds);
    if (!iv) return c;
    c.valid = true;
    c.omega = omega;
    c.v = std::clamp(v_star, iv->lo, iv->hi);
    const double dv = (c.v - v_star) / (bounds.v_max - bounds.v_min);
    const double dw = omega / bounds.omega_max;
    c.objective = dv * dv + dw * dw;
    return c;
}

// Ties break toward the smallest |omega|, then the smallest |v - v_star|.
inline bool better(const Candidate& a, const Candidate& b, double v_star) {
    if (!b.valid) return a.valid;
    if (!a.valid) return false;
    if (a.objective != b.objective) return a.objective < b.objective;
    if (std::abs(a.omega) != std::abs(b.omega)) return std::abs(a.omega) < std::abs(b.omega);
    return std::abs(a.v - v_star) < std::abs(b.v - v_star);
}

}  // namespace detail

// Constrained problem: minimize the normalized locomotive-power objective
// over the turn-rate corridor and the speed interval the energy-descent
// constraint leaves open at the post-step heading. The turn rate is
// discretized (the constraint is linear in v for a fixed heading), with a
// refinement pass around the incumbent.
inline ConstrainedSolution solve_constrained(const VehicleState& state, const FlockCostSample& cost,
                                             const ControlBounds& bounds, const ControllerConfig& cfg,
                                             double v_star, double dt) {
    ConstrainedSolution out;
    const double delta = angle_difference(cfg.theta_g, state.heading);
    double omega_lo = std::max(-bounds.omega_max, (delta - cfg.epsilon) / dt);
    double omega_hi = std::min(bounds.omega_max, (delta + cfg.epsilon) / dt);
    if (omega_lo > omega_hi) return out;

    detail::Candidate best;
    const int n = cfg.omega_samples;
    const double step = (omega_hi - omega_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const auto c =
            detail::evaluate_omega(omega_lo + i * step, state, cost, bounds, cfg, v_star, dt);
        if (detail::better(c, best, v_star)) best = c;
    }
    // Zero turn rate is always a candidate when admissible so that the
    // grid verdict agrees with the current-heading gate.
    if (omega_lo <= 0.0 && 0.0 <= omega_hi) {
        const auto c = detail::evaluate_omega(0.0, state, cost, bounds, cfg, v_star, dt);
        if (detail::better(c, best, v_star)) best = c;
    }
    if (!best.valid) return out;

    if (step > 0.0) {
        const double fine_lo = std::max(omega_lo, best.omega - step);
        const double fine_hi = std::min(omega_hi, best.omega + step);
        const int m = 2 * cfg.refine_factor;
        const double fine_step = (fine_hi - fine_lo) / m;
        for (int i = 0; i <= m; ++i) {
            const auto c =
                detail::evaluate_omega(fine_lo + i * fine_step, state, cost, bounds, cfg, v_star, dt);
            if (detail::better(c, best, v_star)) best = c;
        }
    }

    out.feasible = true;
    out.u = {best.v, best.omega};
    out.objective = best.objective;
    return out;
}

struct ControlDecision {
    ControlInput u;
    ControllerMode mode = ControllerMode::Relaxed;
    FlockCostSample cost;
    double v_star = 0.0;
    bool gate_feasible = false;
};

// One full decision: evaluate the flock cost, find the drag-minimizing
// speed, gate feasibility and dispatch to the constrained or relaxed
// problem. A heading outside the corridor (bad initialization) is corrected
// by saturating the turn rate toward theta_g before anything else.
inline ControlDecision control_step(const VehicleState& state,
                                    const std::vector<NeighborSnapshot>& neighbors,
                                    const DragParams& drag, const ControlBounds& bounds,
                                    const ControllerConfig& cfg, const FieldCutoff& cutoff,
                                    double dt) {
    ControlDecision out;
    out.cost = flock_cost(state.position, neighbors, cfg.kappa, cutoff);
    out.v_star = cfg.speed_objective == SpeedObjective::Drag
                     ? optimal_airspeed(out.cost.upwash_W, drag)
                     : power_optimal_airspeed(drag);

    const double delta = angle_difference(cfg.theta_g, state.heading);
    if (std::abs(delta) > cfg.epsilon + 1e-12) {
        out.u.omega = std::clamp(delta / dt, -bounds.omega_max, bounds.omega_max);
        out.u.v = std::clamp(out.v_star, bounds.v_min, bounds.v_max);
        out.mode = ControllerMode::Relaxed;
        return out;
    }

    const auto solution = solve_constrained(state, out.cost, bounds, cfg, out.v_star, dt);
    out.gate_feasible = solution.feasible;
    if (solution.feasible) {
        out.u = solution.u;
        out.mode = ControllerMode::Constrained;
    } else {
        out.u = solve_relaxed(bounds, out.v_star);
        out.mode = ControllerMode::Relaxed;
    }
    return out;
}

}  // namespace anseroid
