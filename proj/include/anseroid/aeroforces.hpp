#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "anseroid/geometry.hpp"
#include "anseroid/wake.hpp"

namespace anseroid {

// Everything a neighbor's wake model needs, bundled per vehicle so that
// heterogeneous flocks are possible.
struct AeroParams {
    VortexParams vortex;
    WakeShape wake;
    double lift = 0.0;  // L, N
};

// --- Closed-form wing integrals -------------------------------------------
//
// The spanwise profile f is integrated across a wing of span 2b. Writing
// f(xi) = u(xi - b) - u(xi + b) and substituting reduces both integrals to
// evaluations of two scalar antiderivatives of the vortex profile:
//   U(r) = antiderivative of u(r)      (even, log outside the core)
//   V(r) = antiderivative of r*u(r)    (odd, linear outside the core)
// Both are continuous across the core boundary, so the expressions below
// hold for every placement of the wing relative to the vortices.

inline double vortex_velocity_antiderivative(double r, const VortexParams& vp) {
    const double a = std::abs(r);
    if (a <= vp.r_star) return 0.5 * vp.omega * r * r;
    return vp.gamma / kTwoPi * std::log(a / vp.r_star) + 0.5 * vp.omega * vp.r_star * vp.r_star;
}

inline double vortex_first_moment_antiderivative(double r, const VortexParams& vp) {
    const double core = vp.omega * vp.r_star * vp.r_star * vp.r_star / 3.0;
    if (std::abs(r) <= vp.r_star) return vp.omega * r * r * r / 3.0;
    if (r > 0.0) return vp.gamma / kTwoPi * (r - vp.r_star) + core;
    return vp.gamma / kTwoPi * (r + vp.r_star) - core;
}

// integral of f over [y-b, y+b]
inline double upwash_integral(double y, const VortexParams& vp) {
    const double span = 2.0 * vp.half_span;
    const auto U = [&](double r) { return vortex_velocity_antiderivative(r, vp); };
    return 2.0 * U(y) - U(y - span) - U(y + span);
}

inline double upwash_integral_dy(double y, const VortexParams& vp) {
    const double span = 2.0 * vp.half_span;
    return 2.0 * vortex_velocity(y, vp) - vortex_velocity(y - span, vp) -
           vortex_velocity(y + span, vp);
}

// integral of (xi - y) * f(xi) over [y-b, y+b]
inline double moment_integral(double y, const VortexParams& vp) {
    const double b = vp.half_span;
    const double span = 2.0 * b;
    const auto U = [&](double r) { return vortex_velocity_antiderivative(r, vp); };
    const auto V = [&](double r) { return vortex_first_moment_antiderivative(r, vp); };
    return 2.0 * V(y) - V(y - span) - V(y + span) + (b - y) * (U(y) - U(y - span)) +
           (b + y) * (U(y + span) - U(y));
}

inline double moment_integral_dy(double y, const VortexParams& vp) {
    const double span = 2.0 * vp.half_span;
    return vp.half_span * (vortex_velocity(y - span, vp) - vortex_velocity(y + span, vp)) -
           upwash_integral(y, vp);
}

// Streamwise gain as a function of the relative streamwise offset x of the
// receiving vehicle (negative when trailing). Peak at x = -mu.
inline double streamwise_gain_at_offset(double x, const WakeShape& ws) {
    return streamwise_gain(-x, ws);
}

inline double streamwise_gain_at_offset_dx(double x, const WakeShape& ws) {
    return -streamwise_gain(-x, ws) * (x + ws.mu) / (ws.sigma * ws.sigma);
}

// Wing-integrated upwash at relative offset (x, y) in the emitter's wake frame.
inline double upwash_force(double x, double y, const VortexParams& vp, const WakeShape& ws) {
    return streamwise_gain_at_offset(x, ws) * upwash_integral(y, vp);
}

// Wing-integrated rolling tendency at relative offset (x, y).
inline double roll_moment(double x, double y, const VortexParams& vp, const WakeShape& ws) {
    return streamwise_gain_at_offset(x, ws) * moment_integral(y, vp);
}

// Neighbors whose influence falls below these limits contribute exactly
// zero, which bounds the per-agent cost in large flocks.
struct FieldCutoff {
    double min_gain = 1e-9;
    double span_multiple = 8.0;
};

struct NeighborSnapshot {
    VehicleState pose;
    double speed = 0.0;  // held constant while differentiating in time
    AeroParams aero;
};

// One neighbor's contribution: values and world-frame gradients with
// respect to the receiving agent's position.
struct PairwiseField {
    double w = 0.0;
    double m = 0.0;
    Vec2 grad_w;
    Vec2 grad_m;
    bool negligible = true;
};

inline PairwiseField pairwise_field(const Vec2& self_pos, const NeighborSnapshot& nb,
                                    const FieldCutoff& cutoff = {}) {
    PairwiseField out;
    const VortexParams& vp = nb.aero.vortex;
    const WakeShape& ws = nb.aero.wake;
    const WakeLocal local = wake_frame_local(self_pos, nb.pose);

    const double gain = streamwise_gain_at_offset(local.x, ws);
    if (gain < cutoff.min_gain || std::abs(local.y) > cutoff.span_multiple * vp.half_span)
        return out;

    const double iw = upwash_integral(local.y, vp);
    const double im = moment_integral(local.y, vp);
    const double gain_dx = streamwise_gain_at_offset_dx(local.x, ws);

    const Vec2 xhat = heading_vector(nb.pose.heading);
    const Vec2 yhat{-xhat.y, xhat.x};

    out.w = gain * iw;
    out.m = gain * im;
    out.grad_w = gain_dx * iw * xhat + gain * upwash_integral_dy(local.y, vp) * yhat;
    out.grad_m = gain_dx * im * xhat + gain * moment_integral_dy(local.y, vp) * yhat;
    out.negligible = false;
    return out;
}

struct AggregateFields {
    double upwash_W = 0.0;
    double moment_M = 0.0;
};

inline AggregateFields aggregate_fields(const Vec2& self_pos,
                                        const std::vector<NeighborSnapshot>& neighbors,
                                        const FieldCutoff& cutoff = {}) {
    AggregateFields agg;
    for (const auto& nb : neighbors) {
        const PairwiseField pf = pairwise_field(self_pos, nb, cutoff);
        agg.upwash_W += pf.w;
        agg.moment_M += pf.m;
    }
    return agg;
}

// Cost-to-flock sample at one agent position: E = kappa*|M| - W together
// with its spatial gradient and the partial time derivative obtained by
// letting every neighbor advance at its frozen velocity.
struct FlockCostSample {
    double upwash_W = 0.0;
    double moment_M = 0.0;
    double cost_E = 0.0;
    Vec2 grad_E;
    double dE_dt = 0.0;
};

inline constexpr double kMomentKinkTolerance = 1e-9;

inline FlockCostSample flock_cost(const Vec2& self_pos,
                                  const std::vector<NeighborSnapshot>& neighbors, double kappa,
                                  const FieldCutoff& cutoff = {}) {
    if (kappa < 0.0) throw std::invalid_argument("flock_cost: kappa must be >= 0");

    std::vector<PairwiseField> fields;
    fields.reserve(neighbors.size());
    FlockCostSample sample;
    for (const auto& nb : neighbors) {
        fields.push_back(pairwise_field(self_pos, nb, cutoff));
        sample.upwash_W += fields.back().w;
        sample.moment_M += fields.back().m;
    }

    // Fixed subgradient selection at the |M| kink keeps the controller
    // deterministic.
    const double sign_M =
        std::abs(sample.moment_M) < kMomentKinkTolerance ? 0.0 : (sample.moment_M > 0.0 ? 1.0 : -1.0);

    sample.cost_E = kappa * std::abs(sample.moment_M) - sample.upwash_W;

    Vec2 grad_E;
    double dE_dt = 0.0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].negligible) continue;
        const Vec2 piece = kappa * sign_M * fields[i].grad_m - fields[i].grad_w;
        grad_E += piece;
        // The neighbor moving shifts the relative offset the opposite way.
        const Vec2 vel = neighbors[i].speed * heading_vector(neighbors[i].pose.heading);
        dE_dt -= piece.dot(vel);
    }
    sample.grad_E = grad_E;
    sample.dE_dt = dE_dt;
    return sample;
}

}  // namespace anseroid
