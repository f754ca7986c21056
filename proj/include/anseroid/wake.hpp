#pragma once

#include <cmath>
#include <stdexcept>

#include "anseroid/geometry.hpp"

namespace anseroid {

// Tip vortex with a rotational core. The irrotational 1/r profile applies
// outside the core radius r_star; inside, velocity grows linearly so the
// field stays finite at the tip. r_star, gamma and omega are tied together
// by r* = sqrt(gamma / (2*pi*omega)).
struct VortexParams {
    double gamma = 0.0;      // circulation, m^2/s
    double omega = 0.0;      // core angular rate
    double r_star = 0.0;     // core radius, m
    double half_span = 0.0;  // b, m

    static VortexParams from_core_rate(double gamma, double omega, double half_span) {
        VortexParams vp;
        vp.gamma = gamma;
        vp.omega = omega;
        vp.r_star = std::sqrt(gamma / (kTwoPi * omega));
        vp.half_span = half_span;
        vp.validate();
        return vp;
    }

    static VortexParams from_core_radius(double gamma, double r_star, double half_span) {
        VortexParams vp;
        vp.gamma = gamma;
        vp.r_star = r_star;
        vp.omega = gamma / (kTwoPi * r_star * r_star);
        vp.half_span = half_span;
        vp.validate();
        return vp;
    }

    void validate() const {
        if (!(gamma > 0.0)) throw std::invalid_argument("VortexParams: gamma must be > 0");
        if (!(omega > 0.0)) throw std::invalid_argument("VortexParams: omega must be > 0");
        if (!(half_span > 0.0)) throw std::invalid_argument("VortexParams: half_span must be > 0");
        const double expected = std::sqrt(gamma / (kTwoPi * omega));
        if (std::abs(r_star - expected) > 1e-12 * expected)
            throw std::invalid_argument("VortexParams: r_star inconsistent with gamma and omega");
        if (!(r_star < half_span))
            throw std::invalid_argument("VortexParams: r_star must be smaller than half_span");
    }
};

// Streamwise envelope of the wake: a Gaussian bump in trailing distance,
// peaking (with value 2) at distance mu behind the wing.
struct WakeShape {
    double mu = 0.0;     // peak offset, m
    double sigma = 0.0;  // wake length scale, m

    void validate() const {
        if (!(mu > 0.0)) throw std::invalid_argument("WakeShape: mu must be > 0");
        if (!(sigma > 0.0)) throw std::invalid_argument("WakeShape: sigma must be > 0");
    }
};

// Vertical airspeed induced by a single tip vortex at signed distance r
// from its center. Odd in r, continuous at |r| = r_star.
inline double vortex_velocity(double r, const VortexParams& vp) {
    if (std::abs(r) >= vp.r_star) return vp.gamma / (kTwoPi * r);
    return vp.omega * r;
}

// Spanwise upwash profile of a whole wing: two counter-rotating tip
// vortices at y = +/-b. Even in y; downwash between the tips, upwash
// outboard of them.
inline double spanwise_profile(double y, const VortexParams& vp) {
    return vortex_velocity(y - vp.half_span, vp) - vortex_velocity(y + vp.half_span, vp);
}

// Dimensionless streamwise gain at a given trailing distance behind the
// wing (positive = behind). Maximum value is exactly 2 at d = mu.
inline double streamwise_gain(double trailing_distance, const WakeShape& ws) {
    const double z = (trailing_distance - ws.mu) / ws.sigma;
    return 2.0 * std::exp(-0.5 * z * z);
}

// Coordinates of a point in the wake frame of an emitting vehicle:
// x along its heading, y to its left.
struct WakeLocal {
    double x = 0.0;
    double y = 0.0;
};

inline WakeLocal wake_frame_local(const Vec2& point, const VehicleState& emitter) {
    const Vec2 s = point - emitter.position;
    const Vec2 xhat = heading_vector(emitter.heading);
    const Vec2 yhat{-xhat.y, xhat.x};
    return {s.dot(xhat), s.dot(yhat)};
}

// Pointwise upwash induced at pos_i by the wake of the vehicle at pose_j.
// The gain is evaluated on the trailing distance -x, so the peak sits at
// streamwise offset -mu (a follower behind the emitter).
inline double point_upwash(const Vec2& pos_i, const VehicleState& pose_j, const VortexParams& vp,
                           const WakeShape& ws) {
    const WakeLocal local = wake_frame_local(pos_i, pose_j);
    return spanwise_profile(local.y, vp) * streamwise_gain(-local.x, ws);
}

}  // namespace anseroid
