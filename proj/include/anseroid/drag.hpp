#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anseroid/wake.hpp"

namespace anseroid {

struct DragParams {
    double c1 = 0.0;    // profile drag coefficient
    double c2 = 0.0;    // induced drag coefficient
    double lift = 0.0;  // L, N

    void validate() const {
        if (!(c1 > 0.0)) throw std::invalid_argument("DragParams: c1 must be > 0");
        if (!(c2 > 0.0)) throw std::invalid_argument("DragParams: c2 must be > 0");
        if (!(lift > 0.0)) throw std::invalid_argument("DragParams: lift must be > 0");
    }
};

// Total drag at airspeed v under aggregate upwash W:
// C1 v^2 + C2 / v^2 - (L / v) W.
inline double drag_force(double v, double upwash_W, const DragParams& dp) {
    if (!(v > 0.0)) throw std::domain_error("drag_force: airspeed must be > 0");
    return dp.c1 * v * v + dp.c2 / (v * v) - dp.lift / v * upwash_W;
}

// Drag-minimizing airspeed in isolation.
inline double isolated_optimal_airspeed(const DragParams& dp) {
    return std::pow(dp.c2 / dp.c1, 0.25);
}

// Speed that minimizes power lost to drag (F * v) instead of drag itself.
// The upwash term -L*W is constant in v there, so the optimum does not
// respond to the wake; drag minimization is the default mode.
inline double power_optimal_airspeed(const DragParams& dp) {
    return std::pow(dp.c2 / (3.0 * dp.c1), 0.25);
}

// The unique positive root of v^4 + (L / 2C1) W v - C2/C1 = 0, found by
// bisection. The quartic has exactly one positive real root for every W,
// so a sign-change bracket is always available.
inline double optimal_airspeed(double upwash_W, const DragParams& dp) {
    const double ratio = dp.c2 / dp.c1;
    const double coeff = dp.lift / (2.0 * dp.c1) * upwash_W;
    const auto quartic = [&](double v) { return v * v * v * v + coeff * v - ratio; };

    double lo = 1e-6;
    double hi = 2.0 * std::max(std::pow(ratio, 0.25),
                               std::cbrt(dp.lift * std::abs(upwash_W) / (2.0 * dp.c1)));
    // quartic(lo) < 0 and quartic(hi) > 0 by construction of the bracket
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (quartic(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct DerivedParams {
    VortexParams vortex;
    DragParams drag;
};

// Vehicle-level constants from weight, geometry and flight speeds.
// Circulation follows from lift balance across the span at the wake
// transport speed; induced drag from steady flight; profile drag from
// taking the cruise speed as the isolated optimum.
inline DerivedParams derive_params(double weight, double span, double cruise_speed,
                                   double wake_speed, double air_density, double core_fraction) {
    if (!(weight > 0.0)) throw std::invalid_argument("derive_params: weight must be > 0");
    if (!(span > 0.0)) throw std::invalid_argument("derive_params: span must be > 0");
    if (!(cruise_speed > 0.0)) throw std::invalid_argument("derive_params: cruise_speed must be > 0");
    if (!(wake_speed > 0.0)) throw std::invalid_argument("derive_params: wake_speed must be > 0");
    if (!(air_density > 0.0)) throw std::invalid_argument("derive_params: air_density must be > 0");
    if (!(core_fraction > 0.0 && core_fraction < 0.2))
        throw std::invalid_argument("derive_params: core_fraction must be in (0, 0.2)");

    const double half_span = 0.5 * span;
    const double gamma = weight / (span * air_density * wake_speed);
    const double r_star = core_fraction * half_span;

    DerivedParams out;
    out.vortex = VortexParams::from_core_radius(gamma, r_star, half_span);
    out.drag.c2 = weight * weight / (2.0 * air_density * kPi * half_span * half_span);
    out.drag.c1 = out.drag.c2 / std::pow(cruise_speed, 4.0);
    out.drag.lift = weight;
    out.drag.validate();
    return out;
}

}  // namespace anseroid
