#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "anseroid/controller.hpp"
#include "anseroid/scenarios.hpp"
#include "anseroid/sim.hpp"

using namespace anseroid;
using Catch::Approx;

namespace {

ControlBounds raven_bounds() { return {6.0, 15.0, 1.0}; }
DragParams raven_drag() { return {5e-3, 95.0, 18.7}; }
AeroParams raven_aero() {
    return {VortexParams::from_core_radius(1.24, 0.054, 0.7), WakeShape{2.8, 0.7}, 18.7};
}

FlockCostSample sample_with(Vec2 grad, double dE_dt) {
    FlockCostSample s;
    s.grad_E = grad;
    s.dE_dt = dE_dt;
    return s;
}

}  // namespace

TEST_CASE("feasibility gate") {
    const auto bounds = raven_bounds();
    ControllerConfig cfg;
    const VehicleState state{{0.0, 0.0}, 0.0};

    SECTION("descending field is feasible for every speed") {
        const auto gate = feasibility_gate(state, sample_with({-0.1, 0.0}, 0.0), bounds, cfg);
        CHECK(gate.premise_ok);
        CHECK(gate.feasible);
        CHECK(gate.interval.lo == Approx(bounds.v_min));
        CHECK(gate.interval.hi == Approx(bounds.v_max));
    }

    SECTION("ascending field with no compensation is infeasible") {
        const auto gate = feasibility_gate(state, sample_with({0.1, 0.0}, 0.0), bounds, cfg);
        CHECK(gate.premise_ok);
        CHECK_FALSE(gate.feasible);
    }

    SECTION("linear inequality yields a speed floor") {
        ControlBounds b2{1.0, 15.0, 1.0};
        const auto gate = feasibility_gate(state, sample_with({-0.2, 0.0}, 0.1), b2, cfg);
        CHECK(gate.feasible);
        // v * (-0.2) <= -0.1  =>  v >= 0.5, clipped to the bounds
        CHECK(gate.interval.lo == Approx(1.0));
        CHECK(gate.interval.hi == Approx(15.0));
    }

    SECTION("heading outside the corridor is reported distinctly") {
        const VehicleState off{{0.0, 0.0}, 0.5};
        const auto gate = feasibility_gate(off, sample_with({-0.1, 0.0}, 0.0), bounds, cfg);
        CHECK_FALSE(gate.premise_ok);
    }

    SECTION("zero gradient at rho = 0 is feasible with the full interval") {
        const auto gate = feasibility_gate(state, sample_with({0.0, 0.0}, 0.0), bounds, cfg);
        CHECK(gate.feasible);
        CHECK(gate.interval.lo == Approx(bounds.v_min));
        CHECK(gate.interval.hi == Approx(bounds.v_max));
    }
}

TEST_CASE("relaxed solution clamps the optimal airspeed") {
    const auto bounds = raven_bounds();
    CHECK(solve_relaxed(bounds, 11.74).v == Approx(11.74));
    CHECK(solve_relaxed(bounds, 11.74).omega == 0.0);
    CHECK(solve_relaxed(bounds, 20.0).v == Approx(15.0));
    CHECK(solve_relaxed(bounds, 3.0).v == Approx(6.0));
}

TEST_CASE("constrained solution") {
    const auto bounds = raven_bounds();
    ControllerConfig cfg;
    const double dt = 0.02;
    const VehicleState state{{0.0, 0.0}, 0.0};

    SECTION("unconstrained optimum when nothing binds") {
        const auto sol = solve_constrained(state, sample_with({0.0, 0.0}, 0.0), bounds, cfg, 11.74, dt);
        REQUIRE(sol.feasible);
        CHECK(sol.u.v == Approx(11.74));
        CHECK(sol.u.omega == 0.0);
        CHECK(sol.objective == Approx(0.0).margin(1e-15));
    }

    SECTION("active descent constraint pins the speed to the boundary") {
        // Ascending field ahead, partially compensated by neighbor motion:
        // cap = (rho - dE_dt)/L_f E = 0.8 / 0.1 = 8 < v*.
        const auto cost = sample_with({0.1, 0.0}, -0.8);
        const auto sol = solve_constrained(state, cost, bounds, cfg, 11.74, dt);
        REQUIRE(sol.feasible);
        CHECK(sol.u.omega == Approx(0.0).margin(1e-12));
        CHECK(sol.u.v == Approx(0.8 / 0.1).margin(1e-9));
    }

    SECTION("infeasible when no corridor heading opens a speed window") {
        const auto sol = solve_constrained(state, sample_with({0.1, 0.0}, 0.0), bounds, cfg, 11.74, dt);
        CHECK_FALSE(sol.feasible);
    }

    SECTION("matches an exhaustive grid search") {
        std::mt19937 rng(53);
        std::uniform_real_distribution<double> gdist(-0.6, 0.6);
        std::uniform_real_distribution<double> ddist(-1.5, 1.5);
        std::uniform_real_distribution<double> hdist(-0.08, 0.08);
        std::uniform_real_distribution<double> vdist(5.0, 16.0);

        for (int trial = 0; trial < 50; ++trial) {
            const VehicleState s{{0.0, 0.0}, hdist(rng)};
            const auto cost = sample_with({gdist(rng), gdist(rng)}, ddist(rng));
            const double v_star = vdist(rng);
            const auto sol = solve_constrained(s, cost, bounds, cfg, v_star, dt);

            // brute force over 1001 x 1001 admissible (omega, v) pairs
            const double delta = angle_difference(cfg.theta_g, s.heading);
            const double olo = std::max(-bounds.omega_max, (delta - cfg.epsilon) / dt);
            const double ohi = std::min(bounds.omega_max, (delta + cfg.epsilon) / dt);
            double best = 1e300;
            bool any = false;
            for (int i = 0; i <= 1000; ++i) {
                const double omega = olo + (ohi - olo) * i / 1000.0;
                const double lfe = cost.grad_E.dot(heading_vector(s.heading + omega * dt));
                for (int j = 0; j <= 1000; ++j) {
                    const double v = bounds.v_min + (bounds.v_max - bounds.v_min) * j / 1000.0;
                    if (v * lfe > cfg.rho - cost.dE_dt + 1e-12) continue;
                    any = true;
                    const double dv = (v - v_star) / (bounds.v_max - bounds.v_min);
                    const double dw = omega / bounds.omega_max;
                    best = std::min(best, dv * dv + dw * dw);
                }
            }
            REQUIRE(sol.feasible == any);
            if (any) {
                CHECK(sol.objective <= best + 5e-3);
                // returned input satisfies bounds and the constraint
                CHECK(sol.u.v >= bounds.v_min);
                CHECK(sol.u.v <= bounds.v_max);
                CHECK(std::abs(sol.u.omega) <= bounds.omega_max + 1e-12);
                const double lfe =
                    cost.grad_E.dot(heading_vector(s.heading + sol.u.omega * dt));
                CHECK(sol.u.v * lfe <= cfg.rho - cost.dE_dt + 1e-9);
                CHECK(std::abs(angle_difference(s.heading + sol.u.omega * dt, cfg.theta_g)) <=
                      cfg.epsilon + 1e-9);
            }
        }
    }
}

TEST_CASE("full control step") {
    const auto bounds = raven_bounds();
    const auto drag = raven_drag();
    ControllerConfig cfg;
    FieldCutoff cutoff;
    const double dt = 0.02;

    SECTION("isolation reduces the constrained problem to the relaxed solution") {
        const VehicleState state{{0.0, 0.0}, 0.0};
        const auto decision = control_step(state, {}, drag, bounds, cfg, cutoff, dt);
        CHECK(decision.mode == ControllerMode::Constrained);
        const auto relaxed = solve_relaxed(bounds, decision.v_star);
        CHECK(decision.u.v == Approx(relaxed.v));
        CHECK(decision.u.omega == relaxed.omega);
        CHECK(decision.v_star == Approx(isolated_optimal_airspeed(drag)).margin(1e-9));
    }

    SECTION("downwash-trapped follower behind a slower-bounded leader relaxes") {
        // Follower sits on the wake axis beyond the gain peak, so the field
        // ascends ahead; the leader's snapshot speed is below the follower's
        // v_min, so no admissible speed satisfies the descent constraint.
        NeighborSnapshot leader;
        leader.pose = {{0.0, 0.0}, 0.0};
        leader.speed = 6.0;
        leader.aero = raven_aero();

        ControlBounds fast{8.0, 15.0, 1.0};
        const VehicleState state{{-(leader.aero.wake.mu + 1.5 * leader.aero.wake.sigma), 0.0}, 0.0};
        const auto decision = control_step(state, {leader}, drag, fast, cfg, cutoff, dt);
        CHECK(decision.mode == ControllerMode::Relaxed);
        CHECK_FALSE(decision.gate_feasible);
        CHECK(decision.cost.upwash_W < 0.0);
        const double lfe = decision.cost.grad_E.dot(heading_vector(state.heading));
        CHECK(lfe > 0.0);
    }

    SECTION("bad initialization saturates the turn rate toward theta_g") {
        const VehicleState state{{0.0, 0.0}, 0.6};
        const auto decision = control_step(state, {}, drag, bounds, cfg, cutoff, dt);
        CHECK(decision.mode == ControllerMode::Relaxed);
        CHECK(decision.u.omega == Approx(-bounds.omega_max));
        CHECK(decision.u.v == Approx(std::clamp(decision.v_star, bounds.v_min, bounds.v_max)));
    }

    SECTION("an off-axis trapped follower relaxes, drifts clear, and re-constrains") {
        auto rc = scenarios::relaxed_trap();
        rc.sim.agents[1].initial_state.position.y = 0.35;  // off the wake axis
        rc.sim.duration = 10.0;
        const auto record = run_scenario(rc.sim);

        // The gate carries no hysteresis, so brief mode chatter around the
        // switching boundary is expected; what must hold is that relaxed
        // flight ends for good within finite time.
        bool saw_relaxed = false;
        double last_relaxed = -1.0;
        for (std::size_t k = 0; k < record.tick_count(); ++k) {
            if (record.ticks[k][1].mode == ControllerMode::Relaxed) {
                saw_relaxed = true;
                last_relaxed = record.times[k];
            }
        }
        CHECK(saw_relaxed);
        CHECK(last_relaxed < 10.0);
        CHECK(record.ticks.back()[1].mode == ControllerMode::Constrained);
    }

    SECTION("returned controls always satisfy the bounds") {
        std::mt19937 rng(61);
        std::uniform_real_distribution<double> pdist(-6.0, 6.0);
        std::uniform_real_distribution<double> hdist(-0.09, 0.09);
        for (int i = 0; i < 200; ++i) {
            NeighborSnapshot nb;
            nb.pose = {{pdist(rng), pdist(rng)}, hdist(rng)};
            nb.speed = 10.0;
            nb.aero = raven_aero();
            const VehicleState state{{pdist(rng), pdist(rng)}, hdist(rng)};
            const auto decision = control_step(state, {nb}, drag, bounds, cfg, cutoff, dt);
            CHECK(decision.u.v >= bounds.v_min);
            CHECK(decision.u.v <= bounds.v_max);
            CHECK(std::abs(decision.u.omega) <= bounds.omega_max + 1e-12);
            if (decision.mode == ControllerMode::Constrained) {
                const double lfe =
                    decision.cost.grad_E.dot(heading_vector(state.heading + decision.u.omega * dt));
                CHECK(decision.u.v * lfe <= cfg.rho - decision.cost.dE_dt + 1e-9);
            } else {
                CHECK_FALSE(decision.gate_feasible);
            }
        }
    }
}
