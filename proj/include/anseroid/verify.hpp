#pragma once

// Acceptance checks runnable from the CLI (`anseroid verify`) and from the
// dedicated acceptance test binary. Each check pairs the implementation
// against an independent reference route (grid scans, quadrature, finite
// differences, recomputed gates) and carries its own runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "anseroid/analysis.hpp"
#include "anseroid/csv.hpp"
#include "anseroid/oracle.hpp"
#include "anseroid/scenarios.hpp"

namespace anseroid::verify {

struct CheckResult {
    std::string id;
    std::string module;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

namespace detail {

class Reporter {
  public:
    explicit Reporter(std::string id, std::string module, std::string name)
        : start_(std::chrono::steady_clock::now()) {
        result_.id = std::move(id);
        result_.module = std::move(module);
        result_.name = std::move(name);
        result_.pass = true;
    }

    void require(bool ok, const std::string& what) {
        if (!ok && result_.pass) {
            result_.pass = false;
            result_.detail = what;
        }
    }

    void budget(double limit_s) {
        finish();
        if (result_.seconds > limit_s && result_.pass) {
            result_.pass = false;
            result_.detail = "runtime " + std::to_string(result_.seconds) + " s over budget";
        }
    }

    CheckResult take() {
        finish();
        return result_;
    }

  private:
    void finish() {
        result_.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

    CheckResult result_;
    std::chrono::steady_clock::time_point start_;
};

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

// 1. optimal_airspeed equals brute-force drag minimization; the quartic has
//    exactly one positive real root.
inline CheckResult check_quartic_oracle() {
    detail::Reporter rep("1", "drag", "quartic root matches brute-force drag minimization");
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> c1d(1e-4, 1.0), c2d(1.0, 1e3), ld(1.0, 100.0),
        wd(-5.0, 5.0);

    for (int trial = 0; trial < 1000; ++trial) {
        const DragParams dp{c1d(rng), c2d(rng), ld(rng)};
        const double w = wd(rng);
        const double root = optimal_airspeed(w, dp);

        // hierarchical exhaustive grid; exact because the root-count check
        // below certifies the drag curve is unimodal for v > 0
        const double hi = 2.5 * std::pow(dp.c2 / dp.c1, 0.25) +
                          std::cbrt(dp.lift * std::abs(w) / (2.0 * dp.c1)) + 1.0;
        const auto f = [&](double v) { return drag_force(v, w, dp); };
        const double coarse = oracle::grid_argmin(f, 1e-4, hi, 1e-2);
        const double brute =
            oracle::grid_argmin(f, std::max(1e-4, coarse - 2e-2), coarse + 2e-2, 1e-4);
        rep.require(std::abs(root - brute) <= 1.5e-4,
                    "root " + detail::fmt(root) + " vs grid " + detail::fmt(brute));

        const double coeff = dp.lift / (2.0 * dp.c1) * w;
        const double ratio = dp.c2 / dp.c1;
        int sign_changes = 0;
        double prev = -ratio;  // value at v = 0
        for (int i = 1; i <= 20000; ++i) {
            const double v = 1.2 * hi * i / 20000.0;
            const double q = v * v * v * v + coeff * v - ratio;
            if ((prev < 0.0) != (q < 0.0)) ++sign_changes;
            prev = q;
        }
        rep.require(sign_changes == 1, "expected one positive root, found " +
                                           std::to_string(sign_changes));
    }
    rep.budget(10.0);
    return rep.take();
}

// 2. v*(W) strictly decreasing; isolated optimum is (C2/C1)^(1/4).
inline CheckResult check_speed_monotonicity() {
    detail::Reporter rep("2", "drag", "optimal airspeed decreases strictly with upwash");
    const DragParams dp{5e-3, 95.0, 18.7};
    const double isolated = optimal_airspeed(0.0, dp);
    const double expected = std::pow(dp.c2 / dp.c1, 0.25);
    rep.require(std::abs(isolated - expected) <= 1e-9 * expected,
                "isolated optimum off: " + detail::fmt(isolated));
    double prev = optimal_airspeed(-2.5, dp);
    for (int i = 1; i < 100; ++i) {
        const double w = -2.5 + 5.0 * i / 99.0;
        const double v = optimal_airspeed(w, dp);
        rep.require(v < prev, "not strictly decreasing at W = " + detail::fmt(w));
        prev = v;
    }
    return rep.take();
}

// 3. Closed-form wing integrals match adaptive quadrature; the integrated
//    upwash crosses zero within 2% of sqrt(2) b for small cores.
inline CheckResult check_integral_closed_forms() {
    detail::Reporter rep("3", "aeroforces", "closed-form wing integrals match quadrature");
    const auto vp = VortexParams::from_core_radius(1.24, 0.054, 0.7);
    const WakeShape ws{2.1, 0.7};
    const double b = vp.half_span;

    std::mt19937_64 rng(3003);
    std::uniform_real_distribution<double> xd(-4.0 * ws.mu, 2.0 * ws.sigma);
    std::uniform_real_distribution<double> yd(-5.0 * b, 5.0 * b);
    for (int i = 0; i < 500; ++i) {
        const double x = xd(rng);
        const double y = yd(rng);
        const auto f = [&](double xi) { return spanwise_profile(xi, vp); };
        const auto mf = [&](double xi) { return (xi - y) * spanwise_profile(xi, vp); };
        const double gain = streamwise_gain_at_offset(x, ws);
        const double quad_w = gain * oracle::adaptive_simpson(f, y - b, y + b, 1e-13);
        const double quad_m = gain * oracle::adaptive_simpson(mf, y - b, y + b, 1e-13);
        const double w = upwash_force(x, y, vp, ws);
        const double m = roll_moment(x, y, vp, ws);
        // 1e-8 relative with an absolute floor where quadrature truncation
        // across the core kinks dominates tiny values
        const double tol_w = 1e-8 * std::max(std::abs(quad_w), 1e-2);
        const double tol_m = 1e-8 * std::max(std::abs(quad_m), 1e-2);
        rep.require(std::abs(w - quad_w) <= tol_w,
                    "upwash mismatch at (" + detail::fmt(x) + "," + detail::fmt(y) + ")");
        rep.require(std::abs(m - quad_m) <= tol_m,
                    "moment mismatch at (" + detail::fmt(x) + "," + detail::fmt(y) + ")");
    }

    for (const double core_fraction : {0.03, 0.055, 0.08}) {
        const auto vpc = VortexParams::from_core_radius(1.24, core_fraction * b, b);
        double lo = b + vpc.r_star;
        double hi = 2.0 * b - vpc.r_star;
        for (int k = 0; k < 80; ++k) {
            const double mid = 0.5 * (lo + hi);
            (upwash_integral(mid, vpc) < 0.0 ? lo : hi) = mid;
        }
        const double crossing = 0.5 * (lo + hi);
        rep.require(std::abs(crossing - std::sqrt(2.0) * b) <= 0.02 * std::sqrt(2.0) * b,
                    "zero crossing " + detail::fmt(crossing) + " for r*/b = " +
                        detail::fmt(core_fraction));
    }
    rep.budget(30.0);
    return rep.take();
}

// 4. Analytic cost gradient against central finite differences.
inline CheckResult check_gradient() {
    detail::Reporter rep("4", "aeroforces", "analytic gradient matches finite differences");
    const auto vp = VortexParams::from_core_radius(1.24, 0.054, 0.7);
    const WakeShape ws{2.1, 0.7};
    NeighborSnapshot nb;
    nb.pose = {{0.0, 0.0}, 0.0};
    nb.speed = 11.74;
    nb.aero = {vp, ws, 18.7};
    const double kappa = 0.25;
    const auto e_at = [&](const Vec2& p) { return flock_cost(p, {nb}, kappa).cost_E; };

    std::mt19937_64 rng(4004);
    std::uniform_real_distribution<double> xd(-2.5 * ws.mu, 0.5 * ws.mu);
    std::uniform_real_distribution<double> yd(-4.0 * vp.half_span, 4.0 * vp.half_span);
    int tested = 0;
    while (tested < 200) {
        const Vec2 p{xd(rng), yd(rng)};
        const auto sample = flock_cost(p, {nb}, kappa);
        if (std::abs(sample.moment_M) <= 1e-6 || sample.upwash_W == 0.0) continue;
        ++tested;
        const Vec2 fd = oracle::central_gradient(e_at, p, 1e-5);
        const double scale = std::max({std::abs(fd.x), std::abs(fd.y), 1e-9});
        rep.require(std::abs(sample.grad_E.x - fd.x) / scale < 1e-5 &&
                        std::abs(sample.grad_E.y - fd.y) / scale < 1e-5,
                    "gradient mismatch at (" + detail::fmt(p.x) + "," + detail::fmt(p.y) + ")");
    }
    return rep.take();
}

// 5. Two-agent scenario: the rear agent settles at the wake optimum of the
//    front agent with the ledgered cost signature.
inline CheckResult check_two_agent_emergence() {
    detail::Reporter rep("5", "sim", "two-agent run settles at the pairwise cost optimum");
    const auto rc = scenarios::raven_pair();
    const auto record = run_scenario(rc.sim);

    const Vec2 xhat = heading_vector(rc.sim.controller.theta_g);
    const std::size_t front = record.ticks.back()[0].state.position.dot(xhat) >
                                      record.ticks.back()[1].state.position.dot(xhat)
                                  ? 0 : 1;
    const std::size_t rear = 1 - front;
    const auto local = wake_frame_local(record.ticks.back()[rear].state.position,
                                        record.ticks.back()[front].state);
    const double trailing = -local.x;
    const double lateral = std::abs(local.y);
    const double b = rc.sim.agents[front].aero.vortex.half_span;

    const auto stab = stability_check(record, 5.0);
    rep.require(stab.stable, "not stable over the final 5 s");
    rep.require(lateral > std::sqrt(2.0) * b && lateral < 2.5 * b,
                "lateral offset " + detail::fmt(lateral));

    // grid minimizer of the rear agent's cost over the frozen front wake
    NeighborSnapshot nb{record.ticks.back()[front].state, record.ticks.back()[front].u.v,
                        rc.sim.agents[front].aero};
    const auto& ws = rc.sim.agents[front].aero.wake;
    double best = 1e300;
    Vec2 arg{};
    for (double x = -(ws.mu + 4.0 * ws.sigma); x <= 0.0; x += 0.01) {
        for (double y = 0.8 * b; y <= 3.0 * b; y += 0.01) {
            const Vec2 p = nb.pose.position + x * xhat + y * Vec2{-xhat.y, xhat.x};
            const double e = flock_cost(p, {nb}, rc.sim.controller.kappa, rc.sim.cutoff).cost_E;
            if (e < best) {
                best = e;
                arg = {x, y};
            }
        }
    }
    const double grid_trailing = -arg.x;
    rep.require(std::abs(trailing - grid_trailing) <= 0.1 * grid_trailing,
                "trailing " + detail::fmt(trailing) + " vs grid optimum " +
                    detail::fmt(grid_trailing));

    const auto ledger = cost_ledger(record);
    rep.require(ledger.agents[front].total < 0.0 && ledger.agents[rear].total < 0.0,
                "totals not both negative");
    rep.require(std::abs(ledger.agents[rear].total) > std::abs(ledger.agents[front].total),
                "rear total does not dominate");
    rep.budget(5.0);
    return rep.take();
}

// 6. Eleven-agent run classifies as a V or echelon and covers a plausible
//    distance.
inline CheckResult check_eleven_agent_emergence() {
    detail::Reporter rep("6", "sim", "eleven-agent run forms a V or echelon");
    const auto rc = scenarios::crazyswarm_11();
    const auto record = run_scenario(rc.sim);
    const auto metrics = detect_formation(record, rc.sim.duration, rc.formation);
    rep.require(metrics.cls != FormationClass::None, "no formation detected");
    rep.require(metrics.score_left >= 0.9 && metrics.score_right >= 0.9,
                "branch scores " + detail::fmt(metrics.score_left) + "/" +
                    detail::fmt(metrics.score_right));
    const double travelled =
        record.ticks.back()[metrics.front_agent].state.position.x -
        record.ticks.front()[metrics.front_agent].state.position.x;
    rep.require(travelled > 17.5 && travelled < 70.0,
                "front agent travelled " + detail::fmt(travelled) + " m");
    rep.budget(60.0);
    return rep.take();
}

// 7. Greedy speed-matching diverges from a V while the full controller
//    holds it, over five random initializations.
inline CheckResult check_greedy_divergence() {
    detail::Reporter rep("7", "analysis", "greedy flight diverges, the anseroid holds");
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto rc = scenarios::v_pair(seed);
        rc.sim.duration = 15.0;

        const auto greedy = greedy_divergence_experiment(rc.sim);
        const auto& pair = greedy.pairs.front();
        const double w0 = std::abs(pair.follower_upwash.front());
        rep.require(w0 > 0.0, "seed " + std::to_string(seed) + ": no initial upwash");
        for (std::size_t k = 0; k + 1 < greedy.times.size(); ++k) {
            if (std::abs(pair.follower_upwash[k]) < 1e-6 * w0) break;
            if (!(pair.separation[k + 1] > pair.separation[k])) {
                rep.require(false, "seed " + std::to_string(seed) +
                                       ": separation not strictly increasing at t = " +
                                       detail::fmt(greedy.times[k]));
                break;
            }
        }
        rep.require(pair.separation.back() > pair.separation.front() + 2.0,
                    "seed " + std::to_string(seed) + ": greedy did not diverge");

        const auto held = separation_series(run_scenario(rc.sim));
        const double drift = std::abs(held.pairs.front().separation.back() -
                                      held.pairs.front().separation.front());
        rep.require(drift < 0.5, "seed " + std::to_string(seed) + ": anseroid drifted " +
                                     detail::fmt(drift) + " m");
    }
    return rep.take();
}

// 8. The trapped follower relaxes, escapes within 10 s, and the recorded
//    modes match a recomputed feasibility gate at every tick.
inline CheckResult check_switching() {
    detail::Reporter rep("8", "controller", "relaxed episode is entered, exited, and gated");
    const auto rc = scenarios::relaxed_trap();
    const auto record = run_scenario(rc.sim);

    int entered = -1, exited = -1;
    for (std::size_t k = 0; k < record.tick_count(); ++k) {
        const auto& rec = record.ticks[k][1];
        const bool relaxed = rec.mode == ControllerMode::Relaxed;
        if (relaxed && entered < 0) entered = static_cast<int>(k);
        if (!relaxed && entered >= 0 && exited < 0) exited = static_cast<int>(k);

        const auto gate = feasibility_gate(rec.state, rec.cost, rc.sim.agents[1].bounds,
                                           rc.sim.controller);
        rep.require(gate.premise_ok, "heading left the corridor");
        if ((rec.mode == ControllerMode::Relaxed) == gate.feasible) {
            rep.require(false, "mode/gate mismatch at t = " + detail::fmt(record.times[k]));
            break;
        }
    }
    rep.require(entered >= 0, "follower never relaxed");
    rep.require(exited > entered, "follower never re-entered the constrained mode");
    if (exited > 0)
        rep.require(exited * rc.sim.dt < 10.0,
                    "relaxed episode lasted past 10 s: " + detail::fmt(exited * rc.sim.dt));
    return rep.take();
}

// 9. Control-step cost for eleven agents and the wall-clock bound for the
//    eleven-agent simulation.
inline CheckResult check_performance() {
    detail::Reporter rep("9", "sim", "control step and full run meet their time budgets");
    auto rc = scenarios::crazyswarm_11();

    const auto t0 = std::chrono::steady_clock::now();
    const auto record = run_scenario(rc.sim);
    const double total_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const double per_tick_ms = 1000.0 * total_s / static_cast<double>(record.tick_count());
    rep.require(per_tick_ms < 50.0,
                "control tick took " + detail::fmt(per_tick_ms) + " ms for N = 11");
    rep.require(total_s < 60.0, "full run took " + detail::fmt(total_s) + " s");
    return rep.take();
}

// 10. Identical reruns produce byte-identical trajectory CSVs.
inline CheckResult check_determinism() {
    detail::Reporter rep("10", "cli", "reruns are byte-identical");
    const auto tmp = std::filesystem::temp_directory_path();
    const std::vector<RunConfig> configs{scenarios::raven_pair(), scenarios::relaxed_trap(),
                                         scenarios::crazyswarm_11()};
    int index = 0;
    for (const auto& rc : configs) {
        const auto a_path = (tmp / ("anseroid_det_a" + std::to_string(index) + ".csv")).string();
        const auto b_path = (tmp / ("anseroid_det_b" + std::to_string(index) + ".csv")).string();
        write_trajectory_csv(run_scenario(rc.sim), a_path);
        write_trajectory_csv(run_scenario(rc.sim), b_path);

        std::ifstream a(a_path, std::ios::binary), b(b_path, std::ios::binary);
        std::stringstream sa, sb;
        sa << a.rdbuf();
        sb << b.rdbuf();
        rep.require(sa.str() == sb.str() && !sa.str().empty(),
                    rc.sim.name + ": reruns differ");
        std::filesystem::remove(a_path);
        std::filesystem::remove(b_path);
        ++index;
    }
    return rep.take();
}

// Module tags accepted by the --only filter; checks are skipped, not run,
// when filtered out.
inline std::vector<CheckResult> run_acceptance(const std::string& only_module = "") {
    static const std::vector<std::pair<const char*, CheckResult (*)()>> table = {
        {"drag", check_quartic_oracle},
        {"drag", check_speed_monotonicity},
        {"wake aeroforces", check_integral_closed_forms},
        {"aeroforces", check_gradient},
        {"sim", check_two_agent_emergence},
        {"sim analysis", check_eleven_agent_emergence},
        {"analysis controller", check_greedy_divergence},
        {"controller", check_switching},
        {"sim", check_performance},
        {"cli sim", check_determinism},
    };
    std::vector<CheckResult> results;
    for (const auto& [modules, fn] : table) {
        if (!only_module.empty() &&
            std::string(" ").append(modules).append(" ").find(" " + only_module + " ") ==
                std::string::npos)
            continue;
        results.push_back(fn());
    }
    return results;
}

inline int print_and_exit_code(const std::vector<CheckResult>& results) {
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%4s] %-2s %-60s (%.2f s)%s\n", r.pass ? "PASS" : "FAIL", r.id.c_str(),
                    r.name.c_str(), r.seconds, r.pass ? "" : (" -- " + r.detail).c_str());
        all = all && r.pass;
    }
    std::printf("%zu checks, %s\n", results.size(), all ? "all passed" : "FAILURES present");
    return all ? 0 : 1;
}

}  // namespace anseroid::verify
