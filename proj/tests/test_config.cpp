#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "anseroid/config.hpp"
#include "anseroid/scenarios.hpp"

using namespace anseroid;
using Catch::Approx;

namespace {

const char* kMinimalConfig = R"(
# two ravens abreast
[scenario]
name = pair
dt = 0.02
duration = 4.0
seed = 9

[controller]
kappa = 0.25

[vehicle]
gamma = 1.2367724867724868
r_star = 0.054
half_span = 0.7
mu = 2.8
sigma = 0.7
lift = 18.7
c1 = 5e-3
c2 = 95.0
v_min = 6.0
v_max = 15.0
omega_max = 1.0

[agent.0]
x = 0.0
y = 0.7

[agent.1]
x = 0.0
y = -0.7
theta = 0.05
v_max = 14.0
)";

}  // namespace

TEST_CASE("config parsing") {
    const auto rc = load_run_config(ConfigTree::parse(kMinimalConfig));

    SECTION("scenario and controller sections") {
        CHECK(rc.sim.name == "pair");
        CHECK(rc.sim.dt == 0.02);
        CHECK(rc.sim.duration == 4.0);
        CHECK(rc.sim.seed == 9);
        CHECK(rc.sim.controller.kappa == 0.25);
        CHECK(rc.sim.controller.rho == 0.0);
        CHECK(rc.output_dir == "out/pair");
    }

    SECTION("vehicle defaults and per-agent overrides") {
        REQUIRE(rc.sim.agents.size() == 2);
        CHECK(rc.sim.agents[0].aero.vortex.r_star == 0.054);
        CHECK(rc.sim.agents[0].aero.vortex.omega ==
              Approx(1.2367724867724868 / (kTwoPi * 0.054 * 0.054)));
        CHECK(rc.sim.agents[0].bounds.v_max == 15.0);
        CHECK(rc.sim.agents[1].bounds.v_max == 14.0);
        CHECK(rc.sim.agents[1].initial_state.heading == Approx(0.05));
        const double v_star = std::pow(95.0 / 5e-3, 0.25);
        CHECK(rc.sim.agents[0].initial_speed == Approx(v_star));
    }

    SECTION("overrides rewrite nested keys") {
        auto tree = ConfigTree::parse(kMinimalConfig);
        tree.apply_override("agent.1.x=-3.5");
        tree.apply_override("controller.epsilon=0.2");
        const auto rc2 = load_run_config(tree);
        CHECK(rc2.sim.agents[1].initial_state.position.x == -3.5);
        CHECK(rc2.sim.controller.epsilon == 0.2);
    }

    SECTION("speed objective flag") {
        CHECK(rc.sim.controller.speed_objective == SpeedObjective::Drag);
        auto tree = ConfigTree::parse(kMinimalConfig);
        tree.apply_override("controller.speed_objective=power");
        CHECK(load_run_config(tree).sim.controller.speed_objective == SpeedObjective::Power);
        tree.apply_override("controller.speed_objective=thrust");
        CHECK_THROWS_AS(load_run_config(tree), ConfigError);
    }
}

TEST_CASE("config errors carry field paths") {
    SECTION("missing required key") {
        auto tree = ConfigTree::parse("[scenario]\nname = x\n");
        try {
            load_run_config(tree);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.path() == "scenario.duration");
        }
    }

    SECTION("non-numeric value") {
        auto tree = ConfigTree::parse(kMinimalConfig);
        tree.apply_override("vehicle.gamma=abc");
        try {
            load_run_config(tree);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.path() == "vehicle.gamma");
        }
    }

    SECTION("invalid physical parameters name the agent section") {
        auto tree = ConfigTree::parse(kMinimalConfig);
        tree.apply_override("agent.1.r_star=0.9");  // larger than the half span
        CHECK_THROWS_AS(load_run_config(tree), ConfigError);
    }

    SECTION("malformed lines are rejected") {
        CHECK_THROWS_AS(ConfigTree::parse("[scenario\n"), ConfigError);
        CHECK_THROWS_AS(ConfigTree::parse("[s]\nkey value\n"), ConfigError);
    }
}

TEST_CASE("shipped scenario files match the built-in definitions") {
    const auto compare = [](const RunConfig& file, const RunConfig& built) {
        REQUIRE(file.sim.agents.size() == built.sim.agents.size());
        CHECK(file.sim.dt == built.sim.dt);
        CHECK(file.sim.duration == built.sim.duration);
        CHECK(file.sim.seed == built.sim.seed);
        CHECK(file.sim.controller.kappa == built.sim.controller.kappa);
        CHECK(file.sim.controller.rho == built.sim.controller.rho);
        CHECK(file.sim.jitter.pos_x == built.sim.jitter.pos_x);
        CHECK(file.sim.jitter.heading == built.sim.jitter.heading);
        for (std::size_t i = 0; i < built.sim.agents.size(); ++i) {
            const auto& fa = file.sim.agents[i];
            const auto& ba = built.sim.agents[i];
            CHECK(fa.initial_state.position.x == Approx(ba.initial_state.position.x));
            CHECK(fa.initial_state.position.y == Approx(ba.initial_state.position.y));
            CHECK(fa.aero.vortex.gamma == Approx(ba.aero.vortex.gamma));
            CHECK(fa.aero.wake.mu == Approx(ba.aero.wake.mu));
            CHECK(fa.aero.wake.sigma == Approx(ba.aero.wake.sigma));
            CHECK(fa.drag.c1 == Approx(ba.drag.c1));
            CHECK(fa.drag.c2 == Approx(ba.drag.c2));
            CHECK(fa.bounds.v_min == Approx(ba.bounds.v_min));
            CHECK(fa.bounds.v_max == Approx(ba.bounds.v_max));
        }
    };

    const std::string dir = ANSEROID_SCENARIO_DIR;
    compare(load_run_config_file(dir + "/raven_pair.cfg"), scenarios::raven_pair());
    compare(load_run_config_file(dir + "/crazyswarm_11.cfg"), scenarios::crazyswarm_11());
    compare(load_run_config_file(dir + "/relaxed_trap.cfg"), scenarios::relaxed_trap());
}

TEST_CASE("resolved dump expands every agent parameter") {
    const auto rc = load_run_config(ConfigTree::parse(kMinimalConfig));
    const auto j = resolved_json(rc);
    REQUIRE(j["agents"].size() == 2);
    for (const auto& agent : j["agents"]) {
        for (const char* key : {"x", "y", "theta", "initial_speed", "gamma", "omega", "r_star",
                                "half_span", "mu", "sigma", "lift", "c1", "c2", "v_min", "v_max",
                                "omega_max"})
            CHECK(agent.contains(key));
    }
    CHECK(j["controller"].contains("rho"));
    CHECK(j["cutoff"].contains("min_gain"));
}

TEST_CASE("content hash is stable") {
    CHECK(content_hash("") == "cbf29ce484222325");
    CHECK(content_hash("anseroid") != content_hash("anseroid "));
}
