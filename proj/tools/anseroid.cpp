// Batch entry point: scenario execution, parameter derivation from vehicle
// data, and the acceptance-check runner.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anseroid/analysis.hpp"
#include "anseroid/config.hpp"
#include "anseroid/csv.hpp"
#include "anseroid/verify.hpp"

namespace {

using namespace anseroid;

constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

struct PhaseTimer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - start).count();
        start = now;
        return s;
    }
};

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            int threads, long seed) {
    std::string raw;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config '" << config_path << "'\n";
            return kExitConfigError;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        raw = buf.str();
    }

    RunConfig rc;
    try {
        auto tree = ConfigTree::parse(raw);
        for (const auto& o : overrides) tree.apply_override(o);
        rc = load_run_config(tree);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    if (threads > 0) rc.sim.threads = threads;
    if (seed >= 0) rc.sim.seed = static_cast<std::uint64_t>(seed);

    std::string hashed = raw;
    for (const auto& o : overrides) hashed += "\n" + o;

    nlohmann::json manifest;
    manifest["config_path"] = config_path;
    manifest["config_hash"] = content_hash(hashed);
    manifest["overrides"] = overrides;
    manifest["resolved"] = resolved_json(rc);
    manifest["output_dir"] = rc.output_dir;

    PhaseTimer timer;
    TrajectoryRecord record;
    try {
        record = run_scenario(rc.sim);
    } catch (const SimulationError& e) {
        std::cerr << "numerical failure at tick " << e.tick() << ": " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    manifest["timing"]["simulate_s"] = timer.lap();

    const auto ledger = cost_ledger(record);
    const auto metrics = detect_formation(record, record.times.back(), rc.formation);
    const auto stability = stability_check(
        record, std::min(0.25 * rc.sim.duration, rc.sim.duration - rc.sim.dt));
    manifest["timing"]["analyze_s"] = timer.lap();

    namespace fs = std::filesystem;
    fs::create_directories(rc.output_dir);
    fs::create_directories(rc.output_dir + "/plots");
    write_trajectory_csv(record, rc.output_dir + "/trajectory.csv");
    write_cost_csv(record, rc.output_dir + "/plots/cost_vs_time.csv");
    std::vector<double> snapshots;
    for (int i = 0; i <= 4; ++i) snapshots.push_back(record.times.back() * i / 4.0);
    write_flock_shape_csv(record, rc.formation, snapshots, rc.output_dir + "/plots/flock_shape.csv");

    nlohmann::json summary;
    summary["scenario"] = rc.sim.name;
    summary["ticks"] = record.tick_count();
    summary["agents"] = record.agent_count();
    for (std::size_t i = 0; i < record.agent_count(); ++i) {
        summary["ledger"].push_back({{"id", i},
                                     {"total", ledger.agents[i].total},
                                     {"max", ledger.agents[i].max_e},
                                     {"min", ledger.agents[i].min_e},
                                     {"terminal", ledger.agents[i].terminal}});
    }
    summary["formation"] = {{"class", metrics.cls == FormationClass::V          ? "V"
                                      : metrics.cls == FormationClass::Echelon ? "echelon"
                                                                               : "none"},
                            {"score_left", metrics.score_left},
                            {"score_right", metrics.score_right},
                            {"gap_compliance", metrics.gap_compliance},
                            {"mean_lateral_gap", metrics.mean_lateral_gap},
                            {"mean_stream_gap", metrics.mean_stream_gap},
                            {"front_agent", metrics.front_agent}};
    summary["stable"] = stability.stable;
    summary["speed_residual"] = stability.speed_residual;
    summary["heading_residual"] = stability.heading_residual;

    {
        std::ofstream out(rc.output_dir + "/summary.json");
        out << summary.dump(2) << "\n";
    }
    manifest["timing"]["write_s"] = timer.lap();
    {
        std::ofstream out(rc.output_dir + "/manifest.json");
        out << manifest.dump(2) << "\n";
    }

    std::cout << "wrote " << rc.output_dir << "/trajectory.csv (" << record.tick_count()
              << " ticks, " << record.agent_count() << " agents), stable="
              << (stability.stable ? "true" : "false") << ", formation="
              << summary["formation"]["class"].get<std::string>() << "\n";
    return 0;
}

int cmd_derive(double weight, double span, double cruise, double wake_speed, double density,
               double core_fraction) {
    DerivedParams derived;
    try {
        derived = derive_params(weight, span, cruise, wake_speed, density, core_fraction);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    std::printf("[vehicle]\n");
    std::printf("gamma = %.*g\n", 17, derived.vortex.gamma);
    std::printf("r_star = %.*g\n", 17, derived.vortex.r_star);
    std::printf("# omega = %.*g  (implied by gamma and r_star)\n", 17, derived.vortex.omega);
    std::printf("half_span = %.*g\n", 17, derived.vortex.half_span);
    std::printf("lift = %.*g\n", 17, derived.drag.lift);
    std::printf("c1 = %.*g\n", 17, derived.drag.c1);
    std::printf("c2 = %.*g\n", 17, derived.drag.c2);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constraint-driven flocking simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    int threads = 0;
    long seed = -1;
    auto* run = app.add_subcommand("run", "run a scenario and write its outputs");
    run->add_option("config", config_path, "scenario config file")->required();
    run->add_option("--set", overrides, "override section.key=value");
    run->add_option("--threads", threads, "cap controller worker threads");
    run->add_option("--seed", seed, "override the scenario seed");

    double weight = 0, span = 0, cruise = 0, wake_speed = 0, density = 0, core_fraction = 0;
    auto* derive = app.add_subcommand("derive", "derive aero constants from vehicle data");
    derive->add_option("weight", weight, "vehicle weight, N")->required();
    derive->add_option("span", span, "wingspan, m")->required();
    derive->add_option("cruise", cruise, "cruise speed, m/s")->required();
    derive->add_option("wake_speed", wake_speed, "wake transport speed, m/s")->required();
    derive->add_option("density", density, "air density, kg/m^3")->required();
    derive->add_option("core_fraction", core_fraction, "core radius / half span")->required();

    std::string only;
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance checks");
    verify_cmd->add_option("--only", only, "restrict to one module");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path, overrides, threads, seed);
    if (derive->parsed()) return cmd_derive(weight, span, cruise, wake_speed, density, core_fraction);
    return anseroid::verify::print_and_exit_code(anseroid::verify::run_acceptance(only));
}
