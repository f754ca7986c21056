#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anseroid/analysis.hpp"
#include "anseroid/sim.hpp"

namespace anseroid {

// Raised for malformed or invalid configuration input; path names the
// offending section.key.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(path) {}
    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

// Minimal structured key/value text format: [section] headers, key = value
// lines, '#' or ';' comments. Section names may be dotted (agent.0).
class ConfigTree {
  public:
    using Section = std::map<std::string, std::string>;

    static ConfigTree parse(const std::string& text) {
        ConfigTree tree;
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("line " + std::to_string(lineno), "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                tree.sections_[section];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("line " + std::to_string(lineno), "expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
            tree.sections_[section][key] = value;
        }
        return tree;
    }

    static ConfigTree parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError(path, "cannot open config file");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str());
    }

    // Override of the form section.key=value (section may be dotted).
    void apply_override(const std::string& spec) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos) throw ConfigError(spec, "override must be section.key=value");
        const std::string path = trim(spec.substr(0, eq));
        const std::string value = trim(spec.substr(eq + 1));
        const auto dot = path.rfind('.');
        if (dot == std::string::npos) throw ConfigError(path, "override key must name a section");
        sections_[path.substr(0, dot)][path.substr(dot + 1)] = value;
    }

    bool has_section(const std::string& name) const { return sections_.count(name) > 0; }

    std::vector<std::string> section_names() const {
        std::vector<std::string> names;
        for (const auto& [name, _] : sections_) names.push_back(name);
        return names;
    }

    const Section& section(const std::string& name) const {
        static const Section empty;
        const auto it = sections_.find(name);
        return it == sections_.end() ? empty : it->second;
    }

    bool has(const std::string& section_name, const std::string& key) const {
        const auto it = sections_.find(section_name);
        return it != sections_.end() && it->second.count(key) > 0;
    }

    double get_number(const std::string& section_name, const std::string& key,
                      double fallback) const {
        if (!has(section_name, key)) return fallback;
        return parse_number(section_name + "." + key, section(section_name).at(key));
    }

    double require_number(const std::string& section_name, const std::string& key) const {
        if (!has(section_name, key))
            throw ConfigError(section_name + "." + key, "required key missing");
        return parse_number(section_name + "." + key, section(section_name).at(key));
    }

    long get_integer(const std::string& section_name, const std::string& key, long fallback) const {
        const double value = get_number(section_name, key, static_cast<double>(fallback));
        const long rounded = std::lround(value);
        if (value != static_cast<double>(rounded))
            throw ConfigError(section_name + "." + key, "expected an integer");
        return rounded;
    }

    bool get_bool(const std::string& section_name, const std::string& key, bool fallback) const {
        if (!has(section_name, key)) return fallback;
        const std::string& raw = section(section_name).at(key);
        if (raw == "true" || raw == "1" || raw == "yes") return true;
        if (raw == "false" || raw == "0" || raw == "no") return false;
        throw ConfigError(section_name + "." + key, "expected a boolean, got '" + raw + "'");
    }

    std::string get_string(const std::string& section_name, const std::string& key,
                           const std::string& fallback) const {
        if (!has(section_name, key)) return fallback;
        return section(section_name).at(key);
    }

  private:
    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string::npos) return "";
        const auto end = s.find_last_not_of(" \t\r");
        return s.substr(begin, end - begin + 1);
    }

    static double parse_number(const std::string& path, const std::string& raw) {
        char* end = nullptr;
        const double value = std::strtod(raw.c_str(), &end);
        if (end == raw.c_str() || *end != '\0')
            throw ConfigError(path, "expected a number, got '" + raw + "'");
        return value;
    }

    std::map<std::string, Section> sections_;
};

struct RunConfig {
    ScenarioConfig sim;
    FormationConfig formation;
    std::string output_dir;
};

namespace detail {

// Vehicle parameter block shared by [vehicle] and per-agent overrides.
struct VehicleKeys {
    const ConfigTree& tree;
    std::string agent_section;  // empty when reading defaults only

    double number(const std::string& key) const {
        if (!agent_section.empty() && tree.has(agent_section, key))
            return tree.require_number(agent_section, key);
        if (tree.has("vehicle", key)) return tree.require_number("vehicle", key);
        throw ConfigError("vehicle." + key, "required key missing");
    }

    double number_or(const std::string& key, double fallback) const {
        if (!agent_section.empty() && tree.has(agent_section, key))
            return tree.require_number(agent_section, key);
        return tree.get_number("vehicle", key, fallback);
    }

    bool present(const std::string& key) const {
        return (!agent_section.empty() && tree.has(agent_section, key)) ||
               tree.has("vehicle", key);
    }
};

inline AgentSpec load_agent(const ConfigTree& tree, const std::string& section) {
    VehicleKeys keys{tree, section};
    AgentSpec spec;

    const double gamma = keys.number("gamma");
    const double half_span = keys.number("half_span");
    try {
        if (keys.present("r_star"))
            spec.aero.vortex = VortexParams::from_core_radius(gamma, keys.number("r_star"), half_span);
        else if (keys.present("omega"))
            spec.aero.vortex = VortexParams::from_core_rate(gamma, keys.number("omega"), half_span);
        else
            throw ConfigError("vehicle.r_star", "need r_star or omega");
    } catch (const std::invalid_argument& e) {
        throw ConfigError(section, e.what());
    }

    spec.aero.wake.mu = keys.number("mu");
    spec.aero.wake.sigma = keys.number("sigma");
    spec.aero.lift = keys.number("lift");
    spec.drag.c1 = keys.number("c1");
    spec.drag.c2 = keys.number("c2");
    spec.drag.lift = spec.aero.lift;
    spec.bounds.v_min = keys.number("v_min");
    spec.bounds.v_max = keys.number("v_max");
    spec.bounds.omega_max = keys.number("omega_max");

    spec.initial_state.position.x = tree.get_number(section, "x", 0.0);
    spec.initial_state.position.y = tree.get_number(section, "y", 0.0);
    spec.initial_state.heading = normalize_angle(tree.get_number(section, "theta", 0.0));

    const double default_speed =
        std::clamp(isolated_optimal_airspeed(spec.drag), spec.bounds.v_min, spec.bounds.v_max);
    spec.initial_speed = keys.number_or("initial_speed", default_speed);

    try {
        spec.aero.wake.validate();
        spec.drag.validate();
        spec.bounds.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(section, e.what());
    }
    return spec;
}

}  // namespace detail

inline RunConfig load_run_config(const ConfigTree& tree) {
    RunConfig rc;
    rc.sim.name = tree.get_string("scenario", "name", "scenario");
    rc.sim.dt = tree.get_number("scenario", "dt", 0.02);
    rc.sim.duration = tree.require_number("scenario", "duration");
    rc.sim.seed = static_cast<std::uint64_t>(tree.get_integer("scenario", "seed", 1));
    rc.sim.threads = static_cast<int>(tree.get_integer("scenario", "threads", 1));
    rc.sim.greedy = tree.get_bool("scenario", "greedy", false);

    rc.sim.controller.rho = tree.get_number("controller", "rho", 0.0);
    rc.sim.controller.epsilon = tree.get_number("controller", "epsilon", 0.1);
    rc.sim.controller.theta_g = tree.get_number("controller", "theta_g", 0.0);
    rc.sim.controller.kappa = tree.get_number("controller", "kappa", 0.25);
    rc.sim.controller.omega_samples =
        static_cast<int>(tree.get_integer("controller", "omega_samples", 41));
    rc.sim.controller.refine_factor =
        static_cast<int>(tree.get_integer("controller", "refine_factor", 10));
    const std::string objective = tree.get_string("controller", "speed_objective", "drag");
    if (objective == "drag")
        rc.sim.controller.speed_objective = SpeedObjective::Drag;
    else if (objective == "power")
        rc.sim.controller.speed_objective = SpeedObjective::Power;
    else
        throw ConfigError("controller.speed_objective", "expected 'drag' or 'power'");

    rc.sim.cutoff.min_gain = tree.get_number("cutoff", "min_gain", 1e-9);
    rc.sim.cutoff.span_multiple = tree.get_number("cutoff", "span_multiple", 8.0);

    rc.sim.jitter.pos_x = tree.get_number("jitter", "pos_x", 0.0);
    rc.sim.jitter.pos_y = tree.get_number("jitter", "pos_y", 0.0);
    rc.sim.jitter.heading = tree.get_number("jitter", "heading", 0.0);

    rc.formation.gap_lo_factor = tree.get_number("formation", "gap_lo_factor", 1.4142135623730951);
    rc.formation.gap_hi_factor = tree.get_number("formation", "gap_hi_factor", 2.5);
    rc.formation.score_min = tree.get_number("formation", "score_min", 0.9);
    rc.formation.collinear_tol = tree.get_number("formation", "collinear_tol", 1e-6);

    rc.output_dir = tree.get_string("scenario", "output_dir", "out/" + rc.sim.name);

    std::vector<std::pair<long, std::string>> agent_sections;
    for (const auto& name : tree.section_names()) {
        if (name.rfind("agent.", 0) != 0) continue;
        const std::string suffix = name.substr(6);
        char* end = nullptr;
        const long index = std::strtol(suffix.c_str(), &end, 10);
        if (end == suffix.c_str() || *end != '\0')
            throw ConfigError(name, "agent sections must be numbered, e.g. [agent.0]");
        agent_sections.emplace_back(index, name);
    }
    std::sort(agent_sections.begin(), agent_sections.end());
    for (const auto& [index, name] : agent_sections)
        rc.sim.agents.push_back(detail::load_agent(tree, name));

    try {
        rc.sim.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("scenario", e.what());
    }
    return rc;
}

inline RunConfig load_run_config_file(const std::string& path) {
    return load_run_config(ConfigTree::parse_file(path));
}

// Fully expanded parameter dump; every value the run will actually use.
inline nlohmann::json resolved_json(const RunConfig& rc) {
    nlohmann::json j;
    j["scenario"] = {{"name", rc.sim.name},       {"dt", rc.sim.dt},
                     {"duration", rc.sim.duration}, {"seed", rc.sim.seed},
                     {"threads", rc.sim.threads},  {"greedy", rc.sim.greedy},
                     {"output_dir", rc.output_dir}};
    j["controller"] = {{"rho", rc.sim.controller.rho},
                       {"epsilon", rc.sim.controller.epsilon},
                       {"theta_g", rc.sim.controller.theta_g},
                       {"kappa", rc.sim.controller.kappa},
                       {"omega_samples", rc.sim.controller.omega_samples},
                       {"refine_factor", rc.sim.controller.refine_factor},
                       {"speed_objective",
                        rc.sim.controller.speed_objective == SpeedObjective::Drag ? "drag"
                                                                                  : "power"}};
    j["cutoff"] = {{"min_gain", rc.sim.cutoff.min_gain},
                   {"span_multiple", rc.sim.cutoff.span_multiple}};
    j["jitter"] = {{"pos_x", rc.sim.jitter.pos_x},
                   {"pos_y", rc.sim.jitter.pos_y},
                   {"heading", rc.sim.jitter.heading}};
    j["formation"] = {{"gap_lo_factor", rc.formation.gap_lo_factor},
                      {"gap_hi_factor", rc.formation.gap_hi_factor},
                      {"score_min", rc.formation.score_min},
                      {"collinear_tol", rc.formation.collinear_tol}};
    j["agents"] = nlohmann::json::array();
    for (const auto& a : rc.sim.agents) {
        j["agents"].push_back({{"x", a.initial_state.position.x},
                               {"y", a.initial_state.position.y},
                               {"theta", a.initial_state.heading},
                               {"initial_speed", a.initial_speed},
                               {"gamma", a.aero.vortex.gamma},
                               {"omega", a.aero.vortex.omega},
                               {"r_star", a.aero.vortex.r_star},
                               {"half_span", a.aero.vortex.half_span},
                               {"mu", a.aero.wake.mu},
                               {"sigma", a.aero.wake.sigma},
                               {"lift", a.aero.lift},
                               {"c1", a.drag.c1},
                               {"c2", a.drag.c2},
                               {"v_min", a.bounds.v_min},
                               {"v_max", a.bounds.v_max},
                               {"omega_max", a.bounds.omega_max}});
    }
    return j;
}

// FNV-1a content hash of the raw configuration text plus overrides.
inline std::string content_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace anseroid
