#include "amphibsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "amphibsim/errors.hpp"

namespace amphibsim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view v, const std::string& where) {
    const std::string_view t = trim(v);
    double out = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (first != last && *first == '+') ++first;  // from_chars rejects leading '+'
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(out))
        throw ConfigError(where + ": expected a finite number, got '" + std::string(t) + "'");
    return out;
}

std::size_t parse_count(std::string_view v, const std::string& where) {
    const std::string_view t = trim(v);
    std::size_t out = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
        throw ConfigError(where + ": expected a non-negative integer, got '" +
                          std::string(t) + "'");
    return out;
}

bool parse_bool(std::string_view v, const std::string& where) {
    const std::string_view t = trim(v);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    throw ConfigError(where + ": expected true/false/1/0, got '" + std::string(t) + "'");
}

// Dispatches one key.  Returns false when the (section, key) pair is unknown.
bool apply_entry(ScenarioConfig& c, std::string_view section, std::string_view key,
                 std::string_view value, const std::string& where) {
    auto num = [&] { return parse_double(value, where); };
    auto flag = [&] { return parse_bool(value, where); };

    if (section == "vehicle") {
        VehicleParams& v = c.vehicle;
        if (key == "m") v.m = num();
        else if (key == "I_xx") v.I_xx = num();
        else if (key == "I_yy") v.I_yy = num();
        else if (key == "I_zz") v.I_zz = num();
        else if (key == "K_t") v.K_T = num();
        else if (key == "K_Q") v.K_Q = num();
        else if (key == "d") v.d = num();
        else if (key == "C_d") v.C_d = num();
        else if (key == "A") v.A_ref = num();
        else if (key == "rho_air") v.rho_air = num();
        else if (key == "rho_water") v.rho_water = num();
        else if (key == "g_air") v.g_air = num();
        else if (key == "g_water") v.g_water = num();
        else if (key == "omega_max_air") v.omega_max_air = num();
        else if (key == "omega_max_water") v.omega_max_water = num();
        else if (key == "I_r") v.I_r = num();
        else return false;
        return true;
    }
    if (section == "geometry") {
        if (key == "arm_station") c.arm_station = num();
        else if (key == "azimuth_1_deg") c.arm_azimuth_deg[0] = num();
        else if (key == "azimuth_2_deg") c.arm_azimuth_deg[1] = num();
        else if (key == "azimuth_3_deg") c.arm_azimuth_deg[2] = num();
        else if (key == "azimuth_4_deg") c.arm_azimuth_deg[3] = num();
        else return false;
        return true;
    }
    if (section == "integrator") {
        IntegratorConfig& ic = c.integrator;
        if (key == "rel_tol") ic.rel_tol = num();
        else if (key == "abs_tol") ic.abs_tol = num();
        else if (key == "h_init") ic.h_init = num();
        else if (key == "h_min") ic.h_min = num();
        else if (key == "h_max") ic.h_max = num();
        else if (key == "max_steps") ic.max_steps = parse_count(value, where);
        else if (key == "event_tol") ic.event_tol = num();
        else if (key == "method") {
            const std::string_view t = trim(value);
            if (t == "rk45") c.stepper = StepperKind::rk45;
            else if (t == "rk4") c.stepper = StepperKind::rk4;
            else throw ConfigError(where + ": method must be rk45 or rk4");
        } else if (key == "rk4_step") c.rk4_step = num();
        else return false;
        return true;
    }
    if (section == "controller") {
        MissionPlan& p = c.plan;
        if (key == "K_P1") p.rotate_gains.K_P = num();
        else if (key == "K_D1") p.rotate_gains.K_D = num();
        else if (key == "K_P2") p.level_gains.K_P = num();
        else if (key == "K_D2") p.level_gains.K_D = num();
        else if (key == "single_gain_set") p.single_gain_set = flag();
        else if (key == "exact_allocation") p.exact_allocation = flag();
        else if (key == "climb_rate_gain") p.climb_rate_gain = num();
        else if (key == "depth_gain") p.depth_gain = num();
        else return false;
        return true;
    }
    if (section == "mission") {
        MissionPlan& p = c.plan;
        if (key == "mode") {
            const std::string_view t = trim(value);
            if (t == "five_stage") p.mode = MissionMode::five_stage;
            else if (t == "hover") p.mode = MissionMode::hover;
            else throw ConfigError(where + ": mode must be five_stage or hover");
        } else if (key == "initial_altitude") p.initial_altitude = num();
        else if (key == "target_depth") p.target_depth = num();
        else if (key == "cruise_pitch_deg") p.cruise_pitch = num() * kDegToRad;
        else if (key == "cruise_throttle") p.cruise_throttle = num();
        else if (key == "descent_rate") p.descent_rate = num();
        else if (key == "cruise_duration") p.cruise_duration = num();
        else if (key == "interface_band") p.interface_band = num();
        else if (key == "exit_clearance") p.exit_clearance = num();
        else if (key == "stage_timeout") p.stage_timeout = num();
        else if (key == "settle_band_deg") p.settle_band = num() * kDegToRad;
        else if (key == "settle_dwell") p.settle_dwell = num();
        else if (key == "hover_duration") p.hover_duration = num();
        else return false;
        return true;
    }
    if (section == "simulation") {
        if (key == "model") {
            const std::string_view t = trim(value);
            if (t == "2d") c.model = ModelKind::planar;
            else if (t == "3d") c.model = ModelKind::full;
            else throw ConfigError(where + ": model must be 2d or 3d");
        } else if (key == "sampling") {
            const std::string_view t = trim(value);
            if (t == "mean_station") c.sampling = PlanarSampling::mean_station;
            else if (t == "per_rotor") c.sampling = PlanarSampling::per_rotor;
            else throw ConfigError(where + ": sampling must be mean_station or per_rotor");
        } else if (key == "sample_interval") c.sample_interval = num();
        else if (key == "out_dir") c.out_dir = std::string(trim(value));
        else return false;
        return true;
    }
    return false;
}

}  // namespace

RotorGeometry ScenarioConfig::make_geometry() const {
    RotorGeometry g = RotorGeometry::standard(arm_station);
    for (int arm = 0; arm < 4; ++arm) {
        g.rotors[2 * arm].azimuth = arm_azimuth_deg[arm] * kDegToRad;
        g.rotors[2 * arm + 1].azimuth = arm_azimuth_deg[arm] * kDegToRad;
    }
    g.validate();
    return g;
}

void ScenarioConfig::validate() const {
    std::vector<std::string> bad;
    auto absorb = [&](const char* block, auto&& fn) {
        try {
            fn();
        } catch (const ValidationError& e) {
            bad.push_back(std::string(block) + ": " + e.what());
        }
    };
    absorb("[vehicle]", [&] { vehicle.validate(); });
    absorb("[integrator]", [&] { integrator.validate(); });
    absorb("[mission]", [&] { plan.validate(); });
    absorb("[geometry]", [&] { make_geometry(); });
    if (!(std::isfinite(sample_interval) && sample_interval > 0.0))
        bad.push_back("[simulation] sample_interval: must be > 0");
    if (!(std::isfinite(rk4_step) && rk4_step > 0.0))
        bad.push_back("[integrator] rk4_step: must be > 0");
    if (!bad.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& b : bad) msg += "\n" + b;
        throw ConfigError(msg);
    }
}

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        line = trim(line);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        const std::string where = "line " + std::to_string(line_no);

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(where + ": malformed section header '" +
                                  std::string(line) + "'");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "vehicle" && section != "geometry" && section != "integrator" &&
                section != "controller" && section != "mission" && section != "simulation")
                throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where + ": expected 'key = value', got '" +
                              std::string(line) + "'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (section.empty())
            throw ConfigError(where + ": key '" + std::string(key) +
                              "' appears before any [section]");
        if (!apply_entry(cfg, section, key, value, where))
            throw ConfigError(where + ": unknown key '" + std::string(key) +
                              "' in section [" + section + "]");
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void apply_key(ScenarioConfig& cfg, std::string_view dotted_key, std::string_view value) {
    const std::size_t dot = dotted_key.find('.');
    if (dot == std::string_view::npos)
        throw ConfigError("override key must look like section.key, got '" +
                          std::string(dotted_key) + "'");
    const std::string_view section = trim(dotted_key.substr(0, dot));
    const std::string_view key = trim(dotted_key.substr(dot + 1));
    const std::string where = "override '" + std::string(dotted_key) + "'";
    if (!apply_entry(cfg, section, key, value, where))
        throw ConfigError(where + ": unknown key");
}

}  // namespace amphibsim
