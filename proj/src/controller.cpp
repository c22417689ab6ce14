#include "amphibsim/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "amphibsim/errors.hpp"

namespace amphibsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
// Collective floor used only for the trim linearization slope, so pitch
// authority does not blow up as the commanded thrust approaches zero.
constexpr double kTrimThrottleFloor = 0.02;
// Thrust tilt compensation is limited to 4x (cos(theta) floored here) so the
// collective stays bounded at large pitch.
constexpr double kTiltCosFloor = 0.25;

struct UnitEnv {
    double rho = 0.0;
    double omega_max = 0.0;
    double g_eff = 0.0;
    bool in_air = true;
    int mult = 0;
    double x_factor = 0.0;
    double station = 0.0;
    double pitch_sign = 0.0;  // -1 fore, +1 aft: sign of its throttle trim
};

std::array<UnitEnv, 4> sample_units(double Z, const PlanarRotorSet& units,
                                    const VehicleParams& p) {
    std::array<UnitEnv, 4> env{};
    for (std::size_t g = 0; g < 4; ++g) {
        const PlanarUnit& u = units.units[g];
        const MediumSample m = density_at(Z, u.station, p);
        env[g].rho = m.rho;
        env[g].g_eff = m.g_eff;
        env[g].in_air = m.in_air;
        env[g].omega_max = m.in_air ? p.omega_max_air : p.omega_max_water;
        env[g].mult = u.mult;
        env[g].x_factor = u.x_factor;
        env[g].station = u.station;
        env[g].pitch_sign = u.x_factor > 0.0 ? -1.0 : 1.0;
    }
    return env;
}

// Thrust of one unit at a given throttle.
double unit_thrust(const UnitEnv& u, double throttle, const VehicleParams& p) {
    const double w = throttle * u.omega_max;
    return static_cast<double>(u.mult) * p.K_T * u.rho * w * w;
}

double full_throttle_thrust(const std::array<UnitEnv, 4>& env, const VehicleParams& p) {
    double cap = 0.0;
    for (const UnitEnv& u : env) cap += unit_thrust(u, 1.0, p);
    return cap;
}

struct StageTargets {
    double theta_ref = 0.0;
    double vz_ref = 0.0;
    bool fixed_collective = false;  // stage 3 runs open-loop on throttle
    PDGains gains{};
};

StageTargets stage_targets(const StageState& ss, const MissionPlan& plan,
                           const PlanarView& view) {
    StageTargets tg;
    const PDGains rotate = plan.rotate_gains;
    const PDGains level = plan.single_gain_set ? plan.rotate_gains : plan.level_gains;
    auto depth_rate = [&](double Z_ref) {
        return std::clamp(plan.depth_gain * (Z_ref - view.Z), -plan.descent_rate,
                          plan.descent_rate);
    };
    switch (ss.stage) {
        case Stage::hover:
            tg.theta_ref = 0.0;
            tg.vz_ref = depth_rate(plan.initial_altitude);
            tg.gains = level;
            break;
        case Stage::descend:
            tg.theta_ref = 0.0;
            tg.vz_ref = -plan.descent_rate;
            tg.gains = level;
            break;
        case Stage::rotate_to_cruise:
            tg.theta_ref = plan.cruise_pitch;
            tg.vz_ref = depth_rate(-plan.target_depth);
            tg.gains = rotate;
            break;
        case Stage::cruise:
            tg.theta_ref = plan.cruise_pitch;
            tg.fixed_collective = true;
            tg.gains = rotate;
            break;
        case Stage::rotate_to_vertical:
            tg.theta_ref = 0.0;
            tg.vz_ref = depth_rate(ss.hold_depth);
            tg.gains = level;
            break;
        case Stage::ascend:
            tg.theta_ref = 0.0;
            tg.vz_ref = plan.descent_rate;
            tg.gains = level;
            break;
        case Stage::done:
            break;
    }
    return tg;
}

void enter_stage(StageState& ss, Stage next, double t) {
    ss.stage = next;
    ss.entry_time = t;
    ss.settle_since = -1.0;
}

// Settle test: theta inside the band around theta_ref continuously for the
// dwell time (checked at control instants).
bool settled(StageState& ss, double t, double theta, double theta_ref,
             const MissionPlan& plan) {
    if (std::abs(theta - theta_ref) < plan.settle_band) {
        if (ss.settle_since < 0.0) ss.settle_since = t;
        return t - ss.settle_since >= plan.settle_dwell;
    }
    ss.settle_since = -1.0;
    return false;
}

void advance_stage(double t, const PlanarView& view, StageState& ss,
                   const MissionPlan& plan, const std::array<UnitEnv, 4>& env) {
    switch (ss.stage) {
        case Stage::hover:
            if (t - ss.entry_time >= plan.hover_duration) enter_stage(ss, Stage::done, t);
            break;
        case Stage::descend:
            if (view.Z <= -plan.target_depth) enter_stage(ss, Stage::rotate_to_cruise, t);
            break;
        case Stage::rotate_to_cruise:
            if (settled(ss, t, view.theta, plan.cruise_pitch, plan))
                enter_stage(ss, Stage::cruise, t);
            break;
        case Stage::cruise:
            if (t - ss.entry_time >= plan.cruise_duration) {
                enter_stage(ss, Stage::rotate_to_vertical, t);
                ss.hold_depth = view.Z;
            }
            break;
        case Stage::rotate_to_vertical:
            if (settled(ss, t, view.theta, 0.0, plan)) enter_stage(ss, Stage::ascend, t);
            break;
        case Stage::ascend: {
            bool all_in_air = true;
            for (const UnitEnv& u : env) all_in_air = all_in_air && u.in_air;
            if (all_in_air && view.Z > plan.exit_clearance) enter_stage(ss, Stage::done, t);
            break;
        }
        case Stage::done:
            break;
    }
    if (ss.stage != Stage::done && t - ss.entry_time > plan.stage_timeout) {
        ss.aborted = true;
        ss.abort_reason = std::string("stage '") + stage_name(ss.stage) +
                          "' exceeded its " + std::to_string(plan.stage_timeout) +
                          " s timeout";
    }
}

}  // namespace

const char* stage_name(Stage s) {
    switch (s) {
        case Stage::hover: return "hover";
        case Stage::descend: return "descend";
        case Stage::rotate_to_cruise: return "rotate_to_cruise";
        case Stage::cruise: return "cruise";
        case Stage::rotate_to_vertical: return "rotate_to_vertical";
        case Stage::ascend: return "ascend";
        case Stage::done: return "done";
    }
    return "unknown";
}

void MissionPlan::validate() const {
    std::vector<std::string> bad;
    auto pos = [&](double v, const char* k) {
        if (!(std::isfinite(v) && v > 0.0)) bad.push_back(std::string(k) + ": must be > 0");
    };
    auto nonneg = [&](double v, const char* k) {
        if (!(std::isfinite(v) && v >= 0.0))
            bad.push_back(std::string(k) + ": must be >= 0");
    };
    pos(initial_altitude, "initial_altitude");
    pos(target_depth, "target_depth");
    if (!(std::isfinite(cruise_pitch) && cruise_pitch > 0.0 && cruise_pitch < kPi / 2))
        bad.push_back("cruise_pitch_deg: must lie in (0, 90)");
    if (!(std::isfinite(cruise_throttle) && cruise_throttle > 0.0 && cruise_throttle <= 1.0))
        bad.push_back("cruise_throttle: must lie in (0, 1]");
    pos(descent_rate, "descent_rate");
    nonneg(cruise_duration, "cruise_duration");
    pos(interface_band, "interface_band");
    nonneg(exit_clearance, "exit_clearance");
    pos(stage_timeout, "stage_timeout");
    pos(settle_band, "settle_band_deg");
    pos(settle_dwell, "settle_dwell");
    pos(hover_duration, "hover_duration");
    pos(climb_rate_gain, "climb_rate_gain");
    pos(depth_gain, "depth_gain");
    if (!(std::isfinite(rotate_gains.K_P) && rotate_gains.K_P > 0.0))
        bad.push_back("K_P1: must be > 0");
    if (!std::isfinite(rotate_gains.K_D)) bad.push_back("K_D1: must be finite");
    if (!(std::isfinite(level_gains.K_P) && level_gains.K_P > 0.0))
        bad.push_back("K_P2: must be > 0");
    if (!std::isfinite(level_gains.K_D)) bad.push_back("K_D2: must be finite");
    if (!bad.empty()) {
        std::string msg = "mission plan invalid:";
        for (const auto& b : bad) msg += "\n  " + b;
        throw ValidationError(msg);
    }
}

double pd_pitch_command(double theta_ref, double theta, double theta_rate,
                        const PDGains& gains) {
    if (!(std::isfinite(theta_ref) && std::isfinite(theta) && std::isfinite(theta_rate)))
        throw ValidationError("pd_pitch_command: inputs must be finite");
    return gains.K_P * (theta_ref - theta) + gains.K_D * theta_rate;
}

double throttle_to_omega(double throttle, const MediumSample& medium,
                         const VehicleParams& p) {
    if (!(std::isfinite(throttle) && throttle >= 0.0 && throttle <= 1.0))
        throw ValidationError("throttle_to_omega: throttle must lie in [0, 1]");
    return throttle * (medium.in_air ? p.omega_max_air : p.omega_max_water);
}

unsigned interface_cut_mask(double Z, std::span<const double> stations, double band) {
    if (!std::isfinite(Z)) throw ValidationError("interface_cut_mask: Z must be finite");
    if (!(std::isfinite(band) && band > 0.0))
        throw ValidationError("interface_cut_mask: band must be > 0");
    if (stations.size() > 31)
        throw ValidationError("interface_cut_mask: too many stations for the mask");
    unsigned mask = 0;
    for (std::size_t g = 0; g < stations.size(); ++g)
        if (std::abs(Z - stations[g]) < band) mask |= 1u << g;
    return mask;
}

std::vector<double> interface_throttle_schedule(std::span<const double> throttle,
                                                unsigned cut_mask) {
    std::vector<double> out(throttle.begin(), throttle.end());
    for (std::size_t g = 0; g < out.size(); ++g) {
        if (!(std::isfinite(out[g]) && out[g] >= 0.0 && out[g] <= 1.0))
            throw ValidationError("interface_throttle_schedule: throttle_" +
                                  std::to_string(g + 1) + " must lie in [0, 1]");
        if (cut_mask & (1u << g)) out[g] = 0.0;
    }
    return out;
}

CompensationResult thrust_compensation(std::span<const double> throttle,
                                       unsigned cut_mask, double commanded_total_thrust,
                                       std::span<const double> rho,
                                       std::span<const double> omega_max,
                                       std::span<const int> mult,
                                       const VehicleParams& p) {
    const std::size_t n = throttle.size();
    if (rho.size() != n || omega_max.size() != n || mult.size() != n || n == 0)
        throw ValidationError("thrust_compensation: spans must be non-empty and equal length");
    if (!(std::isfinite(commanded_total_thrust) && commanded_total_thrust >= 0.0))
        throw ValidationError("thrust_compensation: commanded thrust must be >= 0");

    CompensationResult r;
    r.throttle = interface_throttle_schedule(throttle, cut_mask);
    r.thrust_commanded = commanded_total_thrust;
    r.any_cut = cut_mask != 0;

    auto thrust_of = [&](std::size_t g, double u) {
        const double w = u * omega_max[g];
        return static_cast<double>(mult[g]) * p.K_T * rho[g] * w * w;
    };

    double active_thrust = 0.0;
    bool any_active = false;
    for (std::size_t g = 0; g < n; ++g) {
        if (cut_mask & (1u << g)) continue;
        any_active = true;
        active_thrust += thrust_of(g, r.throttle[g]);
    }

    if (!any_active) {
        r.all_cut = true;
        r.thrust_delivered = 0.0;
        return r;
    }
    if (!r.any_cut || commanded_total_thrust == 0.0) {
        r.thrust_delivered = active_thrust;
        return r;
    }
    if (active_thrust <= 0.0) {
        // Survivors are at zero throttle; scaling cannot recover any thrust.
        r.clamped = true;
        r.thrust_delivered = 0.0;
        return r;
    }

    const double scale = std::sqrt(commanded_total_thrust / active_thrust);
    double delivered = 0.0;
    for (std::size_t g = 0; g < n; ++g) {
        if (cut_mask & (1u << g)) continue;
        double u = r.throttle[g] * scale;
        if (u > 1.0) {
            u = 1.0;
            r.clamped = true;
        }
        r.throttle[g] = u;
        delivered += thrust_of(g, u);
    }
    r.thrust_delivered = delivered;
    return r;
}

MissionCommand mission_step(double t, const PlanarView& view, StageState& state,
                            const MissionPlan& plan, const PlanarRotorSet& units,
                            const VehicleParams& params) {
    if (!(std::isfinite(t) && std::isfinite(view.Z) && std::isfinite(view.vz) &&
          std::isfinite(view.theta) && std::isfinite(view.theta_rate)))
        throw ValidationError("mission_step: inputs must be finite");

    std::array<UnitEnv, 4> env = sample_units(view.Z, units, params);
    advance_stage(t, view, state, plan, env);

    MissionCommand cmd;
    cmd.stage = state.stage;
    if (state.stage == Stage::done || state.aborted) return cmd;

    const StageTargets tg = stage_targets(state, plan, view);
    cmd.theta_ref = tg.theta_ref;

    // Collective: feedforward weight plus a proportional vertical-rate term,
    // shared across the cos(theta)-floored thrust tilt; stage 3 instead holds
    // the fixed cruise throttle.
    double u0;
    if (tg.fixed_collective) {
        u0 = plan.cruise_throttle;
    } else {
        const double g_eff = density_at(view.Z, 0.0, params).g_eff;
        const double accel_cmd =
            g_eff + plan.climb_rate_gain * (tg.vz_ref - view.vz);
        const double tilt = std::clamp(std::cos(view.theta), kTiltCosFloor, 1.0);
        const double thrust_cmd = params.m * std::max(accel_cmd, 0.0) / tilt;
        const double cap = full_throttle_thrust(env, params);
        u0 = std::clamp(std::sqrt(std::max(thrust_cmd, 0.0) / cap), 0.0, 1.0);
    }
    cmd.collective = u0;

    // Pitch trim split across fore/aft units.
    const double tau_cmd = pd_pitch_command(tg.theta_ref, view.theta, view.theta_rate, tg.gains);
    std::array<double, 4> throttle{};
    if (plan.exact_allocation) {
        // Solve the 2x2 system in squared fore/aft throttles for total
        // thrust T0 (the collective's thrust) and pitch torque tau_cmd.
        const double T0 = [&] {
            double s = 0.0;
            for (const UnitEnv& u : env) s += unit_thrust(u, u0, params);
            return s;
        }();
        double C_f = 0.0, C_r = 0.0, L_f = 0.0, L_r = 0.0;
        for (const UnitEnv& u : env) {
            const double c = unit_thrust(u, 1.0, params);
            if (u.x_factor > 0.0) {
                C_f += c;
                L_f += -u.x_factor * params.d * c;
            } else {
                C_r += c;
                L_r += -u.x_factor * params.d * c;
            }
        }
        // [C_f C_r; L_f L_r] [uf2; ur2] = [T0; tau]
        const double det = C_f * L_r - C_r * L_f;
        double uf2 = 0.0, ur2 = 0.0;
        if (std::abs(det) > 1e-12) {
            uf2 = (T0 * L_r - C_r * tau_cmd) / det;
            ur2 = (C_f * tau_cmd - L_f * T0) / det;
        }
        if (uf2 < 0.0 || ur2 < 0.0) cmd.mix_saturated = true;
        const double uf = std::sqrt(std::clamp(uf2, 0.0, 1.0));
        const double ur = std::sqrt(std::clamp(ur2, 0.0, 1.0));
        for (std::size_t g = 0; g < 4; ++g)
            throttle[g] = env[g].x_factor > 0.0 ? uf : ur;
    } else {
        // Linear split about the collective: d(tau)/d(delta) evaluated at u0.
        const double u_lin = std::max(u0, kTrimThrottleFloor);
        double slope = 0.0;
        for (const UnitEnv& u : env)
            slope += std::abs(u.x_factor) * params.d * unit_thrust(u, 1.0, params) *
                     2.0 * u_lin;
        const double delta = slope > 0.0 ? tau_cmd / slope : 0.0;
        for (std::size_t g = 0; g < 4; ++g) {
            double u = u0 + env[g].pitch_sign * delta;
            if (u < 0.0 || u > 1.0) cmd.mix_saturated = true;
            throttle[g] = std::clamp(u, 0.0, 1.0);
        }
    }

    // Interface schedule and thrust compensation.
    std::array<double, 4> stations{}, rhos{}, omega_caps{};
    std::array<int, 4> mults{};
    for (std::size_t g = 0; g < 4; ++g) {
        stations[g] = env[g].station;
        rhos[g] = env[g].rho;
        omega_caps[g] = env[g].omega_max;
        mults[g] = env[g].mult;
    }
    cmd.cut_mask = interface_cut_mask(view.Z, stations, plan.interface_band);
    double pre_cut_thrust = 0.0;
    for (std::size_t g = 0; g < 4; ++g) pre_cut_thrust += unit_thrust(env[g], throttle[g], params);

    const CompensationResult comp = thrust_compensation(
        throttle, cmd.cut_mask, pre_cut_thrust, rhos, omega_caps, mults, params);
    cmd.shortfall = comp.clamped;
    cmd.ballistic = comp.all_cut;
    cmd.thrust_commanded = comp.thrust_commanded;
    cmd.thrust_delivered = comp.thrust_delivered;

    for (std::size_t g = 0; g < 4; ++g) {
        cmd.throttle[g] = comp.throttle[g];
        MediumSample m;
        m.in_air = env[g].in_air;
        m.rho = env[g].rho;
        m.g_eff = env[g].g_eff;
        cmd.omega[g] = throttle_to_omega(comp.throttle[g], m, params);
    }
    return cmd;
}

}  // namespace amphibsim
