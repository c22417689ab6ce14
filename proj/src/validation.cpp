#include "amphibsim/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <vector>

#include "amphibsim/dynamics.hpp"
#include "amphibsim/errors.hpp"
#include "amphibsim/integrator.hpp"
#include "amphibsim/mission.hpp"
#include "amphibsim/trajectory.hpp"

namespace amphibsim {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Release tolerances, fixed here on purpose.
constexpr double kHoverDriftLimit = 1e-3;        // [m] over the hover plan
constexpr double kHoverPitchLimitDeg = 0.01;     // [deg]
constexpr double kHoverWallLimit = 1.0;          // [s] per model
constexpr double kTerminalRelTol = 0.01;         // 1% of analytic sink speed
constexpr double kDepthTolerance = 0.05;         // [m] around the target depth
constexpr double kCruisePitchMinDeg = 65.0;
constexpr double kCruisePitchMaxDeg = 75.0;
constexpr double kThrottleMeanTol = 1e-9;        // stage-3 collective bookkeeping
constexpr double kTransitLimit = 2.0;            // [s] first-to-last crossing
constexpr double kRatioRelTol = 1e-9;            // thrust scaling law
constexpr double kReductionRelTol = 1e-9;        // 3D->2D derivative match
constexpr double kPlanarResidual = 1e-9;         // out-of-plane derivative bound
constexpr double kCrossCheckTol = 1e-5;          // rk45 vs rk4 final state
constexpr double kConservationTol = 1e-9;        // compensation bookkeeping

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(10);
    out << v;
    return out.str();
}

struct Failures {
    std::vector<std::string> items;
    void add(const std::string& s) { items.push_back(s); }
    bool ok() const { return items.empty(); }
    std::string join(const std::string& ok_detail) const {
        if (items.empty()) return ok_detail;
        std::string out;
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) out += "; ";
            out += items[i];
        }
        return out;
    }
};

// Deterministic uniform generator (64-bit LCG; identical on every platform).
class UniformRng {
  public:
    explicit UniformRng(std::uint64_t seed) : state_(seed) {}
    double next() {  // in [0, 1)
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return std::ldexp(static_cast<double>(state_ >> 11), -53);
    }
    double range(double lo, double hi) { return lo + (hi - lo) * next(); }

  private:
    std::uint64_t state_;
};

ScenarioConfig with_model(const ScenarioConfig& base, ModelKind model) {
    ScenarioConfig c = base;
    c.model = model;
    return c;
}

}  // namespace

CheckResult check_hover(const ScenarioConfig& cfg) {
    CheckResult r;
    r.name = "hover";
    Failures fails;
    double worst_drift = 0.0, worst_pitch = 0.0, worst_wall = 0.0;

    for (ModelKind model : {ModelKind::planar, ModelKind::full}) {
        ScenarioConfig c = with_model(cfg, model);
        c.plan.mode = MissionMode::hover;
        const char* tag = model == ModelKind::planar ? "2d" : "3d";

        const auto t0 = std::chrono::steady_clock::now();
        const MissionResult res = run_mission(c);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        worst_wall = std::max(worst_wall, wall);

        if (!res.summary.completed) {
            fails.add(std::string(tag) + ": hover plan did not complete (" +
                      res.summary.abort_reason + ")");
            continue;
        }
        for (const TrajectoryRow& row : res.record.rows) {
            worst_drift = std::max(worst_drift, std::abs(row.Z - c.plan.initial_altitude));
            worst_pitch = std::max(worst_pitch, std::abs(row.theta_deg));
        }
        if (res.summary.final_time < c.plan.hover_duration - c.sample_interval)
            fails.add(std::string(tag) + ": hover ended early at t=" +
                      fmt(res.summary.final_time));
        if (wall > kHoverWallLimit)
            fails.add(std::string(tag) + ": took " + fmt(wall) + " s wall clock (limit " +
                      fmt(kHoverWallLimit) + ")");
    }
    if (worst_drift > kHoverDriftLimit)
        fails.add("altitude drift " + fmt(worst_drift) + " m exceeds " +
                  fmt(kHoverDriftLimit));
    if (worst_pitch > kHoverPitchLimitDeg)
        fails.add("pitch excursion " + fmt(worst_pitch) + " deg exceeds " +
                  fmt(kHoverPitchLimitDeg));

    r.passed = fails.ok();
    r.detail = fails.join("drift " + fmt(worst_drift) + " m, pitch " + fmt(worst_pitch) +
                          " deg, wall " + fmt(worst_wall) + " s");
    return r;
}

CheckResult check_terminal(const ScenarioConfig& cfg) {
    CheckResult r;
    r.name = "terminal";
    const VehicleParams& p = cfg.vehicle;
    if (p.C_d == 0.0 || p.g_water == 0.0) {
        r.skipped = true;
        r.passed = true;
        r.detail = "no drag or no submerged weight: terminal speed undefined";
        return r;
    }

    // Analytic unpowered sink speed: drag balances the submerged weight.
    const double v_t = std::sqrt(2.0 * p.m * p.g_water / (p.rho_water * p.C_d * p.A_ref));

    const RotorGeometry geom = cfg.make_geometry();
    const PlanarRotorSet units = PlanarRotorSet::from_geometry(geom);
    const std::array<double, 4> silent{0.0, 0.0, 0.0, 0.0};
    auto f = [&](double, std::span<const double> y, std::span<double> dy) {
        const State2D s = State2D::from_array(y);
        const State2D d = state_derivative_2d(s, silent, units, p, cfg.sampling);
        const auto da = d.to_array();
        std::copy(da.begin(), da.end(), dy.begin());
    };
    State2D start;
    start.Z = -5.0;  // fully submerged, at rest
    const auto y0 = start.to_array();
    const Trajectory traj = integrate(f, 0.0, y0, 10.0, cfg.integrator);
    const double vz_final = traj.final_state[3];

    const double rel_err = std::abs(-vz_final - v_t) / v_t;
    Failures fails;
    if (!(vz_final < 0.0)) fails.add("vehicle did not sink (vz=" + fmt(vz_final) + ")");
    if (rel_err > kTerminalRelTol)
        fails.add("sink speed " + fmt(-vz_final) + " m/s vs analytic " + fmt(v_t) +
                  " m/s (rel err " + fmt(rel_err) + ")");
    r.passed = fails.ok();
    r.detail = fails.join("sink speed " + fmt(-vz_final) + " m/s matches analytic " +
                          fmt(v_t) + " m/s to " + fmt(rel_err));
    return r;
}

namespace {

// Shared mission-shape assertions for checks 3, 4 and 8.
struct MissionProbe {
    MissionResult result;
    ScenarioConfig config;
};

MissionProbe run_default_mission(const ScenarioConfig& cfg) {
    MissionProbe probe;
    probe.config = with_model(cfg, ModelKind::planar);
    probe.config.plan.mode = MissionMode::five_stage;
    probe.result = run_mission(probe.config);
    return probe;
}

}  // namespace

CheckResult check_mission(const ScenarioConfig& cfg) {
    CheckResult r;
    r.name = "mission";
    const MissionProbe probe = run_default_mission(cfg);
    const MissionResult& res = probe.result;
    const MissionPlan& plan = probe.config.plan;
    Failures fails;

    if (!res.summary.completed)
        fails.add("mission did not complete: " + res.summary.abort_reason);

    // All five stages must appear, in order.
    std::vector<int> seen;
    for (const StageSpan& sp : res.summary.stages)
        if (seen.empty() || seen.back() != sp.stage) seen.push_back(sp.stage);
    const std::vector<int> expected = {1, 2, 3, 4, 5, 6};
    if (seen != expected) {
        std::string got;
        for (int s : seen) got += std::to_string(s) + " ";
        fails.add("stage sequence [" + got + "] differs from [1 2 3 4 5 6]");
    }

    const double depth_err =
        std::abs(res.summary.depth_at_cruise_entry - (-plan.target_depth));
    if (depth_err > kDepthTolerance)
        fails.add("cruise entry depth Z=" + fmt(res.summary.depth_at_cruise_entry) +
                  " misses -" + fmt(plan.target_depth) + " by " + fmt(depth_err) + " m");

    // Stage-3 rows: pitch window, monotone X, exact collective bookkeeping.
    double pitch_lo = 1e9, pitch_hi = -1e9, prev_x = -1e18;
    double worst_mean_err = 0.0;
    int cruise_rows = 0;
    bool x_monotone = true;
    for (const TrajectoryRow& row : res.record.rows) {
        if (row.stage != static_cast<int>(Stage::cruise)) continue;
        ++cruise_rows;
        pitch_lo = std::min(pitch_lo, row.theta_deg);
        pitch_hi = std::max(pitch_hi, row.theta_deg);
        if (row.X < prev_x) x_monotone = false;
        prev_x = row.X;
        if (row.cut_mask == 0 && !row.shortfall) {
            double mean_throttle = 0.0;
            for (std::size_t g = 0; g < row.omega.size(); ++g) {
                const MediumSample m =
                    density_at(row.Z, probe.config.arm_station * ((g % 2 == 0) ? 1.0 : -1.0),
                               probe.config.vehicle);
                const double cap = m.in_air ? probe.config.vehicle.omega_max_air
                                            : probe.config.vehicle.omega_max_water;
                mean_throttle += row.omega[g] / cap;
            }
            mean_throttle /= static_cast<double>(row.omega.size());
            worst_mean_err =
                std::max(worst_mean_err, std::abs(mean_throttle - plan.cruise_throttle));
        }
    }
    if (cruise_rows == 0) {
        fails.add("no cruise rows logged");
    } else {
        if (pitch_lo < kCruisePitchMinDeg || pitch_hi > kCruisePitchMaxDeg)
            fails.add("cruise pitch spans [" + fmt(pitch_lo) + ", " + fmt(pitch_hi) +
                      "] deg outside [" + fmt(kCruisePitchMinDeg) + ", " +
                      fmt(kCruisePitchMaxDeg) + "]");
        if (!x_monotone) fails.add("X is not non-decreasing through the cruise");
        if (worst_mean_err > kThrottleMeanTol)
            fails.add("stage-3 mean throttle misses " + fmt(plan.cruise_throttle) +
                      " by " + fmt(worst_mean_err));
    }

    r.passed = fails.ok();
    r.detail = fails.join(
        "completed in " + fmt(res.summary.final_time) + " s; cruise depth Z=" +
        fmt(res.summary.depth_at_cruise_entry) + " m, pitch [" + fmt(pitch_lo) + ", " +
        fmt(pitch_hi) + "] deg, mean-throttle err " + fmt(worst_mean_err));
    return r;
}

CheckResult check_transition(const ScenarioConfig& cfg) {
    CheckResult r;
    r.name = "transition";
    const MissionProbe probe = run_default_mission(cfg);
    const MissionResult& res = probe.result;
    const MissionPlan& plan = probe.config.plan;
    Failures fails;

    if (!res.summary.completed)
        fails.add("mission did not complete: " + res.summary.abort_reason);

    const TransitWindow& down = res.summary.descent_transit;
    const TransitWindow& up = res.summary.ascent_transit;
    if (!down.valid || down.count < 4)
        fails.add("descent logged " + std::to_string(down.count) + " crossings, expected 4");
    else if (down.duration() >= kTransitLimit)
        fails.add("descent transit " + fmt(down.duration()) + " s exceeds " +
                  fmt(kTransitLimit) + " s");
    if (!up.valid || up.count < 4)
        fails.add("ascent logged " + std::to_string(up.count) + " crossings, expected 4");
    else if (up.duration() >= kTransitLimit)
        fails.add("ascent transit " + fmt(up.duration()) + " s exceeds " +
                  fmt(kTransitLimit) + " s");

    // Cut exactness: every logged row must have silenced exactly the units
    // inside the band, and silenced means a literal zero speed.
    const std::array<double, 4> stations = {probe.config.arm_station,
                                            -probe.config.arm_station,
                                            probe.config.arm_station,
                                            -probe.config.arm_station};
    std::size_t bad_rows = 0;
    for (const TrajectoryRow& row : res.record.rows) {
        if (row.stage == static_cast<int>(Stage::done)) continue;
        for (std::size_t g = 0; g < 4; ++g) {
            const bool in_band = std::abs(row.Z - stations[g]) < plan.interface_band;
            const bool masked = (row.cut_mask >> g) & 1u;
            if (in_band != masked || (masked && row.omega[g] != 0.0)) {
                ++bad_rows;
                break;
            }
        }
    }
    if (bad_rows > 0)
        fails.add(std::to_string(bad_rows) + " rows violate the interface cut schedule");

    r.passed = fails.ok();
    r.detail = fails.join("descent " + fmt(down.duration()) + " s (" +
                          std::to_string(down.count) + " crossings), ascent " +
                          fmt(up.duration()) + " s (" + std::to_string(up.count) +
                          " crossings), cut schedule exact");
    return r;
}

CheckResult check_medium_ratio(const ScenarioConfig& cfg) {
    CheckResult r;
    r.name = "medium_ratio";
    const VehicleParams& p = cfg.vehicle;
    Failures fails;

    const double expected_ratio = p.rho_water / p.rho_air;
    double worst = 0.0;
    for (double omega : {1.0, 23.25, 100.0, 386.5, 773.1}) {
        const double ratio =
            rotor_thrust(omega, p.rho_water, p) / rotor_thrust(omega, p.rho_air, p);
        worst = std::max(worst,
                         std::abs(ratio - expected_ratio) / expected_ratio);
    }
    if (worst > kRatioRelTol)
        fails.add("thrust ratio deviates from rho_water/rho_air by " + fmt(worst));

    // Reference-point spot checks at each medium's speed ceiling.
    const double t_air = rotor_thrust(p.omega_max_air, p.rho_air, p);
    const double t_water = rotor_thrust(p.omega_max_water, p.rho_water, p);
    const double expect_air = p.K_T * p.rho_air * p.omega_max_air * p.omega_max_air;
    const double expect_water =
        p.K_T * p.rho_water * p.omega_max_water * p.omega_max_water;
    if (std::abs(t_air - expect_air) > 1e-12 * expect_air)
        fails.add("air ceiling thrust mismatch");
    if (std::abs(t_water - expect_water) > 1e-12 * expect_water)
        fails.add("water ceiling thrust mismatch");

    r.passed = fails.ok();
    r.detail = fails.join("ratio rho_w/rho_a = " + fmt(expected_ratio) +
                          " reproduced to " + fmt(worst) + "; ceiling thrusts " +
                          fmt(t_air) + " N (air), " + fmt(t_water) + " N (water)");
    return r;
}

CheckResult check_convergence(const ScenarioConfig& cfg) {
    CheckResult r;
    r.name = "convergence";
    Failures fails;

    // (a) Tolerance sweep on a problem with a closed form: y' = -y.
    auto decay = [](double, std::span<const double> y, std::span<double> dy) {
        dy[0] = -y[0];
    };
    const double y0[] = {1.0};
    const double exact = std::exp(-1.0);
    std::vector<double> errs;
    for (double tol = 1e-4; tol >= 0.99e-10; tol *= 0.1) {
        IntegratorConfig ic = cfg.integrator;
        ic.rel_tol = tol;
        ic.abs_tol = tol * 1e-2;
        const Trajectory traj = integrate(decay, 0.0, y0, 1.0, ic);
        errs.push_back(std::abs(traj.final_state[0] - exact));
    }
    for (std::size_t i = 0; i < errs.size(); ++i) {
        const double tol = 1e-4 * std::pow(0.1, static_cast<double>(i));
        if (errs[i] > std::max(50.0 * tol, 1e-13))
            fails.add("decay error " + fmt(errs[i]) + " too large at rel_tol " + fmt(tol));
        if (i > 0 && errs[i] > errs[i - 1] * 1.2 + 1e-14)
            fails.add("decay error not monotone between rel_tol " + fmt(tol * 10) +
                      " and " + fmt(tol));
    }

    // (b) Adaptive vs fixed-step cross-check on the full mission.
    ScenarioConfig adaptive = with_model(cfg, ModelKind::planar);
    adaptive.plan.mode = MissionMode::five_stage;
    adaptive.stepper = StepperKind::rk45;
    ScenarioConfig fixed = adaptive;
    fixed.stepper = StepperKind::rk4;
    fixed.rk4_step = 1e-4;

    const MissionResult ma = run_mission(adaptive);
    const MissionResult mf = run_mission(fixed);
    if (!ma.summary.completed) fails.add("adaptive mission did not complete");
    if (!mf.summary.completed) fails.add("fixed-step mission did not complete");

    double worst = 0.0;
    if (!ma.record.rows.empty() && !mf.record.rows.empty()) {
        if (std::abs(ma.summary.final_time - mf.summary.final_time) >
            adaptive.sample_interval + 1e-12)
            fails.add("completion times differ: " + fmt(ma.summary.final_time) + " vs " +
                      fmt(mf.summary.final_time));
        const std::size_t last =
            std::min(ma.record.rows.size(), mf.record.rows.size()) - 1;
        const TrajectoryRow& ra = ma.record.rows[last];
        const TrajectoryRow& rf = mf.record.rows[last];
        auto rel = [&](double a, double b) {
            return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
        };
        worst = std::max({rel(ra.X, rf.X), rel(ra.Z, rf.Z),
                          rel(ra.theta_deg, rf.theta_deg),
                          rel(ra.theta_dot, rf.theta_dot)});
        if (worst > kCrossCheckTol)
            fails.add("adaptive and fixed-step states diverge by " + fmt(worst) +
                      " at t=" + fmt(ra.t));
    }

    r.passed = fails.ok();
    r.detail = fails.join("decay errors " + fmt(errs.front()) + " -> " + fmt(errs.back()) +
                          " over rel_tol 1e-4 -> 1e-10; cross-check divergence " +
                          fmt(worst));
    return r;
}

CheckResult check_reduction(const ScenarioConfig& cfg) {
    CheckResult r;
    r.name = "reduction";
    const VehicleParams& p = cfg.vehicle;
    const RotorGeometry geom = cfg.make_geometry();
    const PlanarRotorSet units = PlanarRotorSet::from_geometry(geom);
    Failures fails;

    UniformRng rng(0x5eed5eed5eed5eedULL);
    double worst_match = 0.0, worst_residual = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        State3D s3;
        s3.position = {rng.range(-2.0, 2.0), 0.0, rng.range(-2.0, 2.0)};
        s3.velocity = {rng.range(-3.0, 3.0), 0.0, rng.range(-3.0, 3.0)};
        s3.attitude = {.yaw = 0.0, .pitch = rng.range(-1.3, 1.3), .roll = 0.0};
        s3.body_rate = {0.0, rng.range(-2.0, 2.0), 0.0};

        std::array<double, 4> unit_speed{};
        for (double& w : unit_speed) w = rng.range(0.0, 800.0);
        const std::vector<double> rotor_speed = units.expand(unit_speed);

        const State3D d3 = state_derivative_3d(s3, rotor_speed, geom, p);
        const State2D s2 = reduce_3d_to_2d(s3);
        const State2D d2 = state_derivative_2d(s2, unit_speed, units, p);

        // In-plane components must match.
        const double a3[6] = {d3.position.x, d3.position.z,  d3.velocity.x,
                              d3.velocity.z, d3.attitude.pitch, d3.body_rate.y};
        const auto a2 = d2.to_array();
        const double b2[6] = {a2[0], a2[1], a2[2], a2[3], a2[4], a2[5]};
        for (int i = 0; i < 6; ++i) {
            const double rel = std::abs(a3[i] - b2[i]) /
                               std::max({1.0, std::abs(a3[i]), std::abs(b2[i])});
            worst_match = std::max(worst_match, rel);
        }
        // Out-of-plane derivatives must vanish.
        worst_residual = std::max(
            {worst_residual, std::abs(d3.position.y), std::abs(d3.velocity.y),
             std::abs(d3.attitude.roll), std::abs(d3.attitude.yaw),
             std::abs(d3.body_rate.x), std::abs(d3.body_rate.z)});
    }
    if (worst_match > kReductionRelTol)
        fails.add("planar/full derivative mismatch " + fmt(worst_match));
    if (worst_residual > kPlanarResidual)
        fails.add("out-of-plane derivative residual " + fmt(worst_residual));

    r.passed = fails.ok();
    r.detail = fails.join("200 random planar states: worst in-plane mismatch " +
                          fmt(worst_match) + ", out-of-plane residual " +
                          fmt(worst_residual));
    return r;
}

CheckResult check_compensation(const ScenarioConfig& cfg) {
    CheckResult r;
    r.name = "compensation";
    const MissionProbe probe = run_default_mission(cfg);
    const MissionResult& res = probe.result;
    Failures fails;

    if (!res.summary.completed)
        fails.add("mission did not complete: " + res.summary.abort_reason);
    if (res.summary.compensation.empty())
        fails.add("no compensation-active control instants were recorded");

    double worst = 0.0;
    std::size_t unclamped = 0;
    for (const CompensationAudit& a : res.summary.compensation) {
        if (a.clamped) continue;
        ++unclamped;
        worst = std::max(worst, std::abs(a.delivered - a.commanded) /
                                    std::max(1.0, a.commanded));
    }
    if (unclamped == 0)
        fails.add("every compensation instant hit the throttle ceiling");
    if (worst > kConservationTol)
        fails.add("thrust bookkeeping error " + fmt(worst) + " exceeds " +
                  fmt(kConservationTol));

    r.passed = fails.ok();
    r.detail = fails.join(std::to_string(res.summary.compensation.size()) +
                          " compensation instants (" + std::to_string(unclamped) +
                          " unclamped), worst conservation error " + fmt(worst));
    return r;
}

std::vector<CheckResult> run_validation(const ScenarioConfig& cfg,
                                        const std::string& suite) {
    struct Entry {
        const char* name;
        CheckResult (*fn)(const ScenarioConfig&);
    };
    static const Entry entries[] = {
        {"hover", check_hover},           {"terminal", check_terminal},
        {"mission", check_mission},       {"transition", check_transition},
        {"medium_ratio", check_medium_ratio}, {"convergence", check_convergence},
        {"reduction", check_reduction},   {"compensation", check_compensation},
    };
    std::vector<CheckResult> out;
    bool matched = false;
    for (const Entry& e : entries) {
        if (suite == "all" || suite == e.name) {
            matched = true;
            out.push_back(e.fn(cfg));
        }
    }
    if (!matched)
        throw ConfigError("unknown validation suite '" + suite +
                          "' (expected all, hover, terminal, mission, transition, "
                          "medium_ratio, convergence, reduction, compensation)");
    return out;
}

}  // namespace amphibsim
