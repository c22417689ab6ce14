#include "amphibsim/mission.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "amphibsim/dynamics.hpp"
#include "amphibsim/errors.hpp"
#include "amphibsim/integrator.hpp"

namespace amphibsim {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Everything the per-model adapters must provide to the shared loop.
struct ModelAdapter {
    std::size_t state_size = 0;
    std::vector<double> state;            // flattened current state
    std::vector<EventSpec> events;        // rotor/unit guards + hull guard
    int n_logged = 4;                     // omega/rho columns in the record
    bool has_y = false;

    std::function<PlanarView(std::span<const double>)> view;
    // Derivative of the flattened state under the held unit command.
    std::function<void(const MissionCommand&, double, std::span<const double>,
                       std::span<double>)>
        deriv;
    std::function<void(const MissionCommand&, std::span<const double>, TrajectoryRow&)>
        fill_row;
};

ModelAdapter make_planar_adapter(const ScenarioConfig& cfg, const PlanarRotorSet& units,
                                 const VehicleParams& params) {
    ModelAdapter a;
    a.state_size = State2D::kSize;
    State2D s0;
    s0.Z = cfg.plan.initial_altitude;
    const auto arr = s0.to_array();
    a.state.assign(arr.begin(), arr.end());
    a.n_logged = 4;
    a.has_y = false;

    // Guards: one per unit station plus the hull centroid; Z is component 1.
    for (std::size_t g = 0; g < units.units.size(); ++g) {
        EventSpec e;
        const double station = units.units[g].station;
        e.guard = [station](double, std::span<const double> y) { return y[1] - station; };
        e.direction = GuardDirection::any;
        e.tag = static_cast<int>(g);
        a.events.push_back(std::move(e));
    }
    EventSpec hull;
    hull.guard = [](double, std::span<const double> y) { return y[1]; };
    hull.direction = GuardDirection::any;
    hull.tag = static_cast<int>(units.units.size());
    a.events.push_back(std::move(hull));

    a.view = [](std::span<const double> y) {
        return PlanarView{y[1], y[3], y[4], y[5]};
    };
    const PlanarSampling sampling = cfg.sampling;
    a.deriv = [&units, &params, sampling](const MissionCommand& cmd, double,
                                          std::span<const double> y,
                                          std::span<double> dy) {
        const State2D s = State2D::from_array(y);
        const State2D d = state_derivative_2d(s, cmd.omega, units, params, sampling);
        const auto da = d.to_array();
        std::copy(da.begin(), da.end(), dy.begin());
    };
    a.fill_row = [&units, &params](const MissionCommand& cmd, std::span<const double> y,
                                   TrajectoryRow& row) {
        const State2D s = State2D::from_array(y);
        row.X = s.X;
        row.Z = s.Z;
        row.theta_deg = s.theta * kRadToDeg;
        row.theta_dot = s.theta_rate;
        row.omega.assign(cmd.omega.begin(), cmd.omega.end());
        row.rho.clear();
        for (const PlanarUnit& u : units.units)
            row.rho.push_back(density_at(s.Z, u.station, params).rho);
    };
    return a;
}

ModelAdapter make_full_adapter(const ScenarioConfig& cfg, const RotorGeometry& geom,
                               const PlanarRotorSet& units, const VehicleParams& params) {
    ModelAdapter a;
    a.state_size = State3D::kSize;
    State3D s0;
    s0.position.z = cfg.plan.initial_altitude;
    const auto arr = s0.to_array();
    a.state.assign(arr.begin(), arr.end());
    a.n_logged = 8;
    a.has_y = true;

    // Guards per rotor station plus the hull; Z is component 2.
    for (std::size_t i = 0; i < geom.rotors.size(); ++i) {
        EventSpec e;
        const double station = geom.rotors[i].station;
        e.guard = [station](double, std::span<const double> y) { return y[2] - station; };
        e.direction = GuardDirection::any;
        e.tag = static_cast<int>(i);
        a.events.push_back(std::move(e));
    }
    EventSpec hull;
    hull.guard = [](double, std::span<const double> y) { return y[2]; };
    hull.direction = GuardDirection::any;
    hull.tag = static_cast<int>(geom.rotors.size());
    a.events.push_back(std::move(hull));

    a.view = [](std::span<const double> y) {
        return PlanarView{y[2], y[5], y[7], y[10]};
    };
    a.deriv = [&units, &geom, &params](const MissionCommand& cmd, double,
                                       std::span<const double> y, std::span<double> dy) {
        const State3D s = State3D::from_array(y);
        const std::vector<double> omegas = units.expand(cmd.omega);
        const State3D d = state_derivative_3d(s, omegas, geom, params);
        const auto da = d.to_array();
        std::copy(da.begin(), da.end(), dy.begin());
    };
    a.fill_row = [&units, &geom, &params](const MissionCommand& cmd,
                                          std::span<const double> y, TrajectoryRow& row) {
        const State3D s = State3D::from_array(y);
        row.X = s.position.x;
        row.Y = s.position.y;
        row.Z = s.position.z;
        row.theta_deg = s.attitude.pitch * kRadToDeg;
        row.theta_dot = s.body_rate.y;
        row.omega = units.expand(cmd.omega);
        row.rho.clear();
        for (const Rotor& r : geom.rotors)
            row.rho.push_back(density_at(s.position.z, r.station, params).rho);
    };
    return a;
}

}  // namespace

MissionResult run_mission(const ScenarioConfig& cfg) {
    cfg.validate();
    const VehicleParams& params = cfg.vehicle;
    const RotorGeometry geom = cfg.make_geometry();
    const PlanarRotorSet units = PlanarRotorSet::from_geometry(geom);

    ModelAdapter adapter = cfg.model == ModelKind::planar
                               ? make_planar_adapter(cfg, units, params)
                               : make_full_adapter(cfg, geom, units, params);

    MissionResult out;
    out.record.n_rotors = adapter.n_logged;
    out.record.has_y = adapter.has_y;

    StageState ss;
    ss.stage = cfg.plan.mode == MissionMode::hover ? Stage::hover : Stage::descend;

    const double dt = cfg.sample_interval;
    const double time_budget = cfg.plan.mode == MissionMode::hover
                                   ? cfg.plan.hover_duration + dt
                                   : 5.0 * cfg.plan.stage_timeout + dt;
    const std::size_t max_instants =
        static_cast<std::size_t>(std::ceil(time_budget / dt)) + 2;

    MissionSummary& sum = out.summary;
    int last_stage = -1;
    bool cruise_seen = false;
    double h_carry = 0.0;

    for (std::size_t k = 0; k <= max_instants; ++k) {
        const double t = static_cast<double>(k) * dt;
        const PlanarView view = adapter.view(adapter.state);
        const MissionCommand cmd =
            mission_step(t, view, ss, cfg.plan, units, params);

        // Stage bookkeeping.
        const int stage_no = static_cast<int>(cmd.stage);
        if (stage_no != last_stage) {
            if (!sum.stages.empty()) sum.stages.back().t_exit = t;
            sum.stages.push_back({stage_no, t, t});
            if (cmd.stage == Stage::cruise) sum.depth_at_cruise_entry = view.Z;
            last_stage = stage_no;
        }

        TrajectoryRow row;
        row.t = t;
        adapter.fill_row(cmd, adapter.state, row);
        row.stage = stage_no;
        row.cut_mask = cmd.cut_mask;
        row.shortfall = cmd.shortfall;
        out.record.rows.push_back(std::move(row));

        if (cmd.cut_mask != 0)
            sum.compensation.push_back(
                {t, cmd.thrust_commanded, cmd.thrust_delivered, cmd.shortfall});
        if (cmd.stage == Stage::cruise) {
            const double deg = view.theta * kRadToDeg;
            if (!cruise_seen) {
                cruise_seen = true;
                sum.cruise_pitch_min_deg = deg;
                sum.cruise_pitch_max_deg = deg;
            } else {
                sum.cruise_pitch_min_deg = std::min(sum.cruise_pitch_min_deg, deg);
                sum.cruise_pitch_max_deg = std::max(sum.cruise_pitch_max_deg, deg);
            }
        }

        if (ss.aborted) {
            sum.abort_reason = ss.abort_reason;
            sum.final_time = t;
            break;
        }
        if (cmd.stage == Stage::done) {
            sum.completed = true;
            sum.final_time = t;
            break;
        }
        if (k == max_instants) {
            sum.abort_reason = "mission exceeded its overall time budget";
            sum.final_time = t;
            break;
        }

        // Integrate the held command across one control interval.
        auto f = [&](double tt, std::span<const double> y, std::span<double> dy) {
            adapter.deriv(cmd, tt, y, dy);
        };
        Trajectory seg;
        if (cfg.stepper == StepperKind::rk45) {
            seg = integrate(f, t, adapter.state, t + dt, cfg.integrator,
                            adapter.events, {}, h_carry);
            h_carry = seg.h_last;
        } else {
            seg = integrate_rk4(f, t, adapter.state, t + dt, cfg.rk4_step,
                                adapter.events, {}, cfg.integrator.event_tol);
        }
        adapter.state = seg.final_state;
        sum.steps_accepted += seg.steps_accepted;
        sum.steps_rejected += seg.steps_rejected;
        sum.deriv_evals += seg.deriv_evals;

        const int hull_tag = adapter.n_logged == 4 ? 4 : 8;
        for (const EventRecord& ev : seg.events) {
            if (ev.tag == hull_tag) continue;  // step alignment only
            sum.crossings.push_back({ev.t, ev.tag + 1, ev.rising});
            TransitWindow& w = ev.rising ? sum.ascent_transit : sum.descent_transit;
            if (!w.valid) {
                w.valid = true;
                w.t_first = ev.t;
                w.t_last = ev.t;
            } else {
                w.t_first = std::min(w.t_first, ev.t);
                w.t_last = std::max(w.t_last, ev.t);
            }
            w.count += 1;
        }
    }

    if (!sum.stages.empty()) sum.stages.back().t_exit = sum.final_time;
    return out;
}

std::string summarize(const MissionResult& result) {
    const MissionSummary& s = result.summary;
    std::ostringstream out;
    out << (s.completed ? "mission completed" : "mission aborted");
    if (!s.abort_reason.empty()) out << " (" << s.abort_reason << ")";
    out << " at t=" << format_double(s.final_time) << " s\n";
    out << "stages:\n";
    for (const StageSpan& sp : s.stages) {
        out << "  " << sp.stage << " " << stage_name(static_cast<Stage>(sp.stage))
            << ": " << format_double(sp.t_entry) << " -> " << format_double(sp.t_exit)
            << " s\n";
    }
    auto transit = [&](const char* name, const TransitWindow& w) {
        if (w.valid)
            out << name << " transit: " << w.count << " crossings over "
                << format_double(w.duration()) << " s (" << format_double(w.t_first)
                << " -> " << format_double(w.t_last) << ")\n";
        else
            out << name << " transit: none\n";
    };
    transit("descent", s.descent_transit);
    transit("ascent", s.ascent_transit);
    if (s.cruise_pitch_max_deg != 0.0 || s.cruise_pitch_min_deg != 0.0)
        out << "cruise pitch: [" << format_double(s.cruise_pitch_min_deg) << ", "
            << format_double(s.cruise_pitch_max_deg) << "] deg, entry depth Z="
            << format_double(s.depth_at_cruise_entry) << " m\n";
    out << "integrator: " << s.steps_accepted << " steps accepted, "
        << s.steps_rejected << " rejected, " << s.deriv_evals << " derivative evals\n";
    return out.str();
}

}  // namespace amphibsim
