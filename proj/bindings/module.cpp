// Python bindings for the simulator core.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>
#include <vector>

#include "amphibsim/config.hpp"
#include "amphibsim/controller.hpp"
#include "amphibsim/dynamics.hpp"
#include "amphibsim/errors.hpp"
#include "amphibsim/geom.hpp"
#include "amphibsim/integrator.hpp"
#include "amphibsim/mission.hpp"
#include "amphibsim/trajectory.hpp"
#include "amphibsim/validation.hpp"
#include "amphibsim/vehicle.hpp"

namespace py = pybind11;
using namespace amphibsim;

namespace {

std::array<double, 4> to_array4(const std::vector<double>& v, const char* what) {
    if (v.size() != 4)
        throw ValidationError(std::string(what) + ": expected 4 values, got " +
                              std::to_string(v.size()));
    return {v[0], v[1], v[2], v[3]};
}

std::vector<std::vector<double>> mat_to_rows(const Mat3& m) {
    return {{m(0, 0), m(0, 1), m(0, 2)},
            {m(1, 0), m(1, 1), m(1, 2)},
            {m(2, 0), m(2, 1), m(2, 2)}};
}

GuardDirection parse_direction(const std::string& s) {
    if (s == "rising") return GuardDirection::rising;
    if (s == "falling") return GuardDirection::falling;
    if (s == "any") return GuardDirection::any;
    throw ValidationError("event direction must be rising, falling or any");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Amphibious octorotor simulation core";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

    py::class_<Vec3>(m, "Vec3")
        .def(py::init<>())
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
        .def_readwrite("x", &Vec3::x)
        .def_readwrite("y", &Vec3::y)
        .def_readwrite("z", &Vec3::z)
        .def("dot", &Vec3::dot)
        .def("cross", &Vec3::cross)
        .def("norm", &Vec3::norm)
        .def("__repr__", [](const Vec3& v) {
            return "Vec3(" + format_double(v.x) + ", " + format_double(v.y) + ", " +
                   format_double(v.z) + ")";
        });

    py::class_<EulerAngles>(m, "EulerAngles")
        .def(py::init<>())
        .def(py::init<double, double, double>(), py::arg("yaw"), py::arg("pitch"),
             py::arg("roll"))
        .def_readwrite("yaw", &EulerAngles::yaw)
        .def_readwrite("pitch", &EulerAngles::pitch)
        .def_readwrite("roll", &EulerAngles::roll);

    m.def("rotation_matrix",
          [](const EulerAngles& e) { return mat_to_rows(rotation_matrix(e)); },
          py::arg("angles"), "Inertial-to-body direction cosine matrix as nested lists");
    m.def("body_to_inertial", &body_to_inertial, py::arg("v_body"), py::arg("angles"));
    m.def("inertial_to_body", &inertial_to_body, py::arg("v_inertial"), py::arg("angles"));

    py::class_<VehicleParams>(m, "VehicleParams")
        .def(py::init<>())
        .def_readwrite("m", &VehicleParams::m)
        .def_readwrite("I_xx", &VehicleParams::I_xx)
        .def_readwrite("I_yy", &VehicleParams::I_yy)
        .def_readwrite("I_zz", &VehicleParams::I_zz)
        .def_readwrite("K_T", &VehicleParams::K_T)
        .def_readwrite("K_Q", &VehicleParams::K_Q)
        .def_readwrite("d", &VehicleParams::d)
        .def_readwrite("C_d", &VehicleParams::C_d)
        .def_readwrite("A_ref", &VehicleParams::A_ref)
        .def_readwrite("rho_air", &VehicleParams::rho_air)
        .def_readwrite("rho_water", &VehicleParams::rho_water)
        .def_readwrite("g_air", &VehicleParams::g_air)
        .def_readwrite("g_water", &VehicleParams::g_water)
        .def_readwrite("omega_max_air", &VehicleParams::omega_max_air)
        .def_readwrite("omega_max_water", &VehicleParams::omega_max_water)
        .def_readwrite("I_r", &VehicleParams::I_r)
        .def("validate", &VehicleParams::validate);

    py::class_<Rotor>(m, "Rotor")
        .def_readwrite("azimuth", &Rotor::azimuth)
        .def_readwrite("spin", &Rotor::spin)
        .def_readwrite("station", &Rotor::station)
        .def_readwrite("arm", &Rotor::arm);

    py::class_<RotorGeometry>(m, "RotorGeometry")
        .def(py::init<>())
        .def_static("standard", &RotorGeometry::standard, py::arg("arm_station") = 0.05)
        .def_readwrite("rotors", &RotorGeometry::rotors)
        .def("validate", &RotorGeometry::validate);

    py::class_<MediumSample>(m, "MediumSample")
        .def_readonly("rho", &MediumSample::rho)
        .def_readonly("g_eff", &MediumSample::g_eff)
        .def_readonly("in_air", &MediumSample::in_air);

    m.def("heaviside", &heaviside, py::arg("x"));
    m.def("density_at", &density_at, py::arg("Z"), py::arg("h"), py::arg("params"));
    m.def("rotor_thrust", &rotor_thrust, py::arg("omega"), py::arg("rho"),
          py::arg("params"));
    m.def("rotor_reaction_torque", &rotor_reaction_torque, py::arg("omega"),
          py::arg("rho"), py::arg("spin"), py::arg("params"));
    m.def("thrust_coefficient", &thrust_coefficient, py::arg("thrust"), py::arg("rho"),
          py::arg("omega"), py::arg("disk_area"), py::arg("blade_radius"));
    m.def("coaxial_thrust_coefficient", &coaxial_thrust_coefficient,
          py::arg("thrust_upper"), py::arg("thrust_lower"), py::arg("rho"),
          py::arg("omega"), py::arg("disk_area"), py::arg("blade_radius"));
    m.def("total_thrust",
          [](const std::vector<double>& omegas, const std::vector<double>& rhos,
             const VehicleParams& p) { return total_thrust(omegas, rhos, p); },
          py::arg("omegas"), py::arg("rhos"), py::arg("params"));
    m.def("control_torque",
          [](const std::vector<double>& omegas, const std::vector<double>& rhos,
             const RotorGeometry& g, const VehicleParams& p) {
              return control_torque(omegas, rhos, g, p);
          },
          py::arg("omegas"), py::arg("rhos"), py::arg("geometry"), py::arg("params"));
    m.def("gyroscopic_torque",
          [](const Vec3& body_rate, const std::vector<double>& omegas,
             const RotorGeometry& g, const VehicleParams& p) {
              return gyroscopic_torque(body_rate, omegas, g, p);
          },
          py::arg("body_rate"), py::arg("omegas"), py::arg("geometry"), py::arg("params"));
    m.def("drag_force", &drag_force, py::arg("velocity"), py::arg("rho"), py::arg("params"));
    m.def("hover_speed", &hover_speed, py::arg("params"), py::arg("rho"), py::arg("g"),
          py::arg("n_rotors") = 8);

    py::class_<State2D>(m, "State2D")
        .def(py::init<>())
        .def_readwrite("X", &State2D::X)
        .def_readwrite("Z", &State2D::Z)
        .def_readwrite("vx", &State2D::vx)
        .def_readwrite("vz", &State2D::vz)
        .def_readwrite("theta", &State2D::theta)
        .def_readwrite("theta_rate", &State2D::theta_rate)
        .def("to_array", [](const State2D& s) {
            const auto a = s.to_array();
            return std::vector<double>(a.begin(), a.end());
        })
        .def_static("from_array", [](const std::vector<double>& a) {
            return State2D::from_array(a);
        });

    py::class_<State3D>(m, "State3D")
        .def(py::init<>())
        .def_readwrite("position", &State3D::position)
        .def_readwrite("velocity", &State3D::velocity)
        .def_readwrite("attitude", &State3D::attitude)
        .def_readwrite("body_rate", &State3D::body_rate)
        .def("to_array", [](const State3D& s) {
            const auto a = s.to_array();
            return std::vector<double>(a.begin(), a.end());
        })
        .def_static("from_array", [](const std::vector<double>& a) {
            return State3D::from_array(a);
        });

    py::class_<PlanarUnit>(m, "PlanarUnit")
        .def_readonly("x_factor", &PlanarUnit::x_factor)
        .def_readonly("station", &PlanarUnit::station)
        .def_readonly("mult", &PlanarUnit::mult)
        .def_readonly("members", &PlanarUnit::members);

    py::class_<PlanarRotorSet>(m, "PlanarRotorSet")
        .def_static("from_geometry", &PlanarRotorSet::from_geometry, py::arg("geometry"))
        .def_readonly("units", &PlanarRotorSet::units)
        .def("expand", [](const PlanarRotorSet& s, const std::vector<double>& w) {
            return s.expand(w);
        });

    py::enum_<PlanarSampling>(m, "PlanarSampling")
        .value("mean_station", PlanarSampling::mean_station)
        .value("per_rotor", PlanarSampling::per_rotor);

    m.def("angle_of_attack", &angle_of_attack, py::arg("vx"), py::arg("vz"));
    m.def("state_derivative_3d",
          [](const State3D& s, const std::vector<double>& omegas, const RotorGeometry& g,
             const VehicleParams& p) { return state_derivative_3d(s, omegas, g, p); },
          py::arg("state"), py::arg("omegas"), py::arg("geometry"), py::arg("params"));
    m.def("state_derivative_2d",
          [](const State2D& s, const std::vector<double>& omegas,
             const PlanarRotorSet& units, const VehicleParams& p, PlanarSampling mode) {
              return state_derivative_2d(s, omegas, units, p, mode);
          },
          py::arg("state"), py::arg("omegas"), py::arg("units"), py::arg("params"),
          py::arg("sampling") = PlanarSampling::mean_station);
    m.def("reduce_3d_to_2d", &reduce_3d_to_2d, py::arg("state"), py::arg("tol") = 1e-6);

    py::class_<IntegratorConfig>(m, "IntegratorConfig")
        .def(py::init<>())
        .def_readwrite("rel_tol", &IntegratorConfig::rel_tol)
        .def_readwrite("abs_tol", &IntegratorConfig::abs_tol)
        .def_readwrite("h_init", &IntegratorConfig::h_init)
        .def_readwrite("h_min", &IntegratorConfig::h_min)
        .def_readwrite("h_max", &IntegratorConfig::h_max)
        .def_readwrite("max_steps", &IntegratorConfig::max_steps)
        .def_readwrite("event_tol", &IntegratorConfig::event_tol)
        .def("validate", &IntegratorConfig::validate);

    py::class_<EventRecord>(m, "EventRecord")
        .def_readonly("t", &EventRecord::t)
        .def_readonly("tag", &EventRecord::tag)
        .def_readonly("rising", &EventRecord::rising)
        .def_readonly("state", &EventRecord::state);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("times", &Trajectory::times)
        .def_readonly("states", &Trajectory::states)
        .def_readonly("events", &Trajectory::events)
        .def_readonly("final_time", &Trajectory::final_time)
        .def_readonly("final_state", &Trajectory::final_state)
        .def_readonly("steps_accepted", &Trajectory::steps_accepted)
        .def_readonly("steps_rejected", &Trajectory::steps_rejected)
        .def_readonly("deriv_evals", &Trajectory::deriv_evals);

    using PyGuard = std::function<double(double, std::vector<double>)>;
    using PyEvent = std::tuple<PyGuard, std::string, int>;
    m.def(
        "integrate",
        [](const std::function<std::vector<double>(double, std::vector<double>)>& f,
           double t0, const std::vector<double>& y0, double t_end,
           const IntegratorConfig& cfg, const std::vector<PyEvent>& events,
           const std::vector<double>& sample_times) {
            DerivFn deriv = [&f](double t, std::span<const double> y,
                                 std::span<double> dy) {
                const std::vector<double> out =
                    f(t, std::vector<double>(y.begin(), y.end()));
                if (out.size() != dy.size())
                    throw ValidationError("integrate: derivative length mismatch");
                std::copy(out.begin(), out.end(), dy.begin());
            };
            std::vector<EventSpec> specs;
            for (const PyEvent& e : events) {
                EventSpec spec;
                const PyGuard guard = std::get<0>(e);
                spec.guard = [guard](double t, std::span<const double> y) {
                    return guard(t, std::vector<double>(y.begin(), y.end()));
                };
                spec.direction = parse_direction(std::get<1>(e));
                spec.tag = std::get<2>(e);
                specs.push_back(std::move(spec));
            }
            return integrate(deriv, t0, y0, t_end, cfg, specs, sample_times);
        },
        py::arg("f"), py::arg("t0"), py::arg("y0"), py::arg("t_end"),
        py::arg("config") = IntegratorConfig{},
        py::arg("events") = std::vector<PyEvent>{},
        py::arg("sample_times") = std::vector<double>{},
        "Adaptive integration of f(t, y) -> dy/dt; events are (guard, direction, tag)");
    m.def("locate_event", &locate_event, py::arg("guard"), py::arg("t_lo"),
          py::arg("t_hi"), py::arg("tol"));

    py::enum_<MissionMode>(m, "MissionMode")
        .value("five_stage", MissionMode::five_stage)
        .value("hover", MissionMode::hover);

    py::class_<PDGains>(m, "PDGains")
        .def(py::init<>())
        .def_readwrite("K_P", &PDGains::K_P)
        .def_readwrite("K_D", &PDGains::K_D);

    py::class_<MissionPlan>(m, "MissionPlan")
        .def(py::init<>())
        .def_readwrite("mode", &MissionPlan::mode)
        .def_readwrite("initial_altitude", &MissionPlan::initial_altitude)
        .def_readwrite("target_depth", &MissionPlan::target_depth)
        .def_readwrite("cruise_pitch", &MissionPlan::cruise_pitch)
        .def_readwrite("cruise_throttle", &MissionPlan::cruise_throttle)
        .def_readwrite("descent_rate", &MissionPlan::descent_rate)
        .def_readwrite("cruise_duration", &MissionPlan::cruise_duration)
        .def_readwrite("interface_band", &MissionPlan::interface_band)
        .def_readwrite("exit_clearance", &MissionPlan::exit_clearance)
        .def_readwrite("stage_timeout", &MissionPlan::stage_timeout)
        .def_readwrite("settle_band", &MissionPlan::settle_band)
        .def_readwrite("settle_dwell", &MissionPlan::settle_dwell)
        .def_readwrite("hover_duration", &MissionPlan::hover_duration)
        .def_readwrite("climb_rate_gain", &MissionPlan::climb_rate_gain)
        .def_readwrite("depth_gain", &MissionPlan::depth_gain)
        .def_readwrite("rotate_gains", &MissionPlan::rotate_gains)
        .def_readwrite("level_gains", &MissionPlan::level_gains)
        .def_readwrite("single_gain_set", &MissionPlan::single_gain_set)
        .def_readwrite("exact_allocation", &MissionPlan::exact_allocation)
        .def("validate", &MissionPlan::validate);

    py::enum_<ModelKind>(m, "ModelKind")
        .value("planar", ModelKind::planar)
        .value("full", ModelKind::full);

    py::enum_<StepperKind>(m, "StepperKind")
        .value("rk45", StepperKind::rk45)
        .value("rk4", StepperKind::rk4);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("vehicle", &ScenarioConfig::vehicle)
        .def_readwrite("arm_station", &ScenarioConfig::arm_station)
        .def_readwrite("integrator", &ScenarioConfig::integrator)
        .def_readwrite("stepper", &ScenarioConfig::stepper)
        .def_readwrite("rk4_step", &ScenarioConfig::rk4_step)
        .def_readwrite("plan", &ScenarioConfig::plan)
        .def_readwrite("model", &ScenarioConfig::model)
        .def_readwrite("sampling", &ScenarioConfig::sampling)
        .def_readwrite("sample_interval", &ScenarioConfig::sample_interval)
        .def_readwrite("out_dir", &ScenarioConfig::out_dir)
        .def("make_geometry", &ScenarioConfig::make_geometry)
        .def("validate", &ScenarioConfig::validate);

    m.def("parse_config", [](const std::string& text) { return parse_config(text); },
          py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("apply_key",
          [](ScenarioConfig& cfg, const std::string& key, const std::string& value) {
              apply_key(cfg, key, value);
          },
          py::arg("config"), py::arg("key"), py::arg("value"));

    py::enum_<Stage>(m, "Stage")
        .value("hover", Stage::hover)
        .value("descend", Stage::descend)
        .value("rotate_to_cruise", Stage::rotate_to_cruise)
        .value("cruise", Stage::cruise)
        .value("rotate_to_vertical", Stage::rotate_to_vertical)
        .value("ascend", Stage::ascend)
        .value("done", Stage::done);

    py::class_<TrajectoryRow>(m, "TrajectoryRow")
        .def_readonly("t", &TrajectoryRow::t)
        .def_readonly("X", &TrajectoryRow::X)
        .def_readonly("Y", &TrajectoryRow::Y)
        .def_readonly("Z", &TrajectoryRow::Z)
        .def_readonly("theta_deg", &TrajectoryRow::theta_deg)
        .def_readonly("theta_dot", &TrajectoryRow::theta_dot)
        .def_readonly("omega", &TrajectoryRow::omega)
        .def_readonly("rho", &TrajectoryRow::rho)
        .def_readonly("stage", &TrajectoryRow::stage)
        .def_readonly("cut_mask", &TrajectoryRow::cut_mask)
        .def_readonly("shortfall", &TrajectoryRow::shortfall);

    py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
        .def_readonly("n_rotors", &TrajectoryRecord::n_rotors)
        .def_readonly("has_y", &TrajectoryRecord::has_y)
        .def_readonly("rows", &TrajectoryRecord::rows)
        .def("column_names", &TrajectoryRecord::column_names);

    py::class_<CrossingEvent>(m, "CrossingEvent")
        .def_readonly("t", &CrossingEvent::t)
        .def_readonly("unit", &CrossingEvent::unit)
        .def_readonly("rising", &CrossingEvent::rising);

    py::class_<StageSpan>(m, "StageSpan")
        .def_readonly("stage", &StageSpan::stage)
        .def_readonly("t_entry", &StageSpan::t_entry)
        .def_readonly("t_exit", &StageSpan::t_exit);

    py::class_<CompensationAudit>(m, "CompensationAudit")
        .def_readonly("t", &CompensationAudit::t)
        .def_readonly("commanded", &CompensationAudit::commanded)
        .def_readonly("delivered", &CompensationAudit::delivered)
        .def_readonly("clamped", &CompensationAudit::clamped);

    py::class_<TransitWindow>(m, "TransitWindow")
        .def_readonly("valid", &TransitWindow::valid)
        .def_readonly("t_first", &TransitWindow::t_first)
        .def_readonly("t_last", &TransitWindow::t_last)
        .def_readonly("count", &TransitWindow::count)
        .def("duration", &TransitWindow::duration);

    py::class_<MissionSummary>(m, "MissionSummary")
        .def_readonly("completed", &MissionSummary::completed)
        .def_readonly("abort_reason", &MissionSummary::abort_reason)
        .def_readonly("stages", &MissionSummary::stages)
        .def_readonly("crossings", &MissionSummary::crossings)
        .def_readonly("descent_transit", &MissionSummary::descent_transit)
        .def_readonly("ascent_transit", &MissionSummary::ascent_transit)
        .def_readonly("depth_at_cruise_entry", &MissionSummary::depth_at_cruise_entry)
        .def_readonly("cruise_pitch_min_deg", &MissionSummary::cruise_pitch_min_deg)
        .def_readonly("cruise_pitch_max_deg", &MissionSummary::cruise_pitch_max_deg)
        .def_readonly("compensation", &MissionSummary::compensation)
        .def_readonly("final_time", &MissionSummary::final_time)
        .def_readonly("steps_accepted", &MissionSummary::steps_accepted)
        .def_readonly("steps_rejected", &MissionSummary::steps_rejected)
        .def_readonly("deriv_evals", &MissionSummary::deriv_evals);

    py::class_<MissionResult>(m, "MissionResult")
        .def_readonly("record", &MissionResult::record)
        .def_readonly("summary", &MissionResult::summary);

    m.def("run_mission", &run_mission, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());
    m.def("summarize", &summarize, py::arg("result"));

    m.def("write_csv_file", &write_csv_file, py::arg("record"), py::arg("path"));
    m.def("write_jsonl_file", &write_jsonl_file, py::arg("record"), py::arg("path"));
    m.def("read_csv_file", &read_csv_file, py::arg("path"));
    m.def("write_plot_data", &write_plot_data, py::arg("record"), py::arg("dir"));

    py::class_<CheckResult>(m, "CheckResult")
        .def_readonly("name", &CheckResult::name)
        .def_readonly("passed", &CheckResult::passed)
        .def_readonly("skipped", &CheckResult::skipped)
        .def_readonly("detail", &CheckResult::detail);
    m.def("run_validation", &run_validation, py::arg("config"), py::arg("suite") = "all",
          py::call_guard<py::gil_scoped_release>());
}
