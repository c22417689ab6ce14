#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "amphibsim/controller.hpp"
#include "amphibsim/dynamics.hpp"
#include "amphibsim/errors.hpp"
#include "amphibsim/vehicle.hpp"

using namespace amphibsim;

namespace {

PlanarRotorSet standard_units() {
    return PlanarRotorSet::from_geometry(RotorGeometry::standard(0.05));
}

std::vector<double> unit_stations(const PlanarRotorSet& set) {
    return {set.units[0].station, set.units[1].station, set.units[2].station,
            set.units[3].station};
}

}  // namespace

TEST_CASE("pd command value") {
    const PDGains gains{1.50, -1.70};
    const double theta_ref = 70.0 * 3.14159265358979323846 / 180.0;
    CHECK(pd_pitch_command(theta_ref, 0.5, 0.3, gains) ==
          doctest::Approx(0.5725957145940459).epsilon(1e-15));
    // The negative derivative gain opposes the rate.
    CHECK(pd_pitch_command(0.0, 0.0, 1.0, gains) == -1.7);
    CHECK(pd_pitch_command(1.0, 0.0, 0.0, gains) == 1.5);
}

TEST_CASE("throttle maps onto the local speed ceiling") {
    const VehicleParams p;
    MediumSample air;
    air.rho = p.rho_air;
    air.g_eff = p.g_air;
    air.in_air = true;
    MediumSample water;
    water.rho = p.rho_water;
    water.g_eff = p.g_water;
    water.in_air = false;
    CHECK(throttle_to_omega(0.35, water, p) == 8.1375);
    CHECK(throttle_to_omega(0.35, air, p) == doctest::Approx(270.585).epsilon(1e-15));
    CHECK(throttle_to_omega(0.0, air, p) == 0.0);
    CHECK(throttle_to_omega(1.0, water, p) == 23.25);
    CHECK_THROWS_AS(throttle_to_omega(-0.01, air, p), ValidationError);
    CHECK_THROWS_AS(throttle_to_omega(1.01, water, p), ValidationError);
}

TEST_CASE("interface cut is strict on the band edge") {
    const PlanarRotorSet set = standard_units();
    const std::vector<double> stations = unit_stations(set);
    // Exactly at the band edge: |0.0 - (+-0.05)| == band, not cut.
    CHECK(interface_cut_mask(0.0, stations, 0.05) == 0u);
    // Just inside from above: upper units (stations +0.05) are cut.
    CHECK(interface_cut_mask(0.01, stations, 0.05) == 0b0101u);
    // Just inside from below: lower units (stations -0.05) are cut.
    CHECK(interface_cut_mask(-0.01, stations, 0.05) == 0b1010u);
    // Far away: nothing cut.
    CHECK(interface_cut_mask(1.0, stations, 0.05) == 0u);
    CHECK(interface_cut_mask(-1.0, stations, 0.05) == 0u);
    // Wide band: everything cut.
    CHECK(interface_cut_mask(0.0, stations, 0.2) == 0b1111u);
}

TEST_CASE("cut throttles are exactly zero") {
    const std::vector<double> throttle{0.4, 0.5, 0.6, 0.7};
    const std::vector<double> cut = interface_throttle_schedule(throttle, 0b0101u);
    CHECK(cut[0] == 0.0);
    CHECK(cut[1] == 0.5);
    CHECK(cut[2] == 0.0);
    CHECK(cut[3] == 0.7);
}

TEST_CASE("compensation restores commanded thrust with a root-two rescale") {
    const VehicleParams p;
    const std::vector<double> throttle(4, 0.2);
    const std::vector<double> rho(4, p.rho_air);
    const std::vector<double> omega_max(4, p.omega_max_air);
    const std::vector<int> mult(4, 2);
    // Commanded: all eight rotors at throttle 0.2.
    const double unit_w = 0.2 * p.omega_max_air;
    const double commanded = 8.0 * p.K_T * p.rho_air * unit_w * unit_w;

    const CompensationResult r =
        thrust_compensation(throttle, 0b0101u, commanded, rho, omega_max, mult, p);
    CHECK(r.any_cut);
    CHECK_FALSE(r.clamped);
    CHECK_FALSE(r.all_cut);
    const double root2 = 1.4142135623730951;
    CHECK(r.throttle[0] == 0.0);
    CHECK(r.throttle[2] == 0.0);
    CHECK(r.throttle[1] == doctest::Approx(0.2 * root2).epsilon(1e-15));
    CHECK(r.throttle[3] == doctest::Approx(0.2 * root2).epsilon(1e-15));
    // Conservation: the surviving units deliver the commanded total.
    CHECK(r.thrust_delivered == doctest::Approx(commanded).epsilon(1e-12));
    CHECK(r.thrust_commanded == doctest::Approx(commanded).epsilon(1e-12));
}

TEST_CASE("compensation clamps at full throttle and reports the shortfall") {
    const VehicleParams p;
    const std::vector<double> throttle(4, 0.9);
    const std::vector<double> rho(4, p.rho_air);
    const std::vector<double> omega_max(4, p.omega_max_air);
    const std::vector<int> mult(4, 2);
    const double unit_w = 0.9 * p.omega_max_air;
    const double commanded = 8.0 * p.K_T * p.rho_air * unit_w * unit_w;
    const CompensationResult r =
        thrust_compensation(throttle, 0b0101u, commanded, rho, omega_max, mult, p);
    CHECK(r.clamped);
    CHECK(r.throttle[1] == 1.0);
    CHECK(r.throttle[3] == 1.0);
    CHECK(r.thrust_delivered < commanded);
}

TEST_CASE("compensation with every unit cut reports ballistic flight") {
    const VehicleParams p;
    const std::vector<double> throttle(4, 0.5);
    const std::vector<double> rho(4, p.rho_water);
    const std::vector<double> omega_max(4, p.omega_max_water);
    const std::vector<int> mult(4, 2);
    const CompensationResult r =
        thrust_compensation(throttle, 0b1111u, 10.0, rho, omega_max, mult, p);
    CHECK(r.all_cut);
    CHECK(r.thrust_delivered == 0.0);
    for (double u : r.throttle) CHECK(u == 0.0);
}

TEST_CASE("first descend command balances the commanded sink rate") {
    const VehicleParams p;
    const PlanarRotorSet units = standard_units();
    const MissionPlan plan;
    StageState ss;
    ss.stage = Stage::descend;
    PlanarView view;
    view.Z = 1.0;
    const MissionCommand cmd = mission_step(0.0, view, ss, plan, units, p);
    CHECK(cmd.stage == Stage::descend);
    CHECK_FALSE(ss.aborted);
    CHECK(cmd.cut_mask == 0u);
    // u0 = sqrt(m (g + K_v (vz_ref - vz)) / capacity); all four equal at
    // zero pitch error.
    for (double w : cmd.omega)
        CHECK(w == doctest::Approx(355.75423003819657).epsilon(1e-12));
    // Mean throttle equals the collective exactly (symmetric trim).
    const double mean = (cmd.throttle[0] + cmd.throttle[1] + cmd.throttle[2] +
                         cmd.throttle[3]) / 4.0;
    CHECK(mean == doctest::Approx(cmd.collective).epsilon(1e-15));
}

TEST_CASE("hover command settles on the analytic hover speed") {
    const VehicleParams p;
    const PlanarRotorSet units = standard_units();
    MissionPlan plan;
    plan.mode = MissionMode::hover;
    StageState ss;
    ss.stage = Stage::hover;
    PlanarView view;
    view.Z = plan.initial_altitude;  // on target, at rest
    const MissionCommand cmd = mission_step(0.0, view, ss, plan, units, p);
    CHECK(cmd.stage == Stage::hover);
    for (double w : cmd.omega)
        CHECK(w == doctest::Approx(386.5307634188307).epsilon(1e-12));
}

TEST_CASE("pitch trim splits fore and aft around the collective") {
    const VehicleParams p;
    const PlanarRotorSet units = standard_units();
    MissionPlan plan;
    StageState ss;
    ss.stage = Stage::rotate_to_cruise;
    ss.entry_time = 0.0;
    PlanarView view;
    view.Z = -plan.target_depth;
    view.theta = plan.cruise_pitch - 0.05;  // small error, trim stays linear
    const MissionCommand cmd = mission_step(0.0, view, ss, plan, units, p);
    CHECK(cmd.stage == Stage::rotate_to_cruise);
    CHECK(cmd.theta_ref == doctest::Approx(plan.cruise_pitch).epsilon(1e-15));
    CHECK_FALSE(cmd.mix_saturated);
    // Positive pitch torque demand: front units throttle down, rear up.
    CHECK(cmd.throttle[0] < cmd.throttle[2]);
    CHECK(cmd.throttle[1] < cmd.throttle[3]);
    const double mean = (cmd.throttle[0] + cmd.throttle[1] + cmd.throttle[2] +
                         cmd.throttle[3]) / 4.0;
    CHECK(mean == doctest::Approx(cmd.collective).epsilon(1e-12));
}

TEST_CASE("cruise stage pins the collective to the plan throttle") {
    const VehicleParams p;
    const PlanarRotorSet units = standard_units();
    MissionPlan plan;
    StageState ss;
    ss.stage = Stage::cruise;
    ss.entry_time = 0.0;
    PlanarView view;
    view.Z = -plan.target_depth;
    view.theta = plan.cruise_pitch;  // tracking perfectly
    const MissionCommand cmd = mission_step(0.5, view, ss, plan, units, p);
    CHECK(cmd.stage == Stage::cruise);
    CHECK(cmd.collective == 0.35);
    for (double u : cmd.throttle) CHECK(u == doctest::Approx(0.35).epsilon(1e-12));
    // Underwater: speeds map against the water ceiling.
    for (double w : cmd.omega) CHECK(w == doctest::Approx(8.1375).epsilon(1e-12));
}

TEST_CASE("units inside the interface band are silenced") {
    const VehicleParams p;
    const PlanarRotorSet units = standard_units();
    MissionPlan plan;
    StageState ss;
    ss.stage = Stage::descend;
    PlanarView view;
    view.Z = -0.01;
    view.vz = -0.4;
    const MissionCommand cmd = mission_step(0.0, view, ss, plan, units, p);
    CHECK(cmd.cut_mask == 0b1010u);  // lower stations inside the band
    CHECK(cmd.omega[1] == 0.0);
    CHECK(cmd.omega[3] == 0.0);
    CHECK(cmd.throttle[1] == 0.0);
    CHECK(cmd.throttle[3] == 0.0);
    CHECK(cmd.omega[0] > 0.0);
    CHECK(cmd.omega[2] > 0.0);
    CHECK(cmd.thrust_delivered ==
          doctest::Approx(cmd.thrust_commanded).epsilon(1e-9));
}

TEST_CASE("stage machine advances on depth, settle and dwell") {
    const VehicleParams p;
    const PlanarRotorSet units = standard_units();
    MissionPlan plan;
    StageState ss;
    ss.stage = Stage::descend;
    PlanarView view;

    // Reaching target depth hands over to the rotation stage.
    view.Z = -plan.target_depth - 0.001;
    mission_step(5.0, view, ss, plan, units, p);
    CHECK(ss.stage == Stage::rotate_to_cruise);
    CHECK(ss.entry_time == 5.0);

    // Pitch inside the settle band starts the dwell clock...
    view.theta = plan.cruise_pitch - 0.01;
    mission_step(6.0, view, ss, plan, units, p);
    CHECK(ss.stage == Stage::rotate_to_cruise);
    // ... and advances after settle_dwell.
    mission_step(6.0 + plan.settle_dwell, view, ss, plan, units, p);
    CHECK(ss.stage == Stage::cruise);

    // Cruise runs for cruise_duration, capturing the handoff depth.
    view.Z = -1.4;
    mission_step(6.5 + plan.cruise_duration, view, ss, plan, units, p);
    CHECK(ss.stage == Stage::rotate_to_vertical);
    CHECK(ss.hold_depth == -1.4);

    // Level out, then ascend.
    view.theta = 0.001;
    mission_step(12.0, view, ss, plan, units, p);
    mission_step(12.0 + plan.settle_dwell, view, ss, plan, units, p);
    CHECK(ss.stage == Stage::ascend);

    // Done once clear of the water with every unit aloft.
    view.Z = plan.exit_clearance + 0.2;
    const MissionCommand done = mission_step(14.0, view, ss, plan, units, p);
    CHECK(ss.stage == Stage::done);
    CHECK(done.stage == Stage::done);
    for (double w : done.omega) CHECK(w == 0.0);
}

TEST_CASE("a stalled stage aborts on its timeout") {
    const VehicleParams p;
    const PlanarRotorSet units = standard_units();
    MissionPlan plan;
    plan.stage_timeout = 1.0;
    StageState ss;
    ss.stage = Stage::descend;
    ss.entry_time = 0.0;
    PlanarView view;
    view.Z = 1.0;  // never reaches depth
    mission_step(0.5, view, ss, plan, units, p);
    CHECK_FALSE(ss.aborted);
    mission_step(1.5, view, ss, plan, units, p);
    CHECK(ss.aborted);
    CHECK_FALSE(ss.abort_reason.empty());
}

TEST_CASE("gain selection switch") {
    MissionPlan plan;
    plan.single_gain_set = true;
    CHECK_NOTHROW(plan.validate());
    MissionPlan bad;
    bad.cruise_throttle = 1.5;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    MissionPlan bad2;
    bad2.interface_band = -0.1;
    CHECK_THROWS_AS(bad2.validate(), ValidationError);
}
