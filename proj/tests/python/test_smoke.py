"""End-to-end smoke of the Python bindings."""

import math

import pytest

import amphibsim as am


def test_rotor_thrust_ceilings():
    p = am.VehicleParams()
    assert am.rotor_thrust(773.1, 1.225, p) == pytest.approx(9.81097645815, rel=1e-12)
    assert am.rotor_thrust(23.25, 999.97, p) == pytest.approx(7.243320193875, rel=1e-12)
    with pytest.raises(am.ValidationError):
        am.rotor_thrust(-1.0, 1.225, p)


def test_medium_switch():
    p = am.VehicleParams()
    above = am.density_at(0.5, 0.0, p)
    below = am.density_at(-0.5, 0.0, p)
    assert above.in_air and above.rho == 1.225 and above.g_eff == 9.81
    assert not below.in_air and below.rho == 999.97 and below.g_eff == 0.35
    assert am.heaviside(0.0) == 1.0


def test_rotation_round_trip():
    e = am.EulerAngles(yaw=0.3, pitch=-0.4, roll=0.2)
    v = am.Vec3(1.0, -2.0, 3.0)
    back = am.body_to_inertial(am.inertial_to_body(v, e), e)
    assert back.x == pytest.approx(v.x, abs=1e-12)
    assert back.y == pytest.approx(v.y, abs=1e-12)
    assert back.z == pytest.approx(v.z, abs=1e-12)


def test_integrate_with_event():
    traj = am.integrate(
        lambda t, y: [-y[0]],
        0.0,
        [1.0],
        1.0,
        events=[(lambda t, y: y[0] - 0.5, "falling", 9)],
    )
    assert traj.final_state[0] == pytest.approx(math.exp(-1.0), abs=1e-7)
    assert len(traj.events) == 1
    assert traj.events[0].tag == 9
    assert traj.events[0].t == pytest.approx(math.log(2.0), abs=1e-6)


def test_config_parsing_and_errors():
    cfg = am.parse_config("[mission]\ntarget_depth = 2.0\n")
    assert cfg.plan.target_depth == 2.0
    with pytest.raises(am.ConfigError):
        am.parse_config("[vehicle]\nbogus = 1\n")
    am.apply_key(cfg, "vehicle.m", "2.5")
    assert cfg.vehicle.m == 2.5


def test_mission_runs_to_completion(tmp_path):
    cfg = am.ScenarioConfig()
    res = am.run_mission(cfg)
    assert res.summary.completed
    stages = [s.stage for s in res.summary.stages]
    assert stages == [1, 2, 3, 4, 5, 6]
    assert res.summary.descent_transit.count == 4
    assert res.summary.ascent_transit.count == 4
    assert abs(res.summary.depth_at_cruise_entry + cfg.plan.target_depth) < 0.05
    assert "completed" in am.summarize(res)

    out = tmp_path / "traj.csv"
    am.write_csv_file(res.record, str(out))
    back = am.read_csv_file(str(out))
    assert len(back.rows) == len(res.record.rows)
    assert back.rows[-1].Z == res.record.rows[-1].Z


def test_validation_suite_names():
    cfg = am.ScenarioConfig()
    results = am.run_validation(cfg, "medium_ratio")
    assert len(results) == 1
    assert results[0].name == "medium_ratio"
    assert results[0].passed
    with pytest.raises(am.ConfigError):
        am.run_validation(cfg, "nonsense")
