"""Amphibious octorotor simulator: dynamics, mission control and validation."""

from ._core import (
    CheckResult,
    CompensationAudit,
    ConfigError,
    CrossingEvent,
    EulerAngles,
    EventRecord,
    IntegrationError,
    IntegratorConfig,
    MediumSample,
    MissionMode,
    MissionPlan,
    MissionResult,
    MissionSummary,
    ModelKind,
    PDGains,
    PlanarRotorSet,
    PlanarSampling,
    PlanarUnit,
    Rotor,
    RotorGeometry,
    ScenarioConfig,
    Stage,
    StageSpan,
    State2D,
    State3D,
    StepperKind,
    Trajectory,
    TrajectoryRecord,
    TrajectoryRow,
    TransitWindow,
    ValidationError,
    Vec3,
    VehicleParams,
    angle_of_attack,
    apply_key,
    body_to_inertial,
    coaxial_thrust_coefficient,
    control_torque,
    density_at,
    drag_force,
    gyroscopic_torque,
    heaviside,
    hover_speed,
    inertial_to_body,
    integrate,
    load_config,
    locate_event,
    parse_config,
    read_csv_file,
    reduce_3d_to_2d,
    rotation_matrix,
    rotor_reaction_torque,
    rotor_thrust,
    run_mission,
    run_validation,
    state_derivative_2d,
    state_derivative_3d,
    summarize,
    thrust_coefficient,
    total_thrust,
    write_csv_file,
    write_jsonl_file,
    write_plot_data,
)

__version__ = "0.1.0"

__all__ = [
    "CheckResult",
    "CompensationAudit",
    "ConfigError",
    "CrossingEvent",
    "EulerAngles",
    "EventRecord",
    "IntegrationError",
    "IntegratorConfig",
    "MediumSample",
    "MissionMode",
    "MissionPlan",
    "MissionResult",
    "MissionSummary",
    "ModelKind",
    "PDGains",
    "PlanarRotorSet",
    "PlanarSampling",
    "PlanarUnit",
    "Rotor",
    "RotorGeometry",
    "ScenarioConfig",
    "Stage",
    "StageSpan",
    "State2D",
    "State3D",
    "StepperKind",
    "Trajectory",
    "TrajectoryRecord",
    "TrajectoryRow",
    "TransitWindow",
    "ValidationError",
    "Vec3",
    "VehicleParams",
    "angle_of_attack",
    "apply_key",
    "body_to_inertial",
    "coaxial_thrust_coefficient",
    "control_torque",
    "density_at",
    "drag_force",
    "gyroscopic_torque",
    "heaviside",
    "hover_speed",
    "inertial_to_body",
    "integrate",
    "load_config",
    "locate_event",
    "parse_config",
    "read_csv_file",
    "reduce_3d_to_2d",
    "rotation_matrix",
    "rotor_reaction_torque",
    "rotor_thrust",
    "run_mission",
    "run_validation",
    "state_derivative_2d",
    "state_derivative_3d",
    "summarize",
    "thrust_coefficient",
    "total_thrust",
    "write_csv_file",
    "write_jsonl_file",
    "write_plot_data",
]
