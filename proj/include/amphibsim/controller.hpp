#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "amphibsim/dynamics.hpp"
#include "amphibsim/vehicle.hpp"

namespace amphibsim {

// Pitch PD gains.  The derivative gain multiplies the pitch rate directly
// (tau = K_P (theta_ref - theta) + K_D theta_rate), so damping gains are
// negative.
struct PDGains {
    double K_P = 1.50;
    double K_D = -1.70;
};

enum class MissionMode { five_stage, hover };

// Mission shape and controller tuning.  Angles are radians internally; the
// config layer converts from degrees.
struct MissionPlan {
    MissionMode mode = MissionMode::five_stage;

    double initial_altitude = 1.0;   // start height above the surface [m]
    double target_depth = 1.35;      // cruise depth below the surface [m]
    double cruise_pitch = 70.0 * 3.14159265358979323846 / 180.0;  // [rad]
    double cruise_throttle = 0.35;   // commanded collective in stage 3 [-]
    double descent_rate = 0.5;       // vertical speed setpoint magnitude [m/s]
    double cruise_duration = 4.0;    // stage-3 dwell [s]
    double interface_band = 0.05;    // rotor cut half-width around the surface [m]
    double exit_clearance = 0.25;    // stage-5 completion height [m]
    double stage_timeout = 30.0;     // per-stage abort limit [s]
    double settle_band = 2.0 * 3.14159265358979323846 / 180.0;  // [rad]
    double settle_dwell = 0.5;       // time inside the band to advance [s]
    double hover_duration = 10.0;    // hover-mode plan length [s]

    double climb_rate_gain = 3.0;    // vertical-rate loop, (m/s err) -> m/s^2
    double depth_gain = 1.5;         // depth-hold loop, m -> m/s setpoint

    PDGains rotate_gains{1.50, -1.70};  // rotation into cruise attitude + hold
    PDGains level_gains{1.00, -0.84};   // rotation back to vertical + hold
    bool single_gain_set = false;       // reuse rotate_gains in every stage
    bool exact_allocation = false;      // quadratic fore/aft thrust split

    void validate() const;  // throws ValidationError listing violations
};

// Mission stages; the numeric values appear in the trajectory log.
enum class Stage : int {
    hover = 0,
    descend = 1,
    rotate_to_cruise = 2,
    cruise = 3,
    rotate_to_vertical = 4,
    ascend = 5,
    done = 6,
};

const char* stage_name(Stage s);

// Supervisor bookkeeping carried between control instants.
struct StageState {
    Stage stage = Stage::descend;
    double entry_time = 0.0;
    double settle_since = -1.0;  // < 0: outside the settle band
    double hold_depth = 0.0;     // Z captured entering stage 4
    bool aborted = false;
    std::string abort_reason;
};

// The controller's planar slice of either model's state.
struct PlanarView {
    double Z = 0.0;
    double vz = 0.0;
    double theta = 0.0;
    double theta_rate = 0.0;
};

// Output of one control instant, in planar-unit terms.
struct MissionCommand {
    Stage stage = Stage::descend;
    std::array<double, 4> throttle{};
    std::array<double, 4> omega{};
    unsigned cut_mask = 0;        // bit g set: unit g silenced near the surface
    bool shortfall = false;       // compensation hit the throttle ceiling
    bool ballistic = false;       // every unit cut; vehicle coasts
    bool mix_saturated = false;   // pitch trim clipped at [0, 1]
    double theta_ref = 0.0;
    double collective = 0.0;      // base throttle before trim [-]
    double thrust_commanded = 0.0;  // total thrust before the cut [N]
    double thrust_delivered = 0.0;  // total thrust after compensation [N]
};

// tau = K_P (theta_ref - theta) + K_D theta_rate  [N m]
double pd_pitch_command(double theta_ref, double theta, double theta_rate,
                        const PDGains& gains);

// Maps throttle in [0, 1] onto rotor speed against the local medium's speed
// ceiling.  Out-of-range throttle raises ValidationError.
double throttle_to_omega(double throttle, const MediumSample& medium,
                         const VehicleParams& p);

// Bitmask of units whose station sits strictly inside the interface band:
// |Z - station_g| < band.
unsigned interface_cut_mask(double Z, std::span<const double> stations, double band);

// Applies the interface cut: throttles of masked units are forced to exactly
// zero, others pass through.
std::vector<double> interface_throttle_schedule(std::span<const double> throttle,
                                                unsigned cut_mask);

struct CompensationResult {
    std::vector<double> throttle;
    bool any_cut = false;
    bool clamped = false;          // rescale hit throttle 1; thrust shortfall
    bool all_cut = false;          // nothing left to rescale
    double thrust_commanded = 0.0;
    double thrust_delivered = 0.0;
};

// Rescales the surviving units' speeds so total thrust returns to
// commanded_total_thrust, clamping at full throttle.  Unit thrust model:
// mult * K_T * rho * (throttle * omega_max)^2.
CompensationResult thrust_compensation(std::span<const double> throttle,
                                       unsigned cut_mask, double commanded_total_thrust,
                                       std::span<const double> rho,
                                       std::span<const double> omega_max,
                                       std::span<const int> mult,
                                       const VehicleParams& p);

// One zero-order-hold control instant: advances the stage machine on the
// sampled state, then issues the planar unit commands held until the next
// instant.  Sets state.aborted on a stage timeout instead of throwing.
MissionCommand mission_step(double t, const PlanarView& view, StageState& state,
                            const MissionPlan& plan, const PlanarRotorSet& units,
                            const VehicleParams& params);

}  // namespace amphibsim
