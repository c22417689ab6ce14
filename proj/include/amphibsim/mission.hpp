#pragma once

#include <string>
#include <vector>

#include "amphibsim/config.hpp"
#include "amphibsim/controller.hpp"
#include "amphibsim/trajectory.hpp"

namespace amphibsim {

// One rotor (3D) or planar unit (2D) passing through the water interface.
struct CrossingEvent {
    double t = 0.0;
    int unit = 0;        // 1-based rotor/unit index
    bool rising = false; // true: water -> air
};

struct StageSpan {
    int stage = 0;
    double t_entry = 0.0;
    double t_exit = 0.0;  // == t_entry while the stage is still open
};

// Thrust bookkeeping for every control instant with at least one unit cut.
struct CompensationAudit {
    double t = 0.0;
    double commanded = 0.0;
    double delivered = 0.0;
    bool clamped = false;
};

// First-to-last rotor crossing window for one direction of transit.
struct TransitWindow {
    bool valid = false;
    double t_first = 0.0;
    double t_last = 0.0;
    int count = 0;
    double duration() const { return valid ? t_last - t_first : 0.0; }
};

struct MissionSummary {
    bool completed = false;
    std::string abort_reason;
    std::vector<StageSpan> stages;
    std::vector<CrossingEvent> crossings;
    TransitWindow descent_transit;  // falling crossings (air -> water)
    TransitWindow ascent_transit;   // rising crossings (water -> air)
    double depth_at_cruise_entry = 0.0;  // Z when stage 3 begins
    double cruise_pitch_min_deg = 0.0;
    double cruise_pitch_max_deg = 0.0;
    std::vector<CompensationAudit> compensation;
    double final_time = 0.0;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
    std::size_t deriv_evals = 0;
};

struct MissionResult {
    TrajectoryRecord record;
    MissionSummary summary;
};

// Runs the configured mission to completion, abort, or time budget.  The
// control loop is zero-order hold at cfg.sample_interval; one trajectory row
// is logged per control instant with the commands issued at that instant.
// Aborts are reported in the summary (with the partial trajectory), not
// thrown; only invalid configurations or integrator failures throw.
MissionResult run_mission(const ScenarioConfig& cfg);

// Human-readable run report (stage table, transit windows, outcome).
std::string summarize(const MissionResult& result);

}  // namespace amphibsim
