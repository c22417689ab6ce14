#pragma once

#include <string>
#include <vector>

#include "amphibsim/config.hpp"

namespace amphibsim {

struct CheckResult {
    std::string name;
    bool passed = false;
    bool skipped = false;  // prerequisite absent (e.g. drag disabled); not a failure
    std::string detail;
};

// The eight release criteria.  Each runs against the supplied scenario
// (tolerances are fixed in code, not configurable) and reports the measured
// numbers in `detail`.
CheckResult check_hover(const ScenarioConfig& cfg);          // 1: hover plan holds altitude
CheckResult check_terminal(const ScenarioConfig& cfg);       // 2: unpowered sink speed
CheckResult check_mission(const ScenarioConfig& cfg);        // 3: five-stage mission shape
CheckResult check_transition(const ScenarioConfig& cfg);     // 4: transit windows + cut exactness
CheckResult check_medium_ratio(const ScenarioConfig& cfg);   // 5: water/air thrust scaling
CheckResult check_convergence(const ScenarioConfig& cfg);    // 6: tolerance sweep + rk4 cross-check
CheckResult check_reduction(const ScenarioConfig& cfg);      // 7: 3D->2D derivative equivalence
CheckResult check_compensation(const ScenarioConfig& cfg);   // 8: thrust bookkeeping conserves

// Runs one named suite ("hover", "terminal", "mission", "transition",
// "medium_ratio", "convergence", "reduction", "compensation") or "all".
// Throws ConfigError for an unknown suite name.
std::vector<CheckResult> run_validation(const ScenarioConfig& cfg,
                                        const std::string& suite = "all");

}  // namespace amphibsim
