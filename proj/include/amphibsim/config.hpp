#pragma once

#include <array>
#include <string>
#include <string_view>

#include "amphibsim/controller.hpp"
#include "amphibsim/dynamics.hpp"
#include "amphibsim/integrator.hpp"
#include "amphibsim/vehicle.hpp"

namespace amphibsim {

enum class ModelKind { planar, full };        // "2d" / "3d"
enum class StepperKind { rk45, rk4 };

// Full scenario description.  A default-constructed config is the reference
// craft and mission; an empty config file changes nothing.
struct ScenarioConfig {
    VehicleParams vehicle{};

    // Rotor layout: four arms, each carrying rotors at +/-arm_station.
    double arm_station = 0.05;                       // [m]
    std::array<double, 4> arm_azimuth_deg = {45.0, 315.0, 135.0, 225.0};

    IntegratorConfig integrator{};
    StepperKind stepper = StepperKind::rk45;
    double rk4_step = 1e-4;                          // fixed-step mode [s]

    MissionPlan plan{};

    ModelKind model = ModelKind::planar;
    PlanarSampling sampling = PlanarSampling::mean_station;
    double sample_interval = 0.01;                   // control + log period [s]
    std::string out_dir = "out";

    RotorGeometry make_geometry() const;
    void validate() const;  // throws ConfigError listing every violation
};

// INI-style parser: [section] headers, key = value lines, # or ; comments.
// Unknown sections or keys are hard errors naming the line.  Values are
// validated collectively after parsing.
ScenarioConfig parse_config(std::string_view text);

// parse_config over a file's contents; missing/unreadable file raises
// ConfigError.
ScenarioConfig load_config(const std::string& path);

// Applies one "section.key" override (the sweep hook); value syntax matches
// the file format.  Throws ConfigError for unknown keys or bad values.
void apply_key(ScenarioConfig& cfg, std::string_view dotted_key, std::string_view value);

}  // namespace amphibsim
