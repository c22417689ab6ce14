#pragma once

#include <array>
#include <span>

#include "amphibsim/geom.hpp"

namespace amphibsim {

// Physical parameter set for the eight-rotor amphibious vehicle.  Defaults
// are the reference craft; every field is overridable from config.
struct VehicleParams {
    double m = 2.00;                  // vehicle mass [kg]
    double I_xx = 3.46e-2;            // roll inertia [kg m^2]
    double I_yy = 3.46e-2;            // pitch inertia [kg m^2]
    double I_zz = 6.92e-2;            // yaw inertia [kg m^2]
    double K_T = 1.34e-5;             // thrust gain, T = K_T rho omega^2 [m^4/rad^2]
    double K_Q = 1.0e-6;              // reaction torque gain, Q = K_Q rho omega^2 [m^5/rad^2]
    double d = 0.3;                   // arm length, hub to rotor axis [m]
    double C_d = 0.8;                 // hull drag coefficient [-]
    double A_ref = 6.16e-2;           // drag reference area [m^2]
    double rho_air = 1.225;           // air density [kg/m^3]
    double rho_water = 999.97;        // water density [kg/m^3]
    double g_air = 9.81;              // gravitational acceleration in air [m/s^2]
    double g_water = 0.35;            // residual net gravity submerged (near-neutral trim) [m/s^2]
    double omega_max_air = 773.1;     // rotor speed limit in air [rad/s]
    double omega_max_water = 23.25;   // rotor speed limit in water [rad/s]
    double I_r = 1.0e-5;              // rotor + prop spin inertia [kg m^2]

    // Throws ValidationError naming every violated field.
    void validate() const;
};

// One rotor station.  `azimuth` places the carrying arm in the body X-Y
// plane; `spin` is the aerodynamic sense (+1 clockwise seen from above,
// -1 counterclockwise); `station` is the signed offset used when testing
// which side of the water interface the rotor sits on (upper +, lower -).
struct Rotor {
    double azimuth = 0.0;  // [rad]
    int spin = 1;          // +1 CW, -1 CCW
    double station = 0.0;  // [m]
    int arm = 0;           // 1..4, for reporting
};

struct RotorGeometry {
    std::array<Rotor, 8> rotors{};

    // Four arms at 45/315/135/225 deg, two counter-rotating rotors per arm
    // at stations +arm_station (upper) and -arm_station (lower).
    static RotorGeometry standard(double arm_station = 0.05);

    // Requires: finite azimuths/stations, spins in {-1,+1}, four of each
    // sense, and net yaw balance per arm (paired opposite spins).
    void validate() const;
};

// Local medium properties seen by a rotor (or the hull) at height Z for a
// station offset h.  `in_air` follows the same threshold as rho.
struct MediumSample {
    double rho = 0.0;
    double g_eff = 0.0;
    bool in_air = true;
};

// Unit step with H(0) = 1, the convention used by the medium switch.
double heaviside(double x);

// Medium at vertical position Z for a point at station offset h:
// rho = rho_water + H(Z - h) (rho_air - rho_water), and g_eff switching on
// the same threshold.  Z is measured from the undisturbed free surface,
// positive up.
MediumSample density_at(double Z, double h, const VehicleParams& p);

// Momentum-theory rotor laws.  omega >= 0 enforced.
double rotor_thrust(double omega, double rho, const VehicleParams& p);
double rotor_reaction_torque(double omega, double rho, int spin, const VehicleParams& p);

// Dimensionless thrust coefficient C_T = T / (rho A (omega b)^2) for disk
// area A and blade radius b.
double thrust_coefficient(double thrust, double rho, double omega, double disk_area,
                          double blade_radius);

// Coaxial variant: both rotors share the column, C_T = (T_up + T_low) /
// (rho A (omega b)^2).  Analysis use only; the simulator models rotors
// individually.
double coaxial_thrust_coefficient(double thrust_upper, double thrust_lower, double rho,
                                  double omega, double disk_area, double blade_radius);

// Total thrust sum(K_T rho_i omega_i^2) over any rotor count; the spans must
// be the same length.
double total_thrust(std::span<const double> omegas, std::span<const double> rhos,
                    const VehicleParams& p);

// Body-frame control torque from differential thrust and reaction torques:
//   tau_x =  K_T d sum(rho_i sin(az_i) omega_i^2)
//   tau_y = -K_T d sum(rho_i cos(az_i) omega_i^2)
//   tau_z =  K_Q   sum(rho_i spin_i    omega_i^2)
Vec3 control_torque(std::span<const double> omegas, std::span<const double> rhos,
                    const RotorGeometry& geom, const VehicleParams& p);

// Gyroscopic torque I_r (omega_body x z_hat) * sum(s_i omega_i) with the
// signed spin s_i = -spin_i, so counter-rotating pairs cancel exactly.
Vec3 gyroscopic_torque(const Vec3& body_rate, std::span<const double> omegas,
                       const RotorGeometry& geom, const VehicleParams& p);

// Quadratic hull drag, always opposing the velocity:
// F = -1/2 rho C_d A |v| v.  Zero velocity gives zero force.
Vec3 drag_force(const Vec3& velocity, double rho, const VehicleParams& p);

// Rotor speed that balances weight when n_rotors share the load equally:
// omega_h = sqrt(m g / (n K_T rho)).
double hover_speed(const VehicleParams& p, double rho, double g, int n_rotors = 8);

}  // namespace amphibsim
