#include "amphibsim/vehicle.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "amphibsim/errors.hpp"

namespace amphibsim {

namespace {

void require_positive(double v, const char* what, std::vector<std::string>& out) {
    if (!(std::isfinite(v) && v > 0.0))
        out.push_back(std::string(what) + ": must be > 0");
}

void require_nonnegative(double v, const char* what, std::vector<std::string>& out) {
    if (!(std::isfinite(v) && v >= 0.0))
        out.push_back(std::string(what) + ": must be >= 0");
}

[[noreturn]] void throw_joined(const char* context, const std::vector<std::string>& problems) {
    std::string msg(context);
    msg += ":";
    for (const auto& p : problems) {
        msg += "\n  ";
        msg += p;
    }
    throw ValidationError(msg);
}

void check_rotor_inputs(std::span<const double> omegas, std::span<const double> rhos,
                        const char* context) {
    if (omegas.size() != rhos.size() || omegas.empty()) {
        throw ValidationError(std::string(context) +
                              ": omega and rho spans must be non-empty and equal length");
    }
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(std::isfinite(omegas[i]) && omegas[i] >= 0.0))
            throw ValidationError(std::string(context) + ": omega_" +
                                  std::to_string(i + 1) + " must be >= 0");
        if (!(std::isfinite(rhos[i]) && rhos[i] > 0.0))
            throw ValidationError(std::string(context) + ": rho_" +
                                  std::to_string(i + 1) + " must be > 0");
    }
}

}  // namespace

void VehicleParams::validate() const {
    std::vector<std::string> bad;
    require_positive(m, "m", bad);
    require_positive(I_xx, "I_xx", bad);
    require_positive(I_yy, "I_yy", bad);
    require_positive(I_zz, "I_zz", bad);
    require_positive(K_T, "K_t", bad);
    require_positive(K_Q, "K_Q", bad);
    require_positive(d, "d", bad);
    require_nonnegative(C_d, "C_d", bad);
    require_positive(A_ref, "A", bad);
    require_positive(rho_air, "rho_air", bad);
    require_positive(rho_water, "rho_water", bad);
    if (std::isfinite(rho_air) && std::isfinite(rho_water) && rho_water <= rho_air)
        bad.push_back("rho_water: must exceed rho_air");
    require_positive(g_air, "g_air", bad);
    require_nonnegative(g_water, "g_water", bad);
    require_positive(omega_max_air, "omega_max_air", bad);
    require_positive(omega_max_water, "omega_max_water", bad);
    require_positive(I_r, "I_r", bad);
    if (!bad.empty()) throw_joined("vehicle parameters invalid", bad);
}

RotorGeometry RotorGeometry::standard(double arm_station) {
    if (!(std::isfinite(arm_station) && arm_station > 0.0))
        throw ValidationError("rotor geometry: arm_station must be > 0");

    constexpr double deg = std::numbers::pi / 180.0;
    // Arms 1,2 forward (+X half plane), arms 3,4 aft.  Each arm carries an
    // upper rotor (odd index) and a lower rotor (even index) of opposite
    // spin; spin senses alternate between neighboring arms so the craft is
    // yaw-balanced in any fore/aft or upper/lower grouping.
    const std::array<double, 4> arm_azimuth = {45.0 * deg, 315.0 * deg, 135.0 * deg,
                                               225.0 * deg};
    const std::array<int, 4> upper_spin = {+1, -1, +1, -1};

    RotorGeometry g;
    for (int arm = 0; arm < 4; ++arm) {
        Rotor upper;
        upper.azimuth = arm_azimuth[arm];
        upper.spin = upper_spin[arm];
        upper.station = arm_station;
        upper.arm = arm + 1;

        Rotor lower = upper;
        lower.spin = -upper.spin;
        lower.station = -arm_station;

        g.rotors[2 * arm] = upper;
        g.rotors[2 * arm + 1] = lower;
    }
    return g;
}

void RotorGeometry::validate() const {
    std::vector<std::string> bad;
    int spin_sum = 0;
    for (std::size_t i = 0; i < rotors.size(); ++i) {
        const Rotor& r = rotors[i];
        const std::string tag = "rotor_" + std::to_string(i + 1);
        if (!std::isfinite(r.azimuth)) bad.push_back(tag + ": azimuth must be finite");
        if (!std::isfinite(r.station)) bad.push_back(tag + ": station must be finite");
        if (r.spin != 1 && r.spin != -1) bad.push_back(tag + ": spin must be +1 or -1");
        spin_sum += r.spin;
    }
    if (spin_sum != 0)
        bad.push_back("spins: need four clockwise and four counterclockwise rotors");
    if (!bad.empty()) throw_joined("rotor geometry invalid", bad);
}

double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }

MediumSample density_at(double Z, double h, const VehicleParams& p) {
    if (!std::isfinite(Z) || !std::isfinite(h))
        throw ValidationError("density_at: Z and h must be finite");
    const double step = heaviside(Z - h);
    MediumSample s;
    s.in_air = step > 0.0;
    s.rho = s.in_air ? p.rho_air : p.rho_water;
    s.g_eff = s.in_air ? p.g_air : p.g_water;
    return s;
}

double rotor_thrust(double omega, double rho, const VehicleParams& p) {
    if (!(std::isfinite(omega) && omega >= 0.0))
        throw ValidationError("rotor_thrust: omega must be >= 0");
    if (!(std::isfinite(rho) && rho > 0.0))
        throw ValidationError("rotor_thrust: rho must be > 0");
    return p.K_T * rho * omega * omega;
}

double rotor_reaction_torque(double omega, double rho, int spin, const VehicleParams& p) {
    if (!(std::isfinite(omega) && omega >= 0.0))
        throw ValidationError("rotor_reaction_torque: omega must be >= 0");
    if (!(std::isfinite(rho) && rho > 0.0))
        throw ValidationError("rotor_reaction_torque: rho must be > 0");
    if (spin != 1 && spin != -1)
        throw ValidationError("rotor_reaction_torque: spin must be +1 or -1");
    return static_cast<double>(spin) * p.K_Q * rho * omega * omega;
}

double thrust_coefficient(double thrust, double rho, double omega, double disk_area,
                          double blade_radius) {
    if (!(std::isfinite(thrust) && thrust >= 0.0))
        throw ValidationError("thrust_coefficient: thrust must be >= 0");
    if (!(std::isfinite(rho) && rho > 0.0))
        throw ValidationError("thrust_coefficient: rho must be > 0");
    if (!(std::isfinite(omega) && omega > 0.0))
        throw ValidationError("thrust_coefficient: omega must be > 0");
    if (!(std::isfinite(disk_area) && disk_area > 0.0))
        throw ValidationError("thrust_coefficient: disk_area must be > 0");
    if (!(std::isfinite(blade_radius) && blade_radius > 0.0))
        throw ValidationError("thrust_coefficient: blade_radius must be > 0");
    const double tip = omega * blade_radius;
    return thrust / (rho * disk_area * tip * tip);
}

double coaxial_thrust_coefficient(double thrust_upper, double thrust_lower, double rho,
                                  double omega, double disk_area, double blade_radius) {
    if (!(std::isfinite(thrust_lower) && thrust_lower >= 0.0))
        throw ValidationError("coaxial_thrust_coefficient: thrust_lower must be >= 0");
    return thrust_coefficient(thrust_upper + thrust_lower, rho, omega, disk_area,
                              blade_radius);
}

double total_thrust(std::span<const double> omegas, std::span<const double> rhos,
                    const VehicleParams& p) {
    check_rotor_inputs(omegas, rhos, "total_thrust");
    double sum = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i)
        sum += rhos[i] * omegas[i] * omegas[i];
    return p.K_T * sum;
}

Vec3 control_torque(std::span<const double> omegas, std::span<const double> rhos,
                    const RotorGeometry& geom, const VehicleParams& p) {
    if (omegas.size() != geom.rotors.size())
        throw ValidationError("control_torque: need one omega per rotor");
    check_rotor_inputs(omegas, rhos, "control_torque");
    Vec3 tau;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        const Rotor& r = geom.rotors[i];
        const double w2 = rhos[i] * omegas[i] * omegas[i];
        tau.x += p.K_T * p.d * std::sin(r.azimuth) * w2;
        tau.y -= p.K_T * p.d * std::cos(r.azimuth) * w2;
        tau.z += p.K_Q * static_cast<double>(r.spin) * w2;
    }
    return tau;
}

Vec3 gyroscopic_torque(const Vec3& body_rate, std::span<const double> omegas,
                       const RotorGeometry& geom, const VehicleParams& p) {
    if (omegas.size() != geom.rotors.size())
        throw ValidationError("gyroscopic_torque: need one omega per rotor");
    if (!body_rate.is_finite())
        throw ValidationError("gyroscopic_torque: body rate must be finite");
    double signed_speed = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(std::isfinite(omegas[i]) && omegas[i] >= 0.0))
            throw ValidationError("gyroscopic_torque: omega_" + std::to_string(i + 1) +
                                  " must be >= 0");
        signed_speed += -static_cast<double>(geom.rotors[i].spin) * omegas[i];
    }
    const Vec3 z_hat{0.0, 0.0, 1.0};
    return p.I_r * signed_speed * body_rate.cross(z_hat);
}

Vec3 drag_force(const Vec3& velocity, double rho, const VehicleParams& p) {
    if (!velocity.is_finite())
        throw ValidationError("drag_force: velocity must be finite");
    if (!(std::isfinite(rho) && rho > 0.0))
        throw ValidationError("drag_force: rho must be > 0");
    const double speed = velocity.norm();
    return (-0.5 * rho * p.C_d * p.A_ref * speed) * velocity;
}

double hover_speed(const VehicleParams& p, double rho, double g, int n_rotors) {
    if (!(std::isfinite(rho) && rho > 0.0))
        throw ValidationError("hover_speed: rho must be > 0");
    if (!(std::isfinite(g) && g > 0.0))
        throw ValidationError("hover_speed: g must be > 0");
    if (n_rotors <= 0) throw ValidationError("hover_speed: n_rotors must be > 0");
    return std::sqrt(p.m * g / (static_cast<double>(n_rotors) * p.K_T * rho));
}

}  // namespace amphibsim
