#include "amphibsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "amphibsim/errors.hpp"

namespace amphibsim {

namespace {

void check_unit_speeds(std::span<const double> omegas, std::size_t expected,
                       const char* context) {
    if (omegas.size() != expected)
        throw ValidationError(std::string(context) + ": expected " +
                              std::to_string(expected) + " rotor speeds, got " +
                              std::to_string(omegas.size()));
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(std::isfinite(omegas[i]) && omegas[i] >= 0.0))
            throw ValidationError(std::string(context) + ": omega_" +
                                  std::to_string(i + 1) + " must be >= 0");
    }
}

// Quantize for grouping; rotor placements are design values, not computed
// quantities, so a coarse snap is safe.
long long snap(double v) { return std::llround(v * 1e7); }

}  // namespace

std::array<double, State3D::kSize> State3D::to_array() const {
    return {position.x, position.y, position.z, velocity.x,   velocity.y,
            velocity.z, attitude.roll, attitude.pitch, attitude.yaw,
            body_rate.x, body_rate.y, body_rate.z};
}

State3D State3D::from_array(std::span<const double> a) {
    if (a.size() != kSize)
        throw ValidationError("State3D: expected 12 components");
    State3D s;
    s.position = {a[0], a[1], a[2]};
    s.velocity = {a[3], a[4], a[5]};
    s.attitude = {.yaw = a[8], .pitch = a[7], .roll = a[6]};
    s.body_rate = {a[9], a[10], a[11]};
    return s;
}

bool State3D::is_finite() const {
    return position.is_finite() && velocity.is_finite() && body_rate.is_finite() &&
           std::isfinite(attitude.yaw) && std::isfinite(attitude.pitch) &&
           std::isfinite(attitude.roll);
}

std::array<double, State2D::kSize> State2D::to_array() const {
    return {X, Z, vx, vz, theta, theta_rate};
}

State2D State2D::from_array(std::span<const double> a) {
    if (a.size() != kSize)
        throw ValidationError("State2D: expected 6 components");
    return {a[0], a[1], a[2], a[3], a[4], a[5]};
}

bool State2D::is_finite() const {
    return std::isfinite(X) && std::isfinite(Z) && std::isfinite(vx) &&
           std::isfinite(vz) && std::isfinite(theta) && std::isfinite(theta_rate);
}

PlanarRotorSet PlanarRotorSet::from_geometry(const RotorGeometry& geom) {
    geom.validate();

    // Bucket rotors on (fore/aft offset, station).
    std::map<std::pair<long long, long long>, PlanarUnit> groups;
    std::map<std::pair<long long, long long>, double> lateral_sum;
    std::map<std::pair<long long, long long>, int> spin_sum;
    for (int i = 0; i < 8; ++i) {
        const Rotor& r = geom.rotors[i];
        const double xf = std::cos(r.azimuth);
        const auto key = std::make_pair(snap(xf), snap(r.station));
        PlanarUnit& u = groups[key];
        if (u.mult == 0) {
            u.x_factor = xf;
            u.station = r.station;
        }
        u.member_stations.push_back(r.station);
        u.members.push_back(i);
        u.mult += 1;
        lateral_sum[key] += std::sin(r.azimuth);
        spin_sum[key] += r.spin;
    }

    if (groups.size() != 4)
        throw ValidationError(
            "planar reduction: layout must form exactly four (offset, station) "
            "rotor groups, got " + std::to_string(groups.size()));

    std::vector<PlanarUnit> units;
    for (auto& [key, unit] : groups) {
        if (std::abs(lateral_sum[key]) > 1e-9)
            throw ValidationError(
                "planar reduction: lateral offsets within a rotor group must cancel");
        if (spin_sum[key] != 0)
            throw ValidationError(
                "planar reduction: spins within a rotor group must cancel");
        units.push_back(std::move(unit));
    }
    const int mult0 = units.front().mult;
    for (const PlanarUnit& u : units) {
        if (u.mult != mult0)
            throw ValidationError("planar reduction: rotor groups must be equal size");
    }

    // Front before rear, upper before lower.
    std::sort(units.begin(), units.end(), [](const PlanarUnit& a, const PlanarUnit& b) {
        if (a.x_factor != b.x_factor) return a.x_factor > b.x_factor;
        return a.station > b.station;
    });

    PlanarRotorSet set;
    std::copy(units.begin(), units.end(), set.units.begin());
    return set;
}

std::vector<double> PlanarRotorSet::expand(std::span<const double> unit_omegas) const {
    check_unit_speeds(unit_omegas, units.size(), "planar expand");
    std::vector<double> out(8, 0.0);
    for (std::size_t g = 0; g < units.size(); ++g)
        for (int idx : units[g].members) out[static_cast<std::size_t>(idx)] = unit_omegas[g];
    return out;
}

double angle_of_attack(double vx, double vz) {
    if (!std::isfinite(vx) || !std::isfinite(vz))
        throw ValidationError("angle_of_attack: velocity must be finite");
    if (vx == 0.0 && vz == 0.0) return 0.0;
    return std::atan2(vx, vz);
}

State3D state_derivative_3d(const State3D& s, std::span<const double> omegas,
                            const RotorGeometry& geom, const VehicleParams& p) {
    if (!s.is_finite())
        throw ValidationError("state_derivative_3d: state must be finite");
    check_unit_speeds(omegas, geom.rotors.size(), "state_derivative_3d");

    // Per-rotor medium from each rotor's own station; hull terms from the
    // centroid sample.
    std::array<double, 8> rho{};
    for (int i = 0; i < 8; ++i)
        rho[i] = density_at(s.position.z, geom.rotors[i].station, p).rho;
    const MediumSample hull = density_at(s.position.z, 0.0, p);

    const double T = total_thrust(omegas, rho, p);
    const Mat3 R = rotation_matrix(s.attitude);  // rejects singular pitch
    const Vec3 thrust_inertial = R.transposed() * Vec3{0.0, 0.0, T};
    const Vec3 drag = drag_force(s.velocity, hull.rho, p);

    const Vec3 tau = control_torque(omegas, rho, geom, p) -
                     gyroscopic_torque(s.body_rate, omegas, geom, p);

    State3D d;
    d.position = s.velocity;
    d.velocity = (thrust_inertial + drag) / p.m - Vec3{0.0, 0.0, hull.g_eff};
    // Euler rates identified with body rates (near-hover approximation).
    d.attitude = {.yaw = s.body_rate.z, .pitch = s.body_rate.y, .roll = s.body_rate.x};
    const double pr = s.body_rate.x, qr = s.body_rate.y, rr = s.body_rate.z;
    d.body_rate = {(tau.x + (p.I_yy - p.I_zz) * qr * rr) / p.I_xx,
                   (tau.y + (p.I_zz - p.I_xx) * pr * rr) / p.I_yy,
                   (tau.z + (p.I_xx - p.I_yy) * pr * qr) / p.I_zz};
    return d;
}

State2D state_derivative_2d(const State2D& s, std::span<const double> omegas,
                            const PlanarRotorSet& units, const VehicleParams& p,
                            PlanarSampling sampling) {
    if (!s.is_finite())
        throw ValidationError("state_derivative_2d: state must be finite");
    check_unit_speeds(omegas, units.units.size(), "state_derivative_2d");

    double thrust = 0.0;
    double pitch_moment = 0.0;
    for (std::size_t g = 0; g < units.units.size(); ++g) {
        const PlanarUnit& u = units.units[g];
        double unit_thrust = 0.0;
        if (sampling == PlanarSampling::mean_station) {
            const double rho = density_at(s.Z, u.station, p).rho;
            unit_thrust = static_cast<double>(u.mult) * p.K_T * rho * omegas[g] * omegas[g];
        } else {
            for (double h : u.member_stations) {
                const double rho = density_at(s.Z, h, p).rho;
                unit_thrust += p.K_T * rho * omegas[g] * omegas[g];
            }
        }
        thrust += unit_thrust;
        pitch_moment -= u.x_factor * p.d * unit_thrust;
    }

    const MediumSample hull = density_at(s.Z, 0.0, p);
    const Vec3 drag = drag_force({s.vx, 0.0, s.vz}, hull.rho, p);

    const double sth = std::sin(s.theta), cth = std::cos(s.theta);
    State2D d;
    d.X = s.vx;
    d.Z = s.vz;
    d.vx = (sth * thrust + drag.x) / p.m;
    d.vz = -hull.g_eff + (cth * thrust + drag.z) / p.m;
    d.theta = s.theta_rate;
    d.theta_rate = pitch_moment / p.I_yy;
    return d;
}

State2D reduce_3d_to_2d(const State3D& s, double tol) {
    if (!s.is_finite())
        throw ValidationError("reduce_3d_to_2d: state must be finite");
    if (!(std::isfinite(tol) && tol >= 0.0))
        throw ValidationError("reduce_3d_to_2d: tol must be >= 0");
    const double worst =
        std::max({std::abs(s.position.y), std::abs(s.velocity.y),
                  std::abs(s.attitude.roll), std::abs(s.attitude.yaw),
                  std::abs(s.body_rate.x), std::abs(s.body_rate.z)});
    if (worst > tol)
        throw ValidationError(
            "reduce_3d_to_2d: out-of-plane component " + std::to_string(worst) +
            " exceeds tolerance " + std::to_string(tol));
    return {s.position.x, s.position.z, s.velocity.x,
            s.velocity.z, s.attitude.pitch, s.body_rate.y};
}

}  // namespace amphibsim
