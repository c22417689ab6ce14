#pragma once

#include <array>
#include <span>
#include <vector>

#include "amphibsim/geom.hpp"
#include "amphibsim/vehicle.hpp"

namespace amphibsim {

// Full rigid-body state.  Position and velocity are inertial with Z measured
// up from the undisturbed water surface; body_rate is (p, q, r) about the
// body axes.  Flattened layout (for the integrator):
// [X, Y, Z, vx, vy, vz, roll, pitch, yaw, p, q, r].
struct State3D {
    Vec3 position{};
    Vec3 velocity{};
    EulerAngles attitude{};
    Vec3 body_rate{};

    static constexpr std::size_t kSize = 12;
    std::array<double, kSize> to_array() const;
    static State3D from_array(std::span<const double> a);
    bool is_finite() const;
};

// Planar longitudinal state: [X, Z, vx, vz, theta, theta_rate].
struct State2D {
    double X = 0.0;
    double Z = 0.0;
    double vx = 0.0;
    double vz = 0.0;
    double theta = 0.0;       // pitch [rad]
    double theta_rate = 0.0;  // [rad/s]

    static constexpr std::size_t kSize = 6;
    std::array<double, kSize> to_array() const;
    static State2D from_array(std::span<const double> a);
    bool is_finite() const;
};

// How a planar unit samples the medium: at its mean station, or averaged
// over its member rotors' individual stations.  Identical for the standard
// geometry, whose unit members share a station.
enum class PlanarSampling { mean_station, per_rotor };

// One planar rotor unit: the lateral mirror group of `mult` rotors sharing
// a fore/aft offset and a vertical station.  x_factor is the offset in arm
// lengths (cos of the arm azimuth), so the moment arm is d * x_factor.
struct PlanarUnit {
    double x_factor = 0.0;
    double station = 0.0;               // mean member station [m]
    std::vector<double> member_stations;
    int mult = 0;

    // Indices of the member rotors inside the source RotorGeometry, used
    // when broadcasting a unit speed back to the eight-rotor model.
    std::vector<int> members;
};

// The planar model's four units, ordered front-upper, front-lower,
// rear-upper, rear-lower.
struct PlanarRotorSet {
    std::array<PlanarUnit, 4> units{};

    // Groups an eight-rotor layout into four mirror units.  Requires a
    // fore/aft symmetric layout: exactly four (x_factor, station) groups of
    // equal size, each with cancelling lateral offsets and spins.  Throws
    // ValidationError otherwise.
    static PlanarRotorSet from_geometry(const RotorGeometry& geom);

    // Expands unit speeds (one per unit) to per-rotor speeds in geometry
    // order.
    std::vector<double> expand(std::span<const double> unit_omegas) const;
};

// Flight-path angle of the planar velocity measured from the +Z axis,
// alpha = atan2(vx, vz); zero for zero velocity.
double angle_of_attack(double vx, double vz);

// Time derivative of the full state under fixed rotor speeds (one per
// rotor).  Per-rotor medium follows each rotor's station; buoyancy-adjusted
// gravity and hull drag sample the medium at the hull centroid (station 0).
// Euler-angle rates are identified with the body rates, a near-hover
// approximation consistent with the planar model.
State3D state_derivative_3d(const State3D& s, std::span<const double> omegas,
                            const RotorGeometry& geom, const VehicleParams& p);

// Planar counterpart under fixed unit speeds (one per planar unit).
State2D state_derivative_2d(const State2D& s, std::span<const double> omegas,
                            const PlanarRotorSet& units, const VehicleParams& p,
                            PlanarSampling sampling = PlanarSampling::mean_station);

// Projects a planar-symmetric 3D state onto the 2D state.  Out-of-plane
// components (Y, vy, roll, yaw, p, r) larger than tol raise ValidationError.
State2D reduce_3d_to_2d(const State3D& s, double tol = 1e-6);

}  // namespace amphibsim
