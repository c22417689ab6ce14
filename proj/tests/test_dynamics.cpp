#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "amphibsim/dynamics.hpp"
#include "amphibsim/errors.hpp"
#include "amphibsim/vehicle.hpp"

using namespace amphibsim;

namespace {

struct UniformRng {
    std::uint64_t state = 0x5eed5eed5eed5eedULL;
    double next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return std::ldexp(static_cast<double>(state >> 11), -53);
    }
    double range(double lo, double hi) { return lo + (hi - lo) * next(); }
};

}  // namespace

TEST_CASE("angle of attack conventions") {
    CHECK(angle_of_attack(1.0, -1.0) ==
          doctest::Approx(2.356194490192345).epsilon(1e-15));  // 3 pi / 4
    CHECK(angle_of_attack(0.0, 0.0) == 0.0);
    CHECK(angle_of_attack(0.0, 1.0) == 0.0);
    CHECK(angle_of_attack(1.0, 0.0) ==
          doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-15));
}

TEST_CASE("state array round trips") {
    State3D s;
    s.position = {1.0, 2.0, 3.0};
    s.velocity = {-0.5, 0.25, 4.0};
    s.attitude = {0.1, 0.2, 0.3};
    s.body_rate = {0.01, -0.02, 0.03};
    const auto a = s.to_array();
    const State3D back = State3D::from_array(a);
    CHECK(back.to_array() == a);
    CHECK(a[2] == 3.0);   // Z slot
    CHECK(a[7] == 0.2);   // pitch slot

    State2D q{5.0, -1.0, 0.5, -0.25, 0.7, 0.05};
    CHECK(State2D::from_array(q.to_array()).to_array() == q.to_array());
}

TEST_CASE("planar grouping splits the octorotor into four mirror units") {
    const PlanarRotorSet set = PlanarRotorSet::from_geometry(RotorGeometry::standard(0.05));
    const double half_sqrt2 = std::sqrt(2.0) / 2.0;
    // Front units lead, upper before lower.
    CHECK(set.units[0].x_factor == doctest::Approx(half_sqrt2).epsilon(1e-15));
    CHECK(set.units[1].x_factor == doctest::Approx(half_sqrt2).epsilon(1e-15));
    CHECK(set.units[2].x_factor == doctest::Approx(-half_sqrt2).epsilon(1e-15));
    CHECK(set.units[3].x_factor == doctest::Approx(-half_sqrt2).epsilon(1e-15));
    CHECK(set.units[0].station == 0.05);
    CHECK(set.units[1].station == -0.05);
    CHECK(set.units[2].station == 0.05);
    CHECK(set.units[3].station == -0.05);
    for (const PlanarUnit& u : set.units) {
        CHECK(u.mult == 2);
        CHECK(u.members.size() == 2);
    }

    // Expansion scatters unit speeds to the member rotors.
    const std::array<double, 4> unit_speeds{10.0, 20.0, 30.0, 40.0};
    const std::vector<double> w = set.expand(unit_speeds);
    REQUIRE(w.size() == 8);
    for (int g = 0; g < 4; ++g)
        for (int m : set.units[static_cast<std::size_t>(g)].members)
            CHECK(w[static_cast<std::size_t>(m)] == 10.0 * (g + 1));
}

TEST_CASE("planar grouping rejects asymmetric layouts") {
    RotorGeometry g = RotorGeometry::standard();
    g.rotors[0].azimuth = 0.1;  // breaks the lateral mirror
    CHECK_THROWS_AS(PlanarRotorSet::from_geometry(g), ValidationError);
}

TEST_CASE("hover speeds balance the 3D derivative") {
    const VehicleParams p;
    const RotorGeometry geom = RotorGeometry::standard();
    State3D s;
    s.position = {0.0, 0.0, 1.0};
    const double wh = hover_speed(p, p.rho_air, p.g_air);
    const std::vector<double> omegas(8, wh);
    const State3D ds = state_derivative_3d(s, omegas, geom, p);
    CHECK(ds.position.norm() == 0.0);  // at rest
    CHECK(std::abs(ds.velocity.x) < 1e-12);
    CHECK(std::abs(ds.velocity.y) < 1e-12);
    CHECK(std::abs(ds.velocity.z) < 1e-12);
    CHECK(std::abs(ds.body_rate.x) < 1e-12);
    CHECK(std::abs(ds.body_rate.y) < 1e-12);
    CHECK(std::abs(ds.body_rate.z) < 1e-12);
}

TEST_CASE("unpowered fall accelerates at the local effective gravity") {
    const VehicleParams p;
    const RotorGeometry geom = RotorGeometry::standard();
    const std::vector<double> zeros(8, 0.0);
    State3D air;
    air.position = {0.0, 0.0, 5.0};
    CHECK(state_derivative_3d(air, zeros, geom, p).velocity.z ==
          doctest::Approx(-9.81).epsilon(1e-15));
    State3D water;
    water.position = {0.0, 0.0, -5.0};
    CHECK(state_derivative_3d(water, zeros, geom, p).velocity.z ==
          doctest::Approx(-0.35).epsilon(1e-15));
}

TEST_CASE("hull drag enters the planar acceleration") {
    const VehicleParams p;
    const PlanarRotorSet units = PlanarRotorSet::from_geometry(RotorGeometry::standard());
    State2D s;
    s.Z = -5.0;
    s.vz = -0.2;
    const State2D ds = state_derivative_2d(s, std::vector<double>(4, 0.0), units, p);
    const double drag = 0.5 * p.rho_water * p.C_d * p.A_ref * 0.2 * 0.2 / p.m;
    CHECK(ds.vz == doctest::Approx(-p.g_water + drag).epsilon(1e-12));
    CHECK(ds.Z == -0.2);
    CHECK(ds.X == 0.0);
}

TEST_CASE("planar reduction accepts symmetric states and rejects others") {
    State3D s;
    s.position = {2.0, 0.0, -1.0};
    s.velocity = {0.4, 0.0, -0.1};
    s.attitude = {0.0, 0.6, 0.0};
    s.body_rate = {0.0, 0.25, 0.0};
    const State2D q = reduce_3d_to_2d(s);
    CHECK(q.X == 2.0);
    CHECK(q.Z == -1.0);
    CHECK(q.vx == 0.4);
    CHECK(q.vz == -0.1);
    CHECK(q.theta == 0.6);
    CHECK(q.theta_rate == 0.25);

    State3D bad = s;
    bad.velocity.y = 1e-3;
    CHECK_THROWS_AS(reduce_3d_to_2d(bad), ValidationError);
    CHECK_NOTHROW(reduce_3d_to_2d(bad, 1e-2));
}

TEST_CASE("planar derivative agrees with the reduced 3D derivative") {
    const VehicleParams p;
    const RotorGeometry geom = RotorGeometry::standard();
    const PlanarRotorSet units = PlanarRotorSet::from_geometry(geom);
    UniformRng rng;
    for (int k = 0; k < 50; ++k) {
        State3D s;
        s.position = {rng.range(-5.0, 5.0), 0.0, rng.range(-2.0, 2.0)};
        s.velocity = {rng.range(-2.0, 2.0), 0.0, rng.range(-2.0, 2.0)};
        s.attitude = {0.0, rng.range(-1.2, 1.2), 0.0};
        s.body_rate = {0.0, rng.range(-1.0, 1.0), 0.0};
        std::vector<double> unit_w(4);
        for (double& w : unit_w) w = rng.range(0.0, 700.0);

        const State3D ds3 = state_derivative_3d(s, units.expand(unit_w), geom, p);
        const State2D ds2 = state_derivative_2d(reduce_3d_to_2d(s), unit_w, units, p,
                                                PlanarSampling::per_rotor);
        CHECK(std::abs(ds3.velocity.x - ds2.vx) <= 1e-9 * std::max(1.0, std::abs(ds2.vx)));
        CHECK(std::abs(ds3.velocity.z - ds2.vz) <= 1e-9 * std::max(1.0, std::abs(ds2.vz)));
        CHECK(std::abs(ds3.body_rate.y - ds2.theta_rate) <=
              1e-9 * std::max(1.0, std::abs(ds2.theta_rate)));
        // No out-of-plane leakage from a planar state.
        CHECK(std::abs(ds3.velocity.y) < 1e-9);
        CHECK(std::abs(ds3.body_rate.x) < 1e-9);
        CHECK(std::abs(ds3.body_rate.z) < 1e-9);
    }
}

TEST_CASE("sampling modes agree when unit members share a station") {
    const VehicleParams p;
    const PlanarRotorSet units = PlanarRotorSet::from_geometry(RotorGeometry::standard());
    State2D s;
    s.Z = 0.03;  // straddles the interface band
    s.theta = 0.4;
    const std::vector<double> w{5.0, 5.0, 5.0, 5.0};
    const State2D a = state_derivative_2d(s, w, units, p, PlanarSampling::mean_station);
    const State2D b = state_derivative_2d(s, w, units, p, PlanarSampling::per_rotor);
    CHECK(a.vx == b.vx);
    CHECK(a.vz == b.vz);
    CHECK(a.theta_rate == b.theta_rate);
}

TEST_CASE("derivative input validation") {
    const VehicleParams p;
    const RotorGeometry geom = RotorGeometry::standard();
    const PlanarRotorSet units = PlanarRotorSet::from_geometry(geom);
    State3D s;
    CHECK_THROWS_AS(state_derivative_3d(s, std::vector<double>(3, 1.0), geom, p),
                    ValidationError);
    State2D q;
    CHECK_THROWS_AS(state_derivative_2d(q, std::vector<double>(8, 1.0), units, p),
                    ValidationError);
}
