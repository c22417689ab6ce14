#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "amphibsim/errors.hpp"
#include "amphibsim/vehicle.hpp"

using namespace amphibsim;

TEST_CASE("heaviside switch keeps the surface in the upper medium") {
    CHECK(heaviside(-1.0) == 0.0);
    CHECK(heaviside(-1e-300) == 0.0);
    CHECK(heaviside(0.0) == 1.0);
    CHECK(heaviside(1e-300) == 1.0);
    CHECK(heaviside(5.0) == 1.0);
}

TEST_CASE("medium sampling switches density and gravity together") {
    const VehicleParams p;
    const MediumSample above = density_at(0.2, 0.0, p);
    CHECK(above.rho == 1.225);
    CHECK(above.g_eff == 9.81);
    CHECK(above.in_air);

    const MediumSample below = density_at(-0.2, 0.0, p);
    CHECK(below.rho == 999.97);
    CHECK(below.g_eff == 0.35);
    CHECK_FALSE(below.in_air);

    // A point exactly on the surface counts as airborne (H(0) = 1).
    CHECK(density_at(0.05, 0.05, p).in_air);
    // The station offset shifts the test threshold.
    CHECK_FALSE(density_at(0.02, 0.05, p).in_air);
    CHECK_THROWS_AS(density_at(std::nan(""), 0.0, p), ValidationError);
}

TEST_CASE("rotor thrust at the speed ceilings") {
    const VehicleParams p;
    // K_T rho omega^2 at the per-medium ceilings.
    CHECK(rotor_thrust(773.1, 1.225, p) == doctest::Approx(9.81097645815).epsilon(1e-12));
    CHECK(rotor_thrust(23.25, 999.97, p) ==
          doctest::Approx(7.243320193875).epsilon(1e-12));
    CHECK(rotor_thrust(0.0, 1.225, p) == 0.0);
    CHECK_THROWS_AS(rotor_thrust(-1.0, 1.225, p), ValidationError);
    CHECK_THROWS_AS(rotor_thrust(100.0, 0.0, p), ValidationError);
}

TEST_CASE("reaction torque follows the spin sign") {
    const VehicleParams p;
    // spin * K_Q rho omega^2; counter-rotating rotors cancel exactly.
    const double q = rotor_reaction_torque(100.0, 1.225, 1, p);
    CHECK(q == p.K_Q * 1.225 * 100.0 * 100.0);
    CHECK(rotor_reaction_torque(100.0, 1.225, -1, p) == -q);
    CHECK(rotor_reaction_torque(0.0, 999.97, 1, p) == 0.0);
    CHECK_THROWS_AS(rotor_reaction_torque(-1.0, 1.225, 1, p), ValidationError);
    CHECK_THROWS_AS(rotor_reaction_torque(10.0, 1.225, 0, p), ValidationError);
}

TEST_CASE("water to air thrust ratio equals the density ratio") {
    const VehicleParams p;
    for (double omega : {1.0, 23.25, 100.0, 386.5, 773.1}) {
        const double ratio = rotor_thrust(omega, p.rho_water, p) /
                             rotor_thrust(omega, p.rho_air, p);
        CHECK(ratio == doctest::Approx(816.3020408163264).epsilon(1e-12));
    }
}

TEST_CASE("hover speed balances weight exactly") {
    const VehicleParams p;
    const double wh_air = hover_speed(p, p.rho_air, p.g_air);
    CHECK(wh_air == doctest::Approx(386.5307634188307).epsilon(1e-12));
    CHECK(hover_speed(p, p.rho_water, p.g_water) ==
          doctest::Approx(2.555395595141403).epsilon(1e-12));
    // Eight rotors at hover speed carry m g to machine precision.
    CHECK(8.0 * rotor_thrust(wh_air, p.rho_air, p) ==
          doctest::Approx(p.m * p.g_air).epsilon(1e-14));
    CHECK_THROWS_AS(hover_speed(p, p.rho_air, p.g_air, 0), ValidationError);
}

TEST_CASE("thrust coefficient normalization") {
    const VehicleParams p;
    CHECK(thrust_coefficient(1.0, 2.0, 3.0, 4.0, 5.0) ==
          doctest::Approx(0.0005555555555555556).epsilon(1e-14));
    CHECK(coaxial_thrust_coefficient(1.0, 2.0, 2.0, 3.0, 4.0, 5.0) ==
          doctest::Approx(0.0016666666666666668).epsilon(1e-14));
    // Consistency: C_T recovers the thrust law when A b^2 = 1.
    const double T = rotor_thrust(100.0, p.rho_air, p);
    CHECK(thrust_coefficient(T, p.rho_air, 100.0, 1.0, 1.0) ==
          doctest::Approx(p.K_T).epsilon(1e-12));
    CHECK_THROWS_AS(thrust_coefficient(1.0, 1.0, 0.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("total thrust sums per-rotor media") {
    const VehicleParams p;
    const std::vector<double> omegas{100.0, 200.0, 50.0, 0.0};
    const std::vector<double> rhos{1.225, 999.97, 1.225, 999.97};
    double want = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i)
        want += p.K_T * rhos[i] * omegas[i] * omegas[i];
    CHECK(total_thrust(omegas, rhos, p) == doctest::Approx(want).epsilon(1e-15));
    CHECK_THROWS_AS(total_thrust(omegas, std::vector<double>{1.0}, p), ValidationError);
}

TEST_CASE("standard geometry layout") {
    const RotorGeometry g = RotorGeometry::standard(0.05);
    CHECK_NOTHROW(g.validate());
    int plus = 0, upper = 0;
    double az_sin = 0.0, az_cos = 0.0;
    for (const Rotor& r : g.rotors) {
        plus += r.spin > 0 ? 1 : 0;
        upper += r.station > 0.0 ? 1 : 0;
        CHECK(std::abs(r.station) == 0.05);
        az_sin += std::sin(r.azimuth);
        az_cos += std::cos(r.azimuth);
    }
    CHECK(plus == 4);
    CHECK(upper == 4);
    // Symmetric layout: azimuth unit vectors cancel.
    CHECK(std::abs(az_sin) < 1e-14);
    CHECK(std::abs(az_cos) < 1e-14);
    // Coaxial pairs counter-rotate.
    for (int arm = 0; arm < 4; ++arm)
        CHECK(g.rotors[2 * arm].spin == -g.rotors[2 * arm + 1].spin);
}

TEST_CASE("single rotor control torque matches the moment formulas") {
    const VehicleParams p;
    const RotorGeometry g = RotorGeometry::standard();
    std::vector<double> omegas(8, 0.0), rhos(8, p.rho_air);
    omegas[0] = 300.0;
    const Vec3 tau = control_torque(omegas, rhos, g, p);
    const Rotor& r = g.rotors[0];
    const double w2 = 300.0 * 300.0;
    CHECK(tau.x == doctest::Approx(p.K_T * p.d * std::sin(r.azimuth) * p.rho_air * w2)
                       .epsilon(1e-14));
    CHECK(tau.y == doctest::Approx(-p.K_T * p.d * std::cos(r.azimuth) * p.rho_air * w2)
                       .epsilon(1e-14));
    CHECK(tau.z ==
          doctest::Approx(p.K_Q * r.spin * p.rho_air * w2).epsilon(1e-14));
}

TEST_CASE("uniform speeds produce zero net torque") {
    const VehicleParams p;
    const RotorGeometry g = RotorGeometry::standard();
    const std::vector<double> omegas(8, 400.0), rhos(8, p.rho_air);
    const Vec3 tau = control_torque(omegas, rhos, g, p);
    CHECK(std::abs(tau.x) < 1e-12);
    CHECK(std::abs(tau.y) < 1e-12);
    CHECK(std::abs(tau.z) < 1e-12);
    // Counter-rotating pairs cancel the gyroscopic term too.
    const Vec3 gyro = gyroscopic_torque({0.1, -0.2, 0.05}, omegas, g, p);
    CHECK(std::abs(gyro.x) < 1e-15);
    CHECK(std::abs(gyro.y) < 1e-15);
    CHECK(std::abs(gyro.z) < 1e-15);
}

TEST_CASE("gyroscopic torque follows body rate cross spin axis") {
    const VehicleParams p;
    const RotorGeometry g = RotorGeometry::standard();
    std::vector<double> omegas(8, 0.0), rhos(8, p.rho_air);
    omegas[0] = 500.0;  // one spinning rotor leaves a net term
    const Vec3 rate{0.2, 0.4, 0.0};
    const Vec3 tau = gyroscopic_torque(rate, omegas, g, p);
    const double net = -g.rotors[0].spin * 500.0;
    // (p, q, r) x z_hat = (q, -p, 0)
    CHECK(tau.x == doctest::Approx(p.I_r * net * rate.y).epsilon(1e-14));
    CHECK(tau.y == doctest::Approx(-p.I_r * net * rate.x).epsilon(1e-14));
    CHECK(tau.z == 0.0);
}

TEST_CASE("drag opposes motion quadratically") {
    const VehicleParams p;
    const Vec3 f = drag_force({2.0, 0.0, 0.0}, p.rho_air, p);
    CHECK(f.x == doctest::Approx(-0.120736).epsilon(1e-12));
    CHECK(f.y == 0.0);
    CHECK(f.z == 0.0);
    const Vec3 zero = drag_force({0.0, 0.0, 0.0}, p.rho_water, p);
    CHECK(zero.norm() == 0.0);
    // Magnitude scales with speed squared and density.
    const Vec3 f2 = drag_force({0.0, 0.0, -4.0}, p.rho_water, p);
    CHECK(f2.z == doctest::Approx(0.5 * p.rho_water * p.C_d * p.A_ref * 16.0)
                      .epsilon(1e-12));
}

TEST_CASE("parameter validation names every violation") {
    VehicleParams p;
    p.m = -1.0;
    p.K_T = 0.0;
    try {
        p.validate();
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("m") != std::string::npos);
        CHECK(msg.find("K_t") != std::string::npos);
    }
    VehicleParams q;
    q.rho_water = 1.0;  // must exceed rho_air
    CHECK_THROWS_AS(q.validate(), ValidationError);
    CHECK_NOTHROW(VehicleParams{}.validate());
}

TEST_CASE("geometry validation rejects unbalanced spin sets") {
    RotorGeometry g = RotorGeometry::standard();
    g.rotors[0].spin = -g.rotors[0].spin;  // five minus, three plus
    CHECK_THROWS_AS(g.validate(), ValidationError);
    RotorGeometry h = RotorGeometry::standard();
    h.rotors[3].spin = 2;
    CHECK_THROWS_AS(h.validate(), ValidationError);
}
