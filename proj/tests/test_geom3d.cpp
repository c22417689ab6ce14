#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numbers>

#include "amphibsim/errors.hpp"
#include "amphibsim/geom.hpp"

using namespace amphibsim;

namespace {

// Deterministic uniform generator for property checks.
struct UniformRng {
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    double next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return std::ldexp(static_cast<double>(state >> 11), -53);
    }
    double range(double lo, double hi) { return lo + (hi - lo) * next(); }
};

// Elementary axis rotations composed in the 3-2-1 order, as an independent
// construction of the same matrix.
Mat3 axis_x(double a) {
    Mat3 m = Mat3::identity();
    m(1, 1) = std::cos(a);
    m(1, 2) = std::sin(a);
    m(2, 1) = -std::sin(a);
    m(2, 2) = std::cos(a);
    return m;
}

Mat3 axis_y(double a) {
    Mat3 m = Mat3::identity();
    m(0, 0) = std::cos(a);
    m(0, 2) = -std::sin(a);
    m(2, 0) = std::sin(a);
    m(2, 2) = std::cos(a);
    return m;
}

Mat3 axis_z(double a) {
    Mat3 m = Mat3::identity();
    m(0, 0) = std::cos(a);
    m(0, 1) = std::sin(a);
    m(1, 0) = -std::sin(a);
    m(1, 1) = std::cos(a);
    return m;
}

double det(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

}  // namespace

TEST_CASE("vector algebra basics") {
    const Vec3 x{1.0, 0.0, 0.0};
    const Vec3 y{0.0, 1.0, 0.0};
    const Vec3 c = x.cross(y);
    CHECK(c.x == 0.0);
    CHECK(c.y == 0.0);
    CHECK(c.z == 1.0);
    CHECK(Vec3{3.0, 4.0, 0.0}.norm() == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(x.dot(y) == 0.0);
    CHECK((2.0 * y).y == 2.0);
    CHECK(Vec3{1.0, 2.0, 3.0}.dot(Vec3{4.0, 5.0, 6.0}) == 32.0);
}

TEST_CASE("quarter yaw rotation matrix") {
    const Mat3 r = rotation_matrix({std::numbers::pi / 2.0, 0.0, 0.0});
    const double want[9] = {0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(r(i, j) == doctest::Approx(want[3 * i + j]).epsilon(1e-15).scale(1.0));
}

TEST_CASE("first row carries the yaw-pitch direction cosines") {
    UniformRng rng;
    for (int k = 0; k < 100; ++k) {
        const double psi = rng.range(-3.0, 3.0);
        const double theta = rng.range(-1.4, 1.4);
        const double phi = rng.range(-3.0, 3.0);
        const Mat3 r = rotation_matrix({psi, theta, phi});
        CHECK(std::abs(r(0, 0) - std::cos(theta) * std::cos(psi)) < 1e-14);
        CHECK(std::abs(r(0, 1) - std::cos(theta) * std::sin(psi)) < 1e-14);
        CHECK(std::abs(r(0, 2) + std::sin(theta)) < 1e-14);
    }
}

TEST_CASE("matches the composition of elementary rotations") {
    UniformRng rng;
    for (int k = 0; k < 200; ++k) {
        const double psi = rng.range(-3.1, 3.1);
        const double theta = rng.range(-1.5, 1.5);
        const double phi = rng.range(-3.1, 3.1);
        const Mat3 r = rotation_matrix({psi, theta, phi});
        const Mat3 ref = axis_x(phi) * axis_y(theta) * axis_z(psi);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(std::abs(r(i, j) - ref(i, j)) < 1e-14);
    }
}

TEST_CASE("rotations stay orthonormal with unit determinant") {
    UniformRng rng;
    for (int k = 0; k < 1000; ++k) {
        const Mat3 r = rotation_matrix(
            {rng.range(-6.3, 6.3), rng.range(-1.55, 1.55), rng.range(-6.3, 6.3)});
        CHECK(orthonormality_defect(r) < 1e-12);
        CHECK(std::abs(det(r) - 1.0) < 1e-12);
    }
}

TEST_CASE("frame round trip returns the original vector") {
    UniformRng rng;
    for (int k = 0; k < 200; ++k) {
        const EulerAngles e{rng.range(-3.0, 3.0), rng.range(-1.5, 1.5),
                            rng.range(-3.0, 3.0)};
        const Vec3 v{rng.range(-10.0, 10.0), rng.range(-10.0, 10.0),
                     rng.range(-10.0, 10.0)};
        const Vec3 back = body_to_inertial(inertial_to_body(v, e), e);
        CHECK(std::abs(back.x - v.x) < 1e-12);
        CHECK(std::abs(back.y - v.y) < 1e-12);
        CHECK(std::abs(back.z - v.z) < 1e-12);
    }
}

TEST_CASE("inverse rotation is the transpose") {
    const Mat3 r = rotation_matrix({0.3, 0.2, -0.7});
    const Mat3 inv = inverse_rotation(r);
    const Mat3 rt = r.transposed();
    for (int i = 0; i < 9; ++i) CHECK(inv.a[i] == rt.a[i]);
}

TEST_CASE("gimbal singularity and bad inputs are rejected") {
    CHECK_THROWS_AS(rotation_matrix({0.0, std::numbers::pi / 2.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(rotation_matrix({0.0, -std::numbers::pi / 2.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(rotation_matrix({0.0, std::numbers::pi / 2.0 - 1e-12, 0.0}),
                    ValidationError);
    CHECK_NOTHROW(rotation_matrix({0.0, std::numbers::pi / 2.0 - 1e-6, 0.0}));
    CHECK_THROWS_AS(rotation_matrix({std::nan(""), 0.0, 0.0}), ValidationError);
}
