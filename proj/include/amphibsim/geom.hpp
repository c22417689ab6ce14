#pragma once

#include <array>
#include <cmath>

namespace amphibsim {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    bool is_finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Attitude as a 3-2-1 rotation sequence: yaw psi about Z, pitch theta about
// the intermediate Y, roll phi about the final X.  Angles in radians.
struct EulerAngles {
    double yaw = 0.0;
    double pitch = 0.0;
    double roll = 0.0;
};

// Dense 3x3 matrix, row major.
struct Mat3 {
    std::array<double, 9> a{};

    double operator()(int r, int c) const { return a[3 * r + c]; }
    double& operator()(int r, int c) { return a[3 * r + c]; }

    Vec3 operator*(const Vec3& v) const;
    Mat3 operator*(const Mat3& o) const;
    Mat3 transposed() const;

    static Mat3 identity();
};

// Direction cosine matrix taking inertial coordinates to body coordinates for
// the 3-2-1 sequence above.  Throws ValidationError for non-finite angles or
// |pitch| within 1e-9 of pi/2, where the sequence is singular.
Mat3 rotation_matrix(const EulerAngles& e);

// Inverse of a rotation: its transpose.  The caller guarantees r is a
// proper rotation; no orthonormality check is performed here.
Mat3 inverse_rotation(const Mat3& r);

// Maps a body-frame vector into the inertial frame (transpose action).
Vec3 body_to_inertial(const Vec3& v_body, const EulerAngles& e);

// Maps an inertial-frame vector into the body frame.
Vec3 inertial_to_body(const Vec3& v_inertial, const EulerAngles& e);

// Max absolute deviation of r^T r from the identity; 0 for a perfect rotation.
double orthonormality_defect(const Mat3& r);

}  // namespace amphibsim
