#include "amphibsim/geom.hpp"

#include <cmath>

#include "amphibsim/errors.hpp"

namespace amphibsim {

namespace {
constexpr double kHalfPi = 1.5707963267948966;
constexpr double kPitchSingularityMargin = 1e-9;
}  // namespace

Vec3 Mat3::operator*(const Vec3& v) const {
    return {a[0] * v.x + a[1] * v.y + a[2] * v.z,
            a[3] * v.x + a[4] * v.y + a[5] * v.z,
            a[6] * v.x + a[7] * v.y + a[8] * v.z};
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 out;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += (*this)(r, k) * o(k, c);
            out(r, c) = s;
        }
    }
    return out;
}

Mat3 Mat3::transposed() const {
    Mat3 out;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) out(r, c) = (*this)(c, r);
    return out;
}

Mat3 Mat3::identity() {
    Mat3 out;
    out.a = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return out;
}

Mat3 rotation_matrix(const EulerAngles& e) {
    if (!(std::isfinite(e.yaw) && std::isfinite(e.pitch) && std::isfinite(e.roll))) {
        throw ValidationError("rotation_matrix: angles must be finite");
    }
    if (std::abs(std::abs(e.pitch) - kHalfPi) < kPitchSingularityMargin) {
        throw ValidationError(
            "rotation_matrix: pitch is within 1e-9 of +/-pi/2 where the "
            "3-2-1 sequence is singular");
    }
    const double cphi = std::cos(e.roll), sphi = std::sin(e.roll);
    const double cth = std::cos(e.pitch), sth = std::sin(e.pitch);
    const double cpsi = std::cos(e.yaw), spsi = std::sin(e.yaw);

    // Rows are the body axes expressed in inertial coordinates:
    // R = R_x(phi) * R_y(theta) * R_z(psi).
    Mat3 r;
    r.a = {cth * cpsi,
           cth * spsi,
           -sth,
           sphi * sth * cpsi - cphi * spsi,
           sphi * sth * spsi + cphi * cpsi,
           sphi * cth,
           cphi * sth * cpsi + sphi * spsi,
           cphi * sth * spsi - sphi * cpsi,
           cphi * cth};
    return r;
}

Mat3 inverse_rotation(const Mat3& r) { return r.transposed(); }

Vec3 body_to_inertial(const Vec3& v_body, const EulerAngles& e) {
    return rotation_matrix(e).transposed() * v_body;
}

Vec3 inertial_to_body(const Vec3& v_inertial, const EulerAngles& e) {
    return rotation_matrix(e) * v_inertial;
}

double orthonormality_defect(const Mat3& r) {
    const Mat3 g = r.transposed() * r;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(g(i, j) - target));
        }
    }
    return worst;
}

}  // namespace amphibsim
