/*
 Copyright 2026 The detumble Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "detumble/attitude.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace detumble {

void InertiaTensor::validate() const {
    auto check_positive = [](double value, const char* name) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw std::invalid_argument(std::string(name) + " must be a positive finite moment of inertia");
        }
    };
    check_positive(jx, "jx");
    check_positive(jy, "jy");
    check_positive(jz, "jz");
    if (jx + jy < jz || jy + jz < jx || jz + jx < jy) {
        throw std::invalid_argument("jx, jy, jz violate the triangle inequality");
    }
}

AttitudeQuaternion AttitudeQuaternion::from_axis_angle(const Vec3& axis, double angle) {
    const Vec3 unit = axis.normalized();
    const double half = 0.5 * angle;
    const double s = std::sin(half);
    return {std::cos(half), s * unit.x(), s * unit.y(), s * unit.z()};
}

AttitudeQuaternion AttitudeQuaternion::normalized() const {
    return AttitudeQuaternion(coeffs_ / coeffs_.norm());
}

Eigen::Matrix3d AttitudeQuaternion::body_to_inertial() const {
    const double w = coeffs_[0];
    const double x = coeffs_[1];
    const double y = coeffs_[2];
    const double z = coeffs_[3];
    Eigen::Matrix3d r;
    r << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
         2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
         2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y);
    return r;
}

Vec3 AttitudeQuaternion::to_body(const Vec3& inertial) const {
    return body_to_inertial().transpose() * inertial;
}

Vec3 magnetic_torque(const Vec3& dipole, const Vec3& field) {
    return dipole.cross(field);
}

Vec3 euler_rates(const Vec3& omega, const Vec3& torque, const InertiaTensor& inertia) {
    const auto& [jx, jy, jz] = inertia;
    return {((jy - jz) * omega.y() * omega.z() + torque.x()) / jx,
            ((jz - jx) * omega.z() * omega.x() + torque.y()) / jy,
            ((jx - jy) * omega.x() * omega.y() + torque.z()) / jz};
}

Vec4 quaternion_rate(const AttitudeQuaternion& q, const Vec3& omega) {
    const Vec3 v = q.vec();
    Vec4 rate;
    rate[0] = -0.5 * v.dot(omega);
    rate.tail<3>() = 0.5 * (q.w() * omega + v.cross(omega));
    return rate;
}

double lyapunov_value(const Vec3& omega, const InertiaTensor& inertia) {
    return 0.5 * omega.dot(inertia.diagonal().cwiseProduct(omega));
}

double lyapunov_rate(const Vec3& omega, const Vec3& torque) {
    return omega.dot(torque);
}

}  // namespace detumble
