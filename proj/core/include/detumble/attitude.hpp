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

#ifndef DETUMBLE_ATTITUDE_HPP
#define DETUMBLE_ATTITUDE_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace detumble {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

/// Principal moments of inertia [kg m^2]. The body frame is assumed to be
/// aligned with the principal axes.
struct InertiaTensor {
    double jx = 0.0;
    double jy = 0.0;
    double jz = 0.0;

    /// Throws std::invalid_argument if a moment is non-positive or the
    /// triangle inequalities are violated.
    void validate() const;

    Vec3 diagonal() const { return {jx, jy, jz}; }
};

/// Unit quaternion stored scalar-first as (w, x, y, z).
///
/// The quaternion describes the body attitude: it maps body-frame vectors
/// into the inertial frame, so `to_body` applies the transpose rotation and
/// brings inertial vectors (e.g. the geomagnetic field) into the body frame.
class AttitudeQuaternion {
public:
    AttitudeQuaternion() = default;
    AttitudeQuaternion(double w, double x, double y, double z) : coeffs_(w, x, y, z) {}
    explicit AttitudeQuaternion(const Vec4& coeffs) : coeffs_(coeffs) {}

    static AttitudeQuaternion identity() { return {}; }
    static AttitudeQuaternion from_axis_angle(const Vec3& axis, double angle);

    double w() const { return coeffs_[0]; }
    Vec3 vec() const { return coeffs_.tail<3>(); }
    const Vec4& coeffs() const { return coeffs_; }

    double norm() const { return coeffs_.norm(); }
    AttitudeQuaternion normalized() const;

    /// Rotation matrix taking body-frame vectors into the inertial frame.
    Eigen::Matrix3d body_to_inertial() const;
    Vec3 to_body(const Vec3& inertial) const;

private:
    Vec4 coeffs_{1.0, 0.0, 0.0, 0.0};
};

/// T = m x B.
Vec3 magnetic_torque(const Vec3& dipole, const Vec3& field);

/// Euler's rotational equations for a principal-axis rigid body.
Vec3 euler_rates(const Vec3& omega, const Vec3& torque, const InertiaTensor& inertia);

/// qdot = 1/2 q (x) (0, omega), with omega expressed in the body frame.
Vec4 quaternion_rate(const AttitudeQuaternion& q, const Vec3& omega);

/// Rotational kinetic energy 1/2 w^T J w [J].
double lyapunov_value(const Vec3& omega, const InertiaTensor& inertia);

/// Time derivative of the kinetic energy under torque T: w^T T [W].
double lyapunov_rate(const Vec3& omega, const Vec3& torque);

}  // namespace detumble

#endif  // DETUMBLE_ATTITUDE_HPP
