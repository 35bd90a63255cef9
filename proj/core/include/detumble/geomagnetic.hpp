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

#ifndef DETUMBLE_GEOMAGNETIC_HPP
#define DETUMBLE_GEOMAGNETIC_HPP

#include "detumble/attitude.hpp"

namespace detumble {

enum class DipoleMode { aligned, tilted };

/// Centred dipole field. In tilted mode the dipole axis is inclined by
/// `tilt_deg` from the spin axis and co-rotates with the Earth.
struct DipoleModelConfig {
    double b0 = 3.12e-5;               // equatorial surface field [T]
    double tilt_deg = 11.44;
    double earth_rate = 7.2921e-5;     // [rad/s]
    double initial_phase_deg = 0.0;    // dipole longitude at t = 0
    DipoleMode mode = DipoleMode::tilted;

    void validate() const;
};

/// Unit vector along the dipole moment (pointing into the southern
/// hemisphere, like the Earth's).
Vec3 dipole_axis(double t, const DipoleModelConfig& cfg);

/// B = B0 (Re/|r|)^3 [3 (m.r^) r^ - m] in the inertial frame [T].
Vec3 dipole_field_inertial(const Vec3& position_km, double t, const DipoleModelConfig& cfg);

Vec3 field_in_body(const AttitudeQuaternion& q, const Vec3& field_inertial);

/// Backward finite difference (b_curr - b_prev) / dt of the body-frame field.
Vec3 bdot_estimate(const Vec3& b_prev, const Vec3& b_curr, double dt);

}  // namespace detumble

#endif  // DETUMBLE_GEOMAGNETIC_HPP
