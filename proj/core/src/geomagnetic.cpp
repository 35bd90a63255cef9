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

#include "detumble/geomagnetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "detumble/orbit.hpp"

namespace detumble {
namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

void DipoleModelConfig::validate() const {
    if (!(b0 > 0.0)) {
        throw std::invalid_argument("b0 must be positive");
    }
    if (!(tilt_deg >= 0.0 && tilt_deg <= 20.0)) {
        throw std::invalid_argument("tilt_deg must lie in [0, 20]");
    }
    if (!std::isfinite(earth_rate) || !std::isfinite(initial_phase_deg)) {
        throw std::invalid_argument("earth_rate and initial_phase_deg must be finite");
    }
}

Vec3 dipole_axis(double t, const DipoleModelConfig& cfg) {
    if (cfg.mode == DipoleMode::aligned) {
        return -Vec3::UnitZ();
    }
    const double colatitude = cfg.tilt_deg * kDegToRad;
    const double longitude = cfg.initial_phase_deg * kDegToRad + cfg.earth_rate * t;
    return -Vec3{std::sin(colatitude) * std::cos(longitude),
                 std::sin(colatitude) * std::sin(longitude), std::cos(colatitude)};
}

Vec3 dipole_field_inertial(const Vec3& position_km, double t, const DipoleModelConfig& cfg) {
    const double r = position_km.norm();
    const Vec3 r_hat = position_km / r;
    const Vec3 m_hat = dipole_axis(t, cfg);
    const double scale = cfg.b0 * std::pow(kEarthRadius / r, 3);
    return scale * (3.0 * m_hat.dot(r_hat) * r_hat - m_hat);
}

Vec3 field_in_body(const AttitudeQuaternion& q, const Vec3& field_inertial) {
    return q.to_body(field_inertial);
}

Vec3 bdot_estimate(const Vec3& b_prev, const Vec3& b_curr, double dt) {
    return (b_curr - b_prev) / dt;
}

}  // namespace detumble
