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

#include "detumble/bdot.hpp"

#include <algorithm>

namespace detumble {

Vec3 bdot_command_full(const Vec3& bdot, double m_max) {
    const double rate = bdot.norm();
    if (rate < kBdotEpsilon) {
        return Vec3::Zero();
    }
    return -m_max * bdot / rate;
}

Vec3 bdot_command_single_axis(const Vec3& bdot, double m_max) {
    const double rate = bdot.norm();
    if (rate < kBdotEpsilon) {
        return Vec3::Zero();
    }
    const double mx = std::clamp(-m_max * bdot.x() / rate, -m_max, m_max);
    return {mx, 0.0, 0.0};
}

}  // namespace detumble
