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

#ifndef DETUMBLE_BDOT_HPP
#define DETUMBLE_BDOT_HPP

#include "detumble/attitude.hpp"

namespace detumble {

/// Below this field-rate magnitude [T/s] the B-dot laws command zero dipole.
inline constexpr double kBdotEpsilon = 1e-12;

/// m = -m_max * bdot / |bdot| (three-axis torquer).
Vec3 bdot_command_full(const Vec3& bdot, double m_max);

/// x-row of the three-axis law; the torquer can only produce m_x. The
/// normalisation still uses the full |bdot|.
Vec3 bdot_command_single_axis(const Vec3& bdot, double m_max);

}  // namespace detumble

#endif  // DETUMBLE_BDOT_HPP
