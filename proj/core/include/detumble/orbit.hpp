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

#ifndef DETUMBLE_ORBIT_HPP
#define DETUMBLE_ORBIT_HPP

#include "detumble/attitude.hpp"

namespace detumble {

inline constexpr double kEarthMu = 398600.4418;        // [km^3/s^2]
inline constexpr double kEarthRadius = 6378.137;       // equatorial [km]

/// Classical Keplerian elements. Angles in degrees, distances in km.
struct OrbitalElements {
    double semi_major_axis = 0.0;
    double eccentricity = 0.0;
    double inclination = 0.0;
    double raan = 0.0;
    double arg_perigee = 0.0;
    double mean_anomaly_epoch = 0.0;

    void validate() const;
};

/// Solves E - e sin E = M by safeguarded Newton iteration seeded at M.
/// Throws std::runtime_error if the residual does not drop below 1e-12 rad
/// within 50 iterations.
double solve_kepler(double mean_anomaly, double eccentricity);

double orbital_period(const OrbitalElements& elements);

/// Two-body position in the Earth-centred inertial frame [km], `t` seconds
/// after the element epoch.
Vec3 propagate_position(const OrbitalElements& elements, double t);

}  // namespace detumble

#endif  // DETUMBLE_ORBIT_HPP
