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

#include "detumble/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace detumble {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr int kKeplerMaxIterations = 50;
constexpr double kKeplerTolerance = 1e-12;

}  // namespace

void OrbitalElements::validate() const {
    if (!(semi_major_axis > kEarthRadius)) {
        throw std::invalid_argument("semi_major_axis must exceed the Earth radius");
    }
    if (!(eccentricity >= 0.0 && eccentricity < 1.0)) {
        throw std::invalid_argument("eccentricity must lie in [0, 1)");
    }
    for (double angle : {inclination, raan, arg_perigee, mean_anomaly_epoch}) {
        if (!std::isfinite(angle)) {
            throw std::invalid_argument("orbital angles must be finite");
        }
    }
}

double solve_kepler(double mean_anomaly, double eccentricity) {
    if (!(eccentricity >= 0.0 && eccentricity < 1.0)) {
        throw std::invalid_argument("solve_kepler: eccentricity must lie in [0, 1)");
    }
    // |E - M| = e |sin E| <= e brackets the root.
    const double lo = mean_anomaly - eccentricity;
    const double hi = mean_anomaly + eccentricity;
    double e_anom = mean_anomaly;
    for (int iter = 0; iter < kKeplerMaxIterations; ++iter) {
        const double residual = e_anom - eccentricity * std::sin(e_anom) - mean_anomaly;
        if (std::abs(residual) < kKeplerTolerance) {
            return e_anom;
        }
        const double slope = 1.0 - eccentricity * std::cos(e_anom);
        e_anom = std::clamp(e_anom - residual / slope, lo, hi);
    }
    throw std::runtime_error("solve_kepler: Newton iteration did not converge");
}

double orbital_period(const OrbitalElements& elements) {
    const double a = elements.semi_major_axis;
    return 2.0 * std::numbers::pi * std::sqrt(a * a * a / kEarthMu);
}

Vec3 propagate_position(const OrbitalElements& elements, double t) {
    if (t < 0.0) {
        throw std::invalid_argument("propagate_position: t must be non-negative");
    }
    const double a = elements.semi_major_axis;
    const double e = elements.eccentricity;
    const double mean_motion = std::sqrt(kEarthMu / (a * a * a));
    const double mean_anomaly = elements.mean_anomaly_epoch * kDegToRad + mean_motion * t;
    const double ecc_anomaly = solve_kepler(std::remainder(mean_anomaly, 2.0 * std::numbers::pi), e);

    const Vec3 perifocal{a * (std::cos(ecc_anomaly) - e),
                         a * std::sqrt(1.0 - e * e) * std::sin(ecc_anomaly), 0.0};

    const Eigen::Matrix3d to_inertial =
        (Eigen::AngleAxisd(elements.raan * kDegToRad, Vec3::UnitZ()) *
         Eigen::AngleAxisd(elements.inclination * kDegToRad, Vec3::UnitX()) *
         Eigen::AngleAxisd(elements.arg_perigee * kDegToRad, Vec3::UnitZ()))
            .toRotationMatrix();
    return to_inertial * perifocal;
}

}  // namespace detumble
