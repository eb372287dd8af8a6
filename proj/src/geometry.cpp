// SPDX-License-Identifier: Apache-2.0
//
// rissim: RIS-assisted link simulation and discrete phase-shift beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rissim/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rissim
{

void UnitCell::validate() const
{
    if (!(width_a > 0.0) || !(height_b > 0.0))
        throw std::invalid_argument("UnitCell: aperture sizes must be positive");
    if (!(amplitude_response > 0.0) || amplitude_response > 1.0)
        throw std::invalid_argument("UnitCell: amplitude response must be in (0, 1]");
    const std::size_t n = phase_states.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("UnitCell: number of phase states must be a power of two");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(std::remainder(phase_states[i] - phase_states[j], 2.0 * pi)) < 1e-12)
                throw std::invalid_argument("UnitCell: phase states must be distinct modulo 2*pi");
}

Pose Pose::facing(const Vec3d &position, const Vec3d &target, const Vec3d &up)
{
    Vec3d z = target - position;
    const double n = z.norm();
    if (n < 1e-12)
        throw degenerate_geometry("Pose::facing: target coincides with position");
    z /= n;
    Vec3d ref = up;
    if (std::abs(z.dot(ref.normalized())) > 1.0 - 1e-9)
        ref = Vec3d(1, 0, 0); // boresight parallel to `up`, pick another reference
    Vec3d x = ref.cross(z).normalized();
    Vec3d y = z.cross(x);
    Pose p;
    p.position = position;
    p.rotation.col(0) = x;
    p.rotation.col(1) = y;
    p.rotation.col(2) = z;
    return p;
}

void Pose::validate(double tol) const
{
    if ((rotation.transpose() * rotation - Mat3d::Identity()).cwiseAbs().maxCoeff() > tol)
        throw std::invalid_argument("Pose: rotation columns are not orthonormal");
}

void RisPanel::validate() const
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("RisPanel: rows and cols must be >= 1");
    unit.validate();
    if (spacing_x < unit.width_a || spacing_y < unit.height_b)
        throw std::invalid_argument("RisPanel: unit spacing must be at least the unit aperture");
    pose.validate();
}

void Antenna::validate() const
{
    if (!(gain > 0.0))
        throw std::invalid_argument("Antenna: gain must be positive");
    if (pattern_exponent < 0.0)
        throw std::invalid_argument("Antenna: pattern exponent must be >= 0");
    pose.validate();
}

SphericalDirection local_angles(const Pose &pose, const Vec3d &point)
{
    const Vec3d v = pose.to_local(point);
    const double r = v.norm();
    if (r < 1e-12)
        throw degenerate_geometry("local_angles: point coincides with the frame origin");
    SphericalDirection d;
    d.elevation = std::acos(std::clamp(v.z() / r, -1.0, 1.0));
    d.azimuth = (v.head<2>().norm() < 1e-15) ? 0.0 : wrap_azimuth(std::atan2(v.y(), v.x()));
    return d;
}

double pattern_gain(double pattern_exponent, double elevation)
{
    if (elevation >= pi / 2.0)
        return 0.0;
    if (pattern_exponent == 0.0)
        return 1.0;
    return std::pow(std::cos(elevation), pattern_exponent);
}

double pattern_gain(const Antenna &antenna, const SphericalDirection &dir)
{
    return pattern_gain(antenna.pattern_exponent, dir.elevation);
}

} // namespace rissim
