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

#ifndef RISSIM_GEOMETRY_HPP
#define RISSIM_GEOMETRY_HPP

#include "rissim/errors.hpp"
#include "rissim/types.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace rissim
{

// Angle convention, fixed across the whole library:
//   azimuth   in [-pi, pi), measured in the local x/y plane from +x,
//   elevation in [0, pi],   measured from the local +z axis (panel normal
//                           or antenna boresight).
struct SphericalDirection
{
    double azimuth = 0.0;
    double elevation = 0.0;
};

inline double wrap_azimuth(double a)
{
    a = std::remainder(a, 2.0 * pi); // (-pi, pi]
    return (a == pi) ? -pi : a;
}

// Unit direction vector in the local frame of the given convention.
inline Vec3d direction_vector(const SphericalDirection &d)
{
    const double se = std::sin(d.elevation);
    return {se * std::cos(d.azimuth), se * std::sin(d.azimuth), std::cos(d.elevation)};
}

// One reflecting element: physical aperture, amplitude response and the
// discrete reflection phase alphabet.
struct UnitCell
{
    double width_a = 0.0;                  // aperture size along local x [m]
    double height_b = 0.0;                 // aperture size along local y [m]
    double amplitude_response = 1.0;       // |Gamma| per state, in (0, 1]
    std::vector<double> phase_states;      // state phases [rad], length 2^bits

    static UnitCell uniform(int bits, double a, double b, double amplitude = 1.0)
    {
        UnitCell u;
        u.width_a = a;
        u.height_b = b;
        u.amplitude_response = amplitude;
        const int n = 1 << bits;
        u.phase_states.resize(n);
        for (int s = 0; s < n; ++s)
            u.phase_states[s] = 2.0 * pi * s / n;
        return u;
    }

    int bits() const
    {
        int b = 0;
        while ((std::size_t{1} << b) < phase_states.size())
            ++b;
        return b;
    }

    Complexd reflection_coefficient(int state) const
    {
        return amplitude_response * std::polar(1.0, phase_states.at(static_cast<std::size_t>(state)));
    }

    void validate() const;
};

// Rigid placement. Columns of `rotation` are the local x, y, z axes expressed
// in world coordinates; local z is the outward panel normal / boresight.
struct Pose
{
    Vec3d position = Vec3d::Zero();
    Mat3d rotation = Mat3d::Identity();

    Vec3d normal() const { return rotation.col(2); }

    Vec3d to_local(const Vec3d &world_point) const
    {
        return rotation.transpose() * (world_point - position);
    }

    Vec3d to_world(const Vec3d &local_point) const
    {
        return rotation * local_point + position;
    }

    // Pose whose +z axis points from `position` toward `target`. The in-plane
    // axes are fixed deterministically from `up` (default world +z, with a
    // fallback when the boresight is vertical).
    static Pose facing(const Vec3d &position, const Vec3d &target, const Vec3d &up = Vec3d(0, 0, 1));

    void validate(double tol = 1e-12) const;
};

struct RisPanel
{
    int rows = 0;       // N_l, along local y
    int cols = 0;       // N_c, along local x
    double spacing_x = 0.0;
    double spacing_y = 0.0;
    UnitCell unit;
    Pose pose;

    int unit_count() const { return rows * cols; }

    // Row-major unit index.
    int unit_index(int r, int c) const { return r * cols + c; }

    // Unit center in world coordinates; the grid is centered on the pose origin.
    Vec3d unit_position(int r, int c) const
    {
        const double x = (c - 0.5 * (cols - 1)) * spacing_x;
        const double y = (r - 0.5 * (rows - 1)) * spacing_y;
        return pose.to_world(Vec3d(x, y, 0.0));
    }

    double diagonal() const
    {
        const double w = cols * spacing_x;
        const double h = rows * spacing_y;
        return std::sqrt(w * w + h * h);
    }

    void validate() const;
};

struct Antenna
{
    Pose pose;
    double gain = 1.0;              // linear boresight gain
    double pattern_exponent = 0.0;  // q in cos^q(elevation); q = 0 is isotropic over the front hemisphere

    void validate() const;
};

// Uniform-planar-array steering vector, entries
//   (1/sqrt(n1*n2)) * exp(j*pi*(p*sin(az)*sin(el) + q*cos(el)))
// enumerated over the rectangular index grid p in 0..n1-1, q in 0..n2-1
// (p fastest), with half-wavelength spacing folded into the pi factor.
template <typename T>
CVec<T> upa_steering_vector(const SphericalDirection &dir, int n1, int n2)
{
    if (n1 < 1 || n2 < 1)
        throw std::invalid_argument("upa_steering_vector: array dimensions must be >= 1");
    const T u = std::sin(T(dir.azimuth)) * std::sin(T(dir.elevation));
    const T v = std::cos(T(dir.elevation));
    const T norm = T(1) / std::sqrt(T(n1) * T(n2));
    CVec<T> a(static_cast<Eigen::Index>(n1) * n2);
    Eigen::Index k = 0;
    for (int q = 0; q < n2; ++q)
        for (int p = 0; p < n1; ++p)
            a[k++] = std::polar(norm, T(pi) * (T(p) * u + T(q) * v));
    return a;
}

// Direction of a world-space point in the local frame of `pose`
// (elevation measured from the +z normal).
SphericalDirection local_angles(const Pose &pose, const Vec3d &point);

// Normalized power radiation pattern cos^q(elevation) over the front
// hemisphere; zero at and behind elevation pi/2. Unity at boresight.
double pattern_gain(const Antenna &antenna, const SphericalDirection &dir);
double pattern_gain(double pattern_exponent, double elevation);

} // namespace rissim

#endif
