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

#ifndef RISSIM_TYPES_HPP
#define RISSIM_TYPES_HPP

#include <Eigen/Dense>
#include <complex>

namespace rissim
{

template <typename T> using Vec3 = Eigen::Matrix<T, 3, 1>;
template <typename T> using Mat3 = Eigen::Matrix<T, 3, 3>;
template <typename T> using CVec = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, 1>;
template <typename T> using CMat = Eigen::Matrix<std::complex<T>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename T> using CVec3 = Eigen::Matrix<std::complex<T>, 3, 1>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;
using CVecd = CVec<double>;
using CMatd = CMat<double>;
using CVec3d = CVec3<double>;
using Complexd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Free-space wave impedance used throughout the field <-> power conversions.
// The value cancels in every power ratio; it only has to be used consistently.
inline constexpr double eta0 = 120.0 * pi;

inline double deg2rad(double deg) { return deg * pi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / pi; }

inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin2db(double lin) { return 10.0 * std::log10(lin); }

// sin(x)/x with the removable singularity evaluated by series below |x| < 1e-8
template <typename T>
T sinc(T x)
{
    if (std::abs(x) < T(1e-8))
        return T(1) - x * x / T(6);
    return std::sin(x) / x;
}

} // namespace rissim

#endif
