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

#ifndef RISSIM_EM_RESPONSE_HPP
#define RISSIM_EM_RESPONSE_HPP

#include "rissim/geometry.hpp"
#include "rissim/types.hpp"

#include <limits>
#include <vector>

namespace rissim
{

class PhaseCodebook; // beamforming.hpp

// Uniform plane wave illuminating a panel. The incident direction points from
// the panel toward the source, expressed in the panel's local frame.
struct PlaneWave
{
    double amplitude = 1.0;          // E_i, RMS [V/m], >= 0
    double wavelength = 0.0;         // lambda [m], > 0
    SphericalDirection incident_dir;

    void validate() const;
};

// Scattered far field of a single unit in the spherical basis of the scatter
// direction. The radial component vanishes under the far-field approximation
// and is kept only to make that explicit.
struct ScatteredField
{
    Complexd e_r = 0.0;
    Complexd e_theta = 0.0;
    Complexd e_phi = 0.0;
};

enum class Polarization
{
    theta,
    phi
};

// Inputs of the far-field beamforming path-loss formula.
struct PathLossParams
{
    double d1 = 0.0;       // transmitter to panel distance [m]
    double d2 = 0.0;       // panel to receiver distance [m]
    double gain_tx = 1.0;  // G_t, linear
    double gain_rx = 1.0;  // G_r, linear
    double gain_unit = 1.0;// G, linear gain of one unit
    int rows = 0;          // N_l
    int cols = 0;          // N_c
    double dx = 0.0;       // unit size along x [m]
    double dy = 0.0;       // unit size along y [m]
    double wavelength = 0.0;
    double f_tx = 1.0;     // normalized radiation pattern values, in [0, 1]
    double f_rx = 1.0;
    double amplitude = 1.0;// A, unit amplitude response, in (0, 1]

    void validate() const;
};

// Product of the two normalized sinc terms of the rectangular-aperture
// directivity factor. Both removable singularities are handled analytically;
// the result is bounded by 1 in magnitude and symmetric in (scatter, incident).
template <typename T>
T sa_factor(T a, T b, const SphericalDirection &scatter, const SphericalDirection &incident, T lambda)
{
    if (!(a > T(0)) || !(b > T(0)) || !(lambda > T(0)))
        throw std::invalid_argument("sa_factor: aperture sizes and wavelength must be positive");
    const T us = std::sin(T(scatter.elevation)) * std::cos(T(scatter.azimuth));
    const T ui = std::sin(T(incident.elevation)) * std::cos(T(incident.azimuth));
    const T vs = std::sin(T(scatter.elevation)) * std::sin(T(scatter.azimuth));
    const T vi = std::sin(T(incident.elevation)) * std::sin(T(incident.azimuth));
    const T xa = T(pi) * a / lambda * (us + ui);
    const T xb = T(pi) * b / lambda * (vs + vi);
    return sinc(xa) * sinc(xb);
}

// Scattered field of one rectangular unit with reflection coefficient `gamma`
// at distance r_s in direction `scatter`, for the plane wave `wave`:
//   E = C * (ab/lambda) * exp(-j*2*pi*r_s/lambda)/r_s * E_i * (angle factors) * Sa
// with C = -j*(1 - gamma)/2. Evaluated exactly as printed, including the
// obliquity and polarization trigonometric factors.
ScatteredField unit_scattered_field(const UnitCell &unit, Complexd gamma, const PlaneWave &wave,
                                    const SphericalDirection &scatter, double r_s);

// Coherent sum of the per-unit scattered fields of a whole panel with per-unit
// reflection states from `codebook`, observed at a world-space point. Per-unit
// distances are exact, so near-field observation points are valid. Per-unit
// fields are accumulated as Cartesian vectors (the spherical basis degenerates
// near the panel normal) and the requested polarization component is taken in
// the spherical basis of the panel-center-to-observation direction.
Complexd panel_scattered_field(const RisPanel &panel, const PhaseCodebook &codebook, const PlaneWave &wave,
                               const Vec3d &observation, Polarization pol = Polarization::theta);

// Far-field beamforming path loss in dB (positive loss):
//   delta = 64*pi^3*(d1*d2)^2 /
//           (Gt*Gr*G*Nc^2*Nl^2*dx*dy*lambda^2*F_tx*F_rx*A^2)
// A zero pattern factor means the link is blocked; +infinity is returned.
double farfield_beamforming_path_loss(const PathLossParams &p);

inline double received_power_dbm(double tx_power_dbm, double loss_db)
{
    return tx_power_dbm - loss_db;
}

// --- building blocks shared with the scenario simulator -------------------

// Illumination of a panel: complex field amplitude at every unit center with
// the propagation phase included, plus the arrival direction of the wavefront
// taken at the panel center (panel frame). Per-unit amplitudes carry the exact
// distances; the angular factors of the scattering model are evaluated once at
// the center direction, the usual element-pattern / array-factor split.
struct PanelIllumination
{
    std::vector<Complexd> amplitude;
    SphericalDirection incident_center;

    void validate_for(const RisPanel &panel) const;
};

PanelIllumination illuminate_plane_wave(const RisPanel &panel, const PlaneWave &wave);

// Spherical wave from a world-space point source. The field at distance r is
// source_amplitude * exp(-j*2*pi*r/lambda)/r; a source behind the panel plane
// illuminates nothing.
PanelIllumination illuminate_point_source(const RisPanel &panel, const Vec3d &source, Complexd source_amplitude,
                                          double wavelength);

// Structural radiation terms s_m: the world-frame Cartesian field radiated to
// `target` by unit m per unit of (1 - Gamma_m). The total panel field is
//   E(target) = sum_m s_m * (1 - Gamma_m),
// which is the affine-in-Gamma form every optimizer in this library relies on.
// Per-unit distances shape the phase and spreading; a target behind the panel
// plane receives nothing.
std::vector<CVec3d> panel_structural_terms(const RisPanel &panel, const PanelIllumination &illum,
                                           const Vec3d &target, double wavelength);

// Pairwise-summed total field for explicit per-unit reflection coefficients.
CVec3d panel_field_from_terms(const std::vector<CVec3d> &terms, const std::vector<Complexd> &gammas);

constexpr double infinite_loss_db = std::numeric_limits<double>::infinity();

} // namespace rissim

#endif
