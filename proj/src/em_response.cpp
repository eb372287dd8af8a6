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

#include "rissim/em_response.hpp"

#include "rissim/beamforming.hpp"
#include "rissim/numeric.hpp"

#include <cmath>

namespace rissim
{

void PlaneWave::validate() const
{
    if (amplitude < 0.0)
        throw std::invalid_argument("PlaneWave: amplitude must be >= 0");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("PlaneWave: wavelength must be positive");
}

void PathLossParams::validate() const
{
    if (!(d1 > 0.0) || !(d2 > 0.0) || !(dx > 0.0) || !(dy > 0.0) || !(wavelength > 0.0))
        throw std::invalid_argument("PathLossParams: lengths must be positive");
    if (!(gain_tx > 0.0) || !(gain_rx > 0.0) || !(gain_unit > 0.0))
        throw std::invalid_argument("PathLossParams: gains must be positive");
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("PathLossParams: array dimensions must be >= 1");
    if (f_tx < 0.0 || f_tx > 1.0 || f_rx < 0.0 || f_rx > 1.0)
        throw std::invalid_argument("PathLossParams: pattern values must be in [0, 1]");
    if (!(amplitude > 0.0) || amplitude > 1.0)
        throw std::invalid_argument("PathLossParams: amplitude response must be in (0, 1]");
}

namespace
{

// Spherical basis vectors of a local-frame direction.
Vec3d theta_hat(const SphericalDirection &d)
{
    const double ce = std::cos(d.elevation), se = std::sin(d.elevation);
    return {ce * std::cos(d.azimuth), ce * std::sin(d.azimuth), -se};
}

Vec3d phi_hat(const SphericalDirection &d)
{
    return {-std::sin(d.azimuth), std::cos(d.azimuth), 0.0};
}

// Polarization/obliquity factors of the unit scattering model, common Sa and
// aperture terms folded in. E_theta = k*cos(el_s)*sin(az_s - az_i),
// E_phi = k*cos(az_s - az_i) with k = (ab/lambda)*cos(el_i)*Sa.
struct AngleFactors
{
    double f_theta;
    double f_phi;
};

AngleFactors angle_factors(const UnitCell &unit, double lambda, const SphericalDirection &incident,
                           const SphericalDirection &scatter)
{
    const double k = (unit.width_a * unit.height_b / lambda) * std::cos(incident.elevation) *
                     sa_factor(unit.width_a, unit.height_b, scatter, incident, lambda);
    const double daz = scatter.azimuth - incident.azimuth;
    return {k * std::cos(scatter.elevation) * std::sin(daz), k * std::cos(daz)};
}

} // namespace

ScatteredField unit_scattered_field(const UnitCell &unit, Complexd gamma, const PlaneWave &wave,
                                    const SphericalDirection &scatter, double r_s)
{
    wave.validate();
    unit.validate();
    if (!(r_s > 0.0))
        throw std::invalid_argument("unit_scattered_field: observation distance must be positive");
    if (std::abs(gamma) > 1.0 + 1e-12)
        throw std::invalid_argument("unit_scattered_field: |gamma| must be <= 1");

    const Complexd c = Complexd(0.0, -0.5) * (1.0 - gamma);
    const Complexd spread = std::polar(1.0, -2.0 * pi * r_s / wave.wavelength) / r_s;
    const Complexd common = c * spread * wave.amplitude;
    const AngleFactors f = angle_factors(unit, wave.wavelength, wave.incident_dir, scatter);

    ScatteredField e;
    e.e_r = 0.0;
    e.e_theta = common * f.f_theta;
    e.e_phi = common * f.f_phi;
    return e;
}

double farfield_beamforming_path_loss(const PathLossParams &p)
{
    p.validate();
    if (p.f_tx == 0.0 || p.f_rx == 0.0)
        return infinite_loss_db;
    const double n = 64.0 * pi * pi * pi * (p.d1 * p.d2) * (p.d1 * p.d2);
    const double d = p.gain_tx * p.gain_rx * p.gain_unit * double(p.cols) * double(p.cols) * double(p.rows) *
                     double(p.rows) * p.dx * p.dy * p.wavelength * p.wavelength * p.f_tx * p.f_rx * p.amplitude *
                     p.amplitude;
    return lin2db(n / d);
}

void PanelIllumination::validate_for(const RisPanel &panel) const
{
    if (amplitude.size() != static_cast<std::size_t>(panel.unit_count()) || incident.size() != amplitude.size())
        throw std::invalid_argument("PanelIllumination: per-unit arrays do not match the panel size");
}

PanelIllumination illuminate_plane_wave(const RisPanel &panel, const PlaneWave &wave)
{
    wave.validate();
    PanelIllumination il;
    const int m = panel.unit_count();
    il.amplitude.resize(m);
    il.incident.assign(m, wave.incident_dir);
    // Phase reference at the panel center; a wave arriving from direction d
    // reaches a unit at local position u with relative phase +k*(d_hat . u).
    const Vec3d d_hat = direction_vector(wave.incident_dir);
    const double k = 2.0 * pi / wave.wavelength;
    for (int r = 0; r < panel.rows; ++r)
        for (int c = 0; c < panel.cols; ++c) {
            const Vec3d u = panel.pose.to_local(panel.unit_position(r, c));
            il.amplitude[panel.unit_index(r, c)] = wave.amplitude * std::polar(1.0, k * d_hat.dot(u));
        }
    return il;
}

PanelIllumination illuminate_point_source(const RisPanel &panel, const Vec3d &source, Complexd source_amplitude,
                                          double wavelength)
{
    if (!(wavelength > 0.0))
        throw std::invalid_argument("illuminate_point_source: wavelength must be positive");
    PanelIllumination il;
    const int m = panel.unit_count();
    il.amplitude.resize(m);
    il.incident.resize(m);
    const double k = 2.0 * pi / wavelength;
    for (int r = 0; r < panel.rows; ++r)
        for (int c = 0; c < panel.cols; ++c) {
            const int idx = panel.unit_index(r, c);
            const Vec3d upos = panel.unit_position(r, c);
            const Vec3d v = panel.pose.rotation.transpose() * (source - upos);
            const double dist = v.norm();
            if (dist < 1e-9)
                throw degenerate_geometry("illuminate_point_source: source coincides with a unit center");
            SphericalDirection inc;
            inc.elevation = std::acos(std::clamp(v.z() / dist, -1.0, 1.0));
            inc.azimuth = (v.head<2>().norm() < 1e-15) ? 0.0 : wrap_azimuth(std::atan2(v.y(), v.x()));
            il.incident[idx] = inc;
            if (inc.elevation >= pi / 2.0) {
                il.amplitude[idx] = 0.0; // source behind the reflecting face
            } else {
                il.amplitude[idx] = source_amplitude * std::polar(1.0, -k * dist) / dist;
            }
        }
    return il;
}

std::vector<CVec3d> panel_structural_terms(const RisPanel &panel, const PanelIllumination &illum, const Vec3d &target,
                                           double wavelength)
{
    panel.validate();
    illum.validate_for(panel);
    if (!(wavelength > 0.0))
        throw std::invalid_argument("panel_structural_terms: wavelength must be positive");

    const double k = 2.0 * pi / wavelength;
    std::vector<CVec3d> terms(panel.unit_count(), CVec3d::Zero());
    for (int r = 0; r < panel.rows; ++r)
        for (int c = 0; c < panel.cols; ++c) {
            const int idx = panel.unit_index(r, c);
            const Complexd e_in = illum.amplitude[idx];
            if (e_in == 0.0)
                continue;
            const Vec3d upos = panel.unit_position(r, c);
            const Vec3d v = panel.pose.rotation.transpose() * (target - upos);
            const double dist = v.norm();
            if (dist < 1e-9)
                throw degenerate_geometry("panel_structural_terms: target coincides with a unit center");
            SphericalDirection sc;
            sc.elevation = std::acos(std::clamp(v.z() / dist, -1.0, 1.0));
            if (sc.elevation >= pi / 2.0)
                continue; // target behind the reflecting face
            sc.azimuth = (v.head<2>().norm() < 1e-15) ? 0.0 : wrap_azimuth(std::atan2(v.y(), v.x()));

            const AngleFactors f = angle_factors(panel.unit, wavelength, illum.incident[idx], sc);
            const Complexd common =
                Complexd(0.0, -0.5) * e_in * std::polar(1.0, -k * dist) / dist; // C per unit (1-Gamma)
            const Vec3d th = panel.pose.rotation * theta_hat(sc);
            const Vec3d ph = panel.pose.rotation * phi_hat(sc);
            terms[idx] = common * (f.f_theta * th.cast<Complexd>() + f.f_phi * ph.cast<Complexd>());
        }
    return terms;
}

CVec3d panel_field_from_terms(const std::vector<CVec3d> &terms, const std::vector<Complexd> &gammas)
{
    if (terms.size() != gammas.size())
        throw std::invalid_argument("panel_field_from_terms: per-unit arrays differ in size");
    return pairwise_sum<CVec3d>(terms.size(),
                                [&](std::size_t m) { return CVec3d(terms[m] * (1.0 - gammas[m])); });
}

Complexd panel_scattered_field(const RisPanel &panel, const PhaseCodebook &codebook, const PlaneWave &wave,
                               const Vec3d &observation, Polarization pol)
{
    codebook.validate_for(panel);
    const PanelIllumination il = illuminate_plane_wave(panel, wave);
    const std::vector<CVec3d> terms = panel_structural_terms(panel, il, observation, wave.wavelength);
    const CVec3d total = panel_field_from_terms(terms, codebook.reflection_coefficients(panel.unit));
    const SphericalDirection center_dir = local_angles(panel.pose, observation);
    const Vec3d basis =
        panel.pose.rotation * ((pol == Polarization::theta) ? theta_hat(center_dir) : phi_hat(center_dir));
    return basis.x() * total.x() + basis.y() * total.y() + basis.z() * total.z();
}

} // namespace rissim
