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

#include "rissim/simulator.hpp"

#include "rissim/errors.hpp"
#include "rissim/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rissim
{

void AxisAlignedBox::validate() const
{
    if ((hi - lo).minCoeff() < 0.0)
        throw std::invalid_argument("AxisAlignedBox: hi must not be below lo");
}

bool segment_blocked(const Vec3d &a, const Vec3d &b, const std::vector<AxisAlignedBox> &blockers)
{
    const Vec3d d = b - a;
    for (const AxisAlignedBox &box : blockers) {
        // Slab test on the parameter interval [0, 1].
        double t0 = 0.0, t1 = 1.0;
        bool miss = false;
        for (int i = 0; i < 3 && !miss; ++i) {
            if (std::abs(d[i]) < 1e-15) {
                if (a[i] < box.lo[i] || a[i] > box.hi[i])
                    miss = true;
            } else {
                double u = (box.lo[i] - a[i]) / d[i];
                double v = (box.hi[i] - a[i]) / d[i];
                if (u > v)
                    std::swap(u, v);
                t0 = std::max(t0, u);
                t1 = std::min(t1, v);
                if (t0 > t1)
                    miss = true;
            }
        }
        if (!miss)
            return true;
    }
    return false;
}

void Scenario::validate() const
{
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("Scenario: frequency must be positive");
    tx.validate();
    rx.validate();
    for (const RisPanel &p : panels)
        p.validate();
    for (const AxisAlignedBox &b : blockers)
        b.validate();
}

void CoverageGridSpec::validate() const
{
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("CoverageGridSpec: grid dimensions must be >= 1");
    if (!(step > 0.0))
        throw std::invalid_argument("CoverageGridSpec: step must be positive");
}

void SoiGridSpec::validate() const
{
    if (nx < 1 || ny < 1 || nz < 1)
        throw std::invalid_argument("SoiGridSpec: dimensions must be >= 1");
    if (!(step > 0.0))
        throw std::invalid_argument("SoiGridSpec: step must be positive");
}

int SoiGrid::argmax() const
{
    int best = 0;
    for (int i = 1; i < size(); ++i)
        if (intensity_dbm[static_cast<std::size_t>(i)] > intensity_dbm[static_cast<std::size_t>(best)])
            best = i;
    return best;
}

PhaseCodebook mirror_baseline_codebook(const RisPanel &panel)
{
    const std::vector<Complexd> ph = state_phasors(panel.unit);
    int best = 0;
    double best_mag = -1.0;
    for (std::size_t s = 0; s < ph.size(); ++s) {
        const double m = std::abs(1.0 - panel.unit.amplitude_response * ph[s]);
        if (m > best_mag + 1e-15) {
            best_mag = m;
            best = static_cast<int>(s);
        }
    }
    PhaseCodebook cb(panel.rows, panel.cols, panel.unit.bits());
    for (int m = 0; m < cb.size(); ++m)
        cb.set_state_flat(m, best);
    return cb;
}

namespace
{

double watt_to_dbm(double w)
{
    return w > 0.0 ? 10.0 * std::log10(w * 1e3) : -std::numeric_limits<double>::infinity();
}

double dbm_to_watt(double dbm)
{
    return std::isfinite(dbm) ? db2lin(dbm) * 1e-3 : 0.0;
}

// Matched-polarization capture of a field power density by an aperture of
// gain g at wavelength lambda: P = |E|^2/eta * g*lambda^2/(4*pi).
double capture_watt(double field_sq, double g, double lambda)
{
    return field_sq / eta0 * g * lambda * lambda / (4.0 * pi);
}

// Complex transmit field amplitude (RMS) of the Tx antenna at a world point;
// zero when occluded or outside the pattern's front hemisphere.
Complexd tx_field_at(const Scenario &sc, const Vec3d &point)
{
    if (segment_blocked(sc.tx.pose.position, point, sc.blockers))
        return 0.0;
    const Vec3d d = point - sc.tx.pose.position;
    const double r = d.norm();
    if (r < 1e-9)
        throw degenerate_geometry("tx_field_at: query point coincides with the transmitter");
    const double f = pattern_gain(sc.tx, local_angles(sc.tx.pose, point));
    if (f == 0.0)
        return 0.0;
    const double amp = std::sqrt(eta0 * sc.tx_power_watt() * sc.tx.gain * f / (4.0 * pi));
    return amp * std::polar(1.0, -2.0 * pi * r / sc.wavelength()) / r;
}

PanelIllumination illuminate_from_tx(const Scenario &sc, const RisPanel &panel)
{
    PanelIllumination il;
    const int m = panel.unit_count();
    il.amplitude.assign(static_cast<std::size_t>(m), Complexd(0.0));
    il.incident.assign(static_cast<std::size_t>(m), SphericalDirection{});
    if (segment_blocked(sc.tx.pose.position, panel.pose.position, sc.blockers))
        return il;
    const double k = 2.0 * pi / sc.wavelength();
    for (int r = 0; r < panel.rows; ++r)
        for (int c = 0; c < panel.cols; ++c) {
            const int idx = panel.unit_index(r, c);
            const Vec3d upos = panel.unit_position(r, c);
            const Vec3d v = panel.pose.rotation.transpose() * (sc.tx.pose.position - upos);
            const double dist = v.norm();
            if (dist < 1e-9)
                throw degenerate_geometry("illuminate_from_tx: transmitter touches a unit center");
            SphericalDirection inc;
            inc.elevation = std::acos(std::clamp(v.z() / dist, -1.0, 1.0));
            if (inc.elevation >= pi / 2.0)
                continue; // transmitter behind the reflecting face
            inc.azimuth = (v.head<2>().norm() < 1e-15) ? 0.0 : wrap_azimuth(std::atan2(v.y(), v.x()));
            const double f = pattern_gain(sc.tx, local_angles(sc.tx.pose, upos));
            if (f == 0.0)
                continue;
            const double amp = std::sqrt(eta0 * sc.tx_power_watt() * sc.tx.gain * f / (4.0 * pi));
            il.incident[static_cast<std::size_t>(idx)] = inc;
            il.amplitude[static_cast<std::size_t>(idx)] = amp * std::polar(1.0, -k * dist) / dist;
        }
    return il;
}

// Scalar reduction of one panel -> point transfer. The matched polarization
// axis is the structural (codebook-independent) field direction, so the
// optimizer objective and the reported powers are the same quantity.
struct ScalarLink
{
    GainDecomposition g;
    CVec3d pol = CVec3d::Zero(); // complex polarization unit vector
    bool usable = false;

    Complexd field(const PhaseCodebook &cb, const UnitCell &unit) const
    {
        if (!usable)
            return 0.0;
        const std::vector<Complexd> ph = state_phasors(unit);
        return g.direct + pairwise_sum<Complexd>(static_cast<std::size_t>(cb.size()), [&](std::size_t m) {
                   return g.per_unit[static_cast<Eigen::Index>(m)] *
                          ph[static_cast<std::size_t>(cb.state_flat(static_cast<int>(m)))];
               });
    }
};

ScalarLink make_scalar_link(const RisPanel &panel, const PanelIllumination &illum, const Vec3d &target, double lambda,
                            const std::vector<AxisAlignedBox> &blockers)
{
    ScalarLink link;
    const int m = panel.unit_count();
    link.g.per_unit = CVecd::Zero(m);
    if (segment_blocked(panel.pose.position, target, blockers))
        return link;

    const std::vector<CVec3d> terms = panel_structural_terms(panel, illum, target, lambda);
    const CVec3d structural = pairwise_sum<CVec3d>(terms.size(), [&](std::size_t i) { return terms[i]; });

    CVec3d pol = structural;
    if (pol.norm() < 1e-300) {
        double best = 0.0;
        for (const CVec3d &t : terms)
            if (t.norm() > best) {
                best = t.norm();
                pol = t;
            }
        if (best == 0.0)
            return link; // nothing reaches the target
    }
    pol /= pol.norm();

    link.pol = pol;
    link.usable = true;
    link.g.direct = pol.dot(structural); // adjoint inner product
    const double a = panel.unit.amplitude_response;
    for (int i = 0; i < m; ++i)
        link.g.per_unit[i] = -a * pol.dot(terms[static_cast<std::size_t>(i)]);
    return link;
}

// Illumination of the next panel produced by the current panel state. The
// field at every destination unit is the exact superposition over the source
// units; the incident direction is taken from the source panel center.
PanelIllumination relay_illumination(const RisPanel &from, const PanelIllumination &from_illum,
                                     const std::vector<Complexd> &from_gammas, const RisPanel &to, double lambda,
                                     const std::vector<AxisAlignedBox> &blockers)
{
    PanelIllumination il;
    const int m = to.unit_count();
    il.amplitude.assign(static_cast<std::size_t>(m), Complexd(0.0));
    il.incident.assign(static_cast<std::size_t>(m), SphericalDirection{});
    if (segment_blocked(from.pose.position, to.pose.position, blockers))
        return il;

    // Polarization reference: structural sum at the destination center.
    const ScalarLink center = make_scalar_link(from, from_illum, to.pose.position, lambda, blockers);
    if (!center.usable)
        return il;

    for (int r = 0; r < to.rows; ++r)
        for (int c = 0; c < to.cols; ++c) {
            const int idx = to.unit_index(r, c);
            const Vec3d upos = to.unit_position(r, c);
            const Vec3d v = to.pose.rotation.transpose() * (from.pose.position - upos);
            const double dist = v.norm();
            if (dist < 1e-9)
                throw degenerate_geometry("relay_illumination: panels touch");
            SphericalDirection inc;
            inc.elevation = std::acos(std::clamp(v.z() / dist, -1.0, 1.0));
            if (inc.elevation >= pi / 2.0)
                continue; // source behind this unit's face
            inc.azimuth = (v.head<2>().norm() < 1e-15) ? 0.0 : wrap_azimuth(std::atan2(v.y(), v.x()));

            const std::vector<CVec3d> terms = panel_structural_terms(from, from_illum, upos, lambda);
            const CVec3d e = panel_field_from_terms(terms, from_gammas);
            il.incident[static_cast<std::size_t>(idx)] = inc;
            il.amplitude[static_cast<std::size_t>(idx)] = center.pol.dot(e);
        }
    return il;
}

double rx_aperture_gain(const Scenario &sc, const Vec3d &arrival_from)
{
    return sc.rx.gain * pattern_gain(sc.rx, local_angles(sc.rx.pose, arrival_from));
}

// Direct Tx -> Rx path (Friis), zero when occluded or outside the patterns.
double direct_path_watt(const Scenario &sc)
{
    const Complexd e = tx_field_at(sc, sc.rx.pose.position);
    if (e == 0.0)
        return 0.0;
    return capture_watt(std::norm(e), rx_aperture_gain(sc, sc.tx.pose.position), sc.wavelength());
}

void check_codebooks(const Scenario &sc, const std::vector<PhaseCodebook> &codebooks)
{
    if (codebooks.size() != sc.panels.size())
        throw std::invalid_argument("codebook list does not match the panel list");
    for (std::size_t i = 0; i < codebooks.size(); ++i)
        codebooks[i].validate_for(sc.panels[i]);
}

} // namespace

GainDecomposition panel_link_decomposition(const Scenario &sc, std::size_t panel_index, const Vec3d &target)
{
    sc.validate();
    if (panel_index >= sc.panels.size())
        throw std::invalid_argument("panel_link_decomposition: panel index out of range");
    const RisPanel &panel = sc.panels[panel_index];
    const PanelIllumination illum = illuminate_from_tx(sc, panel);
    const ScalarLink link = make_scalar_link(panel, illum, target, sc.wavelength(), sc.blockers);
    if (!link.usable)
        throw blocked_link("panel_link_decomposition: the panel cannot reach the target");
    return link.g;
}

std::vector<double> link_budget(const Scenario &sc, const std::vector<PhaseCodebook> &codebooks)
{
    sc.validate();
    check_codebooks(sc, codebooks);
    const double lambda = sc.wavelength();

    std::vector<double> out;
    double chain_rx_watt = 0.0;

    if (!sc.panels.empty()) {
        PanelIllumination illum = illuminate_from_tx(sc, sc.panels.front());
        for (std::size_t i = 0; i < sc.panels.size(); ++i) {
            const bool last = (i + 1 == sc.panels.size());
            const Vec3d target = last ? sc.rx.pose.position : sc.panels[i + 1].pose.position;
            const ScalarLink link = make_scalar_link(sc.panels[i], illum, target, lambda, sc.blockers);
            const double field_sq = std::norm(link.field(codebooks[i], sc.panels[i].unit));
            if (last) {
                chain_rx_watt = capture_watt(field_sq, rx_aperture_gain(sc, sc.panels[i].pose.position), lambda);
            } else {
                out.push_back(watt_to_dbm(capture_watt(field_sq, 1.0, lambda)));
                illum = relay_illumination(sc.panels[i], illum, codebooks[i].reflection_coefficients(sc.panels[i].unit),
                                           sc.panels[i + 1], lambda, sc.blockers);
            }
        }
    }

    out.push_back(watt_to_dbm(chain_rx_watt + direct_path_watt(sc)));
    return out;
}

std::vector<PhaseCodebook> multi_hop_optimize(const Scenario &sc)
{
    sc.validate();
    if (sc.panels.empty())
        throw std::invalid_argument("multi_hop_optimize: the chain must contain at least one panel");
    const double lambda = sc.wavelength();

    std::vector<PhaseCodebook> books;
    books.reserve(sc.panels.size());
    PanelIllumination illum = illuminate_from_tx(sc, sc.panels.front());
    for (std::size_t i = 0; i < sc.panels.size(); ++i) {
        const bool last = (i + 1 == sc.panels.size());
        const Vec3d target = last ? sc.rx.pose.position : sc.panels[i + 1].pose.position;
        const ScalarLink link = make_scalar_link(sc.panels[i], illum, target, lambda, sc.blockers);
        if (!link.usable)
            throw blocked_link("multi_hop_optimize: hop " + std::to_string(i) + " is occluded or dark");
        const RisPanel &panel = sc.panels[i];
        const DiscreteOptResult res = das_opt(link.g, panel.unit.bits(), panel.unit);
        books.push_back(res.codebook.reshaped(panel.rows, panel.cols));
        if (!last)
            illum = relay_illumination(panel, illum, books.back().reflection_coefficients(panel.unit),
                                       sc.panels[i + 1], lambda, sc.blockers);
    }
    return books;
}

MultiHopReport multi_hop_experiment(const Scenario &sc, double specular_threshold_deg)
{
    sc.validate();
    if (sc.panels.empty())
        throw std::invalid_argument("multi_hop_experiment: the chain must contain at least one panel");
    const double lambda = sc.wavelength();

    MultiHopReport report;
    std::vector<PhaseCodebook> books;
    books.reserve(sc.panels.size());
    for (const RisPanel &p : sc.panels)
        books.push_back(mirror_baseline_codebook(p));

    report.rx_power_baseline_dbm = link_budget(sc, books).back();

    PanelIllumination illum = illuminate_from_tx(sc, sc.panels.front());
    Vec3d previous_node = sc.tx.pose.position;
    for (std::size_t i = 0; i < sc.panels.size(); ++i) {
        const RisPanel &panel = sc.panels[i];
        const bool last = (i + 1 == sc.panels.size());
        const Vec3d target = last ? sc.rx.pose.position : sc.panels[i + 1].pose.position;
        const ScalarLink link = make_scalar_link(panel, illum, target, lambda, sc.blockers);
        if (!link.usable)
            throw blocked_link("multi_hop_experiment: hop " + std::to_string(i) + " is occluded or dark");
        const double probe_gain = last ? rx_aperture_gain(sc, panel.pose.position) : 1.0;

        HopReport hop;
        hop.panel_index = static_cast<int>(i);
        hop.power_before_dbm =
            watt_to_dbm(capture_watt(std::norm(link.field(books[i], panel.unit)), probe_gain, lambda));

        const DiscreteOptResult res = das_opt(link.g, panel.unit.bits(), panel.unit);
        books[i] = res.codebook.reshaped(panel.rows, panel.cols);
        hop.power_after_dbm =
            watt_to_dbm(capture_watt(std::norm(link.field(books[i], panel.unit)), probe_gain, lambda));

        // Specular geometry: the outgoing hop direction coincides with the
        // mirror image of the incoming ray about the panel plane.
        const Vec3d n = panel.pose.normal();
        const Vec3d d_in = (panel.pose.position - previous_node).normalized();
        const Vec3d d_spec = d_in - 2.0 * d_in.dot(n) * n;
        const Vec3d d_out = (target - panel.pose.position).normalized();
        hop.specular_offset_deg = rad2deg(std::acos(std::clamp(d_spec.dot(d_out), -1.0, 1.0)));
        hop.specular_aligned = hop.specular_offset_deg <= specular_threshold_deg;
        report.hops.push_back(hop);

        if (!last)
            illum = relay_illumination(panel, illum, books[i].reflection_coefficients(panel.unit), sc.panels[i + 1],
                                       lambda, sc.blockers);
        previous_node = panel.pose.position;
    }

    report.rx_power_optimized_dbm = link_budget(sc, books).back();
    report.codebooks = std::move(books);
    return report;
}

CoverageGrid coverage_map(const Scenario &sc, const CoverageGridSpec &grid, const CoveragePolicy &policy,
                          unsigned threads)
{
    sc.validate();
    grid.validate();
    const double lambda = sc.wavelength();

    // Resolve the panel codebooks once; they stay fixed over the whole grid.
    std::vector<PhaseCodebook> books;
    std::vector<PanelIllumination> illums;
    illums.reserve(sc.panels.size());
    for (const RisPanel &p : sc.panels)
        illums.push_back(illuminate_from_tx(sc, p));

    switch (policy.kind) {
    case CoveragePolicy::Kind::off:
        for (const RisPanel &p : sc.panels)
            books.emplace_back(p.rows, p.cols, p.unit.bits()); // all-zero states
        break;
    case CoveragePolicy::Kind::fixed:
        books = policy.codebooks;
        check_codebooks(sc, books);
        break;
    case CoveragePolicy::Kind::optimize_to_point:
        for (std::size_t i = 0; i < sc.panels.size(); ++i) {
            const RisPanel &p = sc.panels[i];
            const ScalarLink link = make_scalar_link(p, illums[i], policy.focus, lambda, sc.blockers);
            if (link.usable) {
                books.push_back(das_opt(link.g, p.unit.bits(), p.unit).codebook.reshaped(p.rows, p.cols));
            } else {
                books.push_back(mirror_baseline_codebook(p));
            }
        }
        break;
    }

    CoverageGrid out;
    out.origin = grid.origin;
    out.nx = grid.nx;
    out.ny = grid.ny;
    out.step = grid.step;
    out.values_dbm.resize(grid.nx, grid.ny);

    const double floor_watt = dbm_to_watt(sc.noise_floor_dbm);
    const std::size_t cells = static_cast<std::size_t>(grid.nx) * grid.ny;
    parallel_for(cells, threads, [&](std::size_t cell) {
        const int ix = static_cast<int>(cell % static_cast<std::size_t>(grid.nx));
        const int iy = static_cast<int>(cell / static_cast<std::size_t>(grid.nx));
        const Vec3d p = out.cell_center(ix, iy);

        // Isotropic unit-gain probe: direct path plus one bounce per panel.
        double watt = floor_watt + capture_watt(std::norm(tx_field_at(sc, p)), 1.0, lambda);
        for (std::size_t i = 0; i < sc.panels.size(); ++i) {
            const ScalarLink link = make_scalar_link(sc.panels[i], illums[i], p, lambda, sc.blockers);
            watt += capture_watt(std::norm(link.field(books[i], sc.panels[i].unit)), 1.0, lambda);
        }
        out.values_dbm(ix, iy) = watt_to_dbm(watt);
    });
    return out;
}

SoiGrid soi_imaging(const Scenario &sc, const SoiGridSpec &spec, SoiOptimizer optimizer,
                    const std::vector<PointScatterer> &scatterers, unsigned threads)
{
    sc.validate();
    spec.validate();
    if (sc.panels.empty())
        throw std::invalid_argument("soi_imaging: the scenario must contain a panel");
    const RisPanel &panel = sc.panels.front(); // the scanning panel
    const double lambda = sc.wavelength();

    // The whole volume must sit in front of the reflecting face.
    for (int corner = 0; corner < 8; ++corner) {
        const Vec3d v = spec.voxel_center((corner & 1) ? spec.nx - 1 : 0, (corner & 2) ? spec.ny - 1 : 0,
                                          (corner & 4) ? spec.nz - 1 : 0);
        if (local_angles(panel.pose, v).elevation >= pi / 2.0)
            throw std::invalid_argument("soi_imaging: the space of interest is not in front of the panel");
    }
    for (const PointScatterer &s : scatterers)
        if (!(s.reflectivity > 0.0) || s.reflectivity > 1.0)
            throw std::invalid_argument("soi_imaging: scatterer reflectivity must be in (0, 1]");

    const PanelIllumination illum = illuminate_from_tx(sc, panel);
    const double floor_watt = dbm_to_watt(sc.noise_floor_dbm);
    const double direct_watt = direct_path_watt(sc);

    // Codebook-independent scatterer terms.
    struct ScatterAux
    {
        Complexd tx_field;     // Tx illumination of the scatterer
        Complexd to_rx;        // re-radiation kernel toward the receiver
        double rx_gain = 0.0;  // receiver aperture gain toward the scatterer
        bool rx_visible = false;
    };
    std::vector<ScatterAux> aux(scatterers.size());
    for (std::size_t s = 0; s < scatterers.size(); ++s) {
        const Vec3d &pos = scatterers[s].position;
        aux[s].tx_field = tx_field_at(sc, pos);
        const double r = (sc.rx.pose.position - pos).norm();
        if (r < 1e-9)
            throw degenerate_geometry("soi_imaging: scatterer touches the receiver");
        aux[s].rx_visible = !segment_blocked(pos, sc.rx.pose.position, sc.blockers);
        aux[s].to_rx = scatterers[s].reflectivity * (lambda / (4.0 * pi * r)) * std::polar(1.0, -2.0 * pi * r / lambda);
        aux[s].rx_gain = rx_aperture_gain(sc, pos);
    }

    SoiGrid out;
    out.spec = spec;
    out.intensity_dbm.assign(static_cast<std::size_t>(spec.nx) * spec.ny * spec.nz, 0.0);
    out.voxel_codebooks.assign(out.intensity_dbm.size(), PhaseCodebook(panel.rows, panel.cols, panel.unit.bits()));

    const ScalarLink rx_link = make_scalar_link(panel, illum, sc.rx.pose.position, lambda, sc.blockers);
    const double rx_gain_panel = rx_aperture_gain(sc, panel.pose.position);

    parallel_for(out.intensity_dbm.size(), threads, [&](std::size_t n) {
        const int ix = static_cast<int>(n) % spec.nx;
        const int iy = (static_cast<int>(n) / spec.nx) % spec.ny;
        const int iz = static_cast<int>(n) / (spec.nx * spec.ny);
        const Vec3d voxel = spec.voxel_center(ix, iy, iz);

        // Steer the panel at this voxel.
        const ScalarLink focus_link = make_scalar_link(panel, illum, voxel, lambda, sc.blockers);
        PhaseCodebook book(panel.rows, panel.cols, panel.unit.bits());
        if (focus_link.usable) {
            if (optimizer == SoiOptimizer::das) {
                book = das_opt(focus_link.g, panel.unit.bits(), panel.unit).codebook.reshaped(panel.rows, panel.cols);
            } else {
                book = greedy_opt(
                           [&](const PhaseCodebook &cb) { return std::norm(focus_link.field(cb, panel.unit)); },
                           book, 8)
                           .codebook;
            }
        }

        // Receiver power under this codebook: background paths plus the
        // re-radiated scatterer paths, power-summed.
        double watt = floor_watt + direct_watt;
        watt += capture_watt(std::norm(rx_link.field(book, panel.unit)), rx_gain_panel, lambda);
        for (std::size_t s = 0; s < scatterers.size(); ++s) {
            const Vec3d &pos = scatterers[s].position;
            if (!aux[s].rx_visible)
                continue;
            const ScalarLink to_scatter = make_scalar_link(panel, illum, pos, lambda, sc.blockers);
            const Complexd panel_path = to_scatter.field(book, panel.unit) * aux[s].to_rx;
            const Complexd direct_illum_path = aux[s].tx_field * aux[s].to_rx;
            watt += capture_watt(std::norm(panel_path), aux[s].rx_gain, lambda);
            watt += capture_watt(std::norm(direct_illum_path), aux[s].rx_gain, lambda);
        }
        out.intensity_dbm[n] = watt_to_dbm(watt);
        out.voxel_codebooks[n] = book;
    });
    return out;
}

// --- file exports ------------------------------------------------------------

namespace
{

std::string format_db(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::string format_g17(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_db(const std::string &tok)
{
    if (tok == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (tok == "inf")
        return std::numeric_limits<double>::infinity();
    return std::stod(tok);
}

std::vector<std::string> split_csv(const std::string &line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

void write_pgm16(const std::string &path, const Eigen::MatrixXd &img_rows_cols)
{
    // 16-bit binary PGM, big-endian samples, with the dB range recorded in a
    // sidecar so the mapping is invertible.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < img_rows_cols.rows(); ++r)
        for (Eigen::Index c = 0; c < img_rows_cols.cols(); ++c) {
            const double v = img_rows_cols(r, c);
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    const bool empty = !(lo <= hi);
    if (empty) {
        lo = 0.0;
        hi = 0.0;
    }

    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("save_pgm: cannot open '" + path + "'");
    os << "P5\n" << img_rows_cols.cols() << " " << img_rows_cols.rows() << "\n65535\n";
    for (Eigen::Index r = 0; r < img_rows_cols.rows(); ++r)
        for (Eigen::Index c = 0; c < img_rows_cols.cols(); ++c) {
            const double v = img_rows_cols(r, c);
            unsigned int q = 0;
            if (std::isfinite(v) && hi > lo)
                q = static_cast<unsigned int>(std::lround((v - lo) / (hi - lo) * 65535.0));
            else if (std::isfinite(v))
                q = 0;
            const unsigned char bytes[2] = {static_cast<unsigned char>((q >> 8) & 0xff),
                                            static_cast<unsigned char>(q & 0xff)};
            os.write(reinterpret_cast<const char *>(bytes), 2);
        }

    std::ofstream side(path + ".range.txt", std::ios::binary);
    if (!side)
        throw std::runtime_error("save_pgm: cannot open sidecar for '" + path + "'");
    side << "min_db=" << format_db(lo) << " max_db=" << format_db(hi) << "\n";
}

} // namespace

std::string write_coverage_csv(const CoverageGrid &grid)
{
    std::ostringstream os;
    os << format_g17(grid.origin.x()) << "," << format_g17(grid.origin.y()) << "," << format_g17(grid.origin.z())
       << "," << format_g17(grid.step) << "," << grid.nx << "," << grid.ny << "\n";
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            if (ix)
                os << ",";
            os << format_db(grid.values_dbm(ix, iy));
        }
        os << "\n";
    }
    return os.str();
}

CoverageGrid parse_coverage_csv(const std::string &text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("coverage csv: empty input");
    const std::vector<std::string> head = split_csv(line);
    if (head.size() != 6)
        throw std::invalid_argument("coverage csv: header must have 6 fields");
    CoverageGrid g;
    g.origin = Vec3d(std::stod(head[0]), std::stod(head[1]), std::stod(head[2]));
    g.step = std::stod(head[3]);
    g.nx = std::stoi(head[4]);
    g.ny = std::stoi(head[5]);
    if (g.nx < 1 || g.ny < 1 || !(g.step > 0.0))
        throw std::invalid_argument("coverage csv: invalid header values");
    g.values_dbm.resize(g.nx, g.ny);
    for (int iy = 0; iy < g.ny; ++iy) {
        if (!std::getline(is, line))
            throw std::invalid_argument("coverage csv: truncated body");
        const std::vector<std::string> row = split_csv(line);
        if (static_cast<int>(row.size()) != g.nx)
            throw std::invalid_argument("coverage csv: row width does not match nx");
        for (int ix = 0; ix < g.nx; ++ix)
            g.values_dbm(ix, iy) = parse_db(row[static_cast<std::size_t>(ix)]);
    }
    return g;
}

void save_coverage_csv(const std::string &path, const CoverageGrid &grid)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("save_coverage_csv: cannot open '" + path + "'");
    os << write_coverage_csv(grid);
}

void save_coverage_pgm(const std::string &path, const CoverageGrid &grid)
{
    // Rows of the image are y lines, samples along x.
    Eigen::MatrixXd img(grid.ny, grid.nx);
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            img(iy, ix) = grid.values_dbm(ix, iy);
    write_pgm16(path, img);
}

std::string write_soi_csv(const SoiGrid &grid)
{
    std::ostringstream os;
    os << format_g17(grid.spec.origin.x()) << "," << format_g17(grid.spec.origin.y()) << ","
       << format_g17(grid.spec.origin.z()) << "," << format_g17(grid.spec.step) << "," << grid.spec.nx << ","
       << grid.spec.ny << "," << grid.spec.nz << "\n";
    for (int iz = 0; iz < grid.spec.nz; ++iz)
        for (int iy = 0; iy < grid.spec.ny; ++iy) {
            for (int ix = 0; ix < grid.spec.nx; ++ix) {
                if (ix)
                    os << ",";
                os << format_db(grid.intensity_dbm[static_cast<std::size_t>(grid.index(ix, iy, iz))]);
            }
            os << "\n";
        }
    return os.str();
}

SoiGrid parse_soi_csv(const std::string &text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("soi csv: empty input");
    const std::vector<std::string> head = split_csv(line);
    if (head.size() != 7)
        throw std::invalid_argument("soi csv: header must have 7 fields");
    SoiGrid g;
    g.spec.origin = Vec3d(std::stod(head[0]), std::stod(head[1]), std::stod(head[2]));
    g.spec.step = std::stod(head[3]);
    g.spec.nx = std::stoi(head[4]);
    g.spec.ny = std::stoi(head[5]);
    g.spec.nz = std::stoi(head[6]);
    g.spec.validate();
    g.intensity_dbm.assign(static_cast<std::size_t>(g.size()), 0.0);
    for (int iz = 0; iz < g.spec.nz; ++iz)
        for (int iy = 0; iy < g.spec.ny; ++iy) {
            if (!std::getline(is, line))
                throw std::invalid_argument("soi csv: truncated body");
            const std::vector<std::string> row = split_csv(line);
            if (static_cast<int>(row.size()) != g.spec.nx)
                throw std::invalid_argument("soi csv: row width does not match nx");
            for (int ix = 0; ix < g.spec.nx; ++ix)
                g.intensity_dbm[static_cast<std::size_t>(g.index(ix, iy, iz))] =
                    parse_db(row[static_cast<std::size_t>(ix)]);
        }
    return g;
}

void save_soi_csv(const std::string &path, const SoiGrid &grid)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("save_soi_csv: cannot open '" + path + "'");
    os << write_soi_csv(grid);
}

void save_soi_pgm(const std::string &path, const SoiGrid &grid)
{
    Eigen::MatrixXd img(grid.spec.ny * grid.spec.nz, grid.spec.nx);
    for (int iz = 0; iz < grid.spec.nz; ++iz)
        for (int iy = 0; iy < grid.spec.ny; ++iy)
            for (int ix = 0; ix < grid.spec.nx; ++ix)
                img(iz * grid.spec.ny + iy, ix) = grid.intensity_dbm[static_cast<std::size_t>(grid.index(ix, iy, iz))];
    write_pgm16(path, img);
}

} // namespace rissim
