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

#ifndef RISSIM_SIMULATOR_HPP
#define RISSIM_SIMULATOR_HPP

#include "rissim/beamforming.hpp"
#include "rissim/em_response.hpp"
#include "rissim/geometry.hpp"
#include "rissim/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rissim
{

inline constexpr double speed_of_light = 299792458.0;

struct AxisAlignedBox
{
    Vec3d lo = Vec3d::Zero();
    Vec3d hi = Vec3d::Zero();

    void validate() const;
};

// True when the open segment between the two points crosses any box.
bool segment_blocked(const Vec3d &a, const Vec3d &b, const std::vector<AxisAlignedBox> &blockers);

// The simulation world. Distinct propagation paths combine by power addition;
// the field superposition inside each path (across the units of a panel) is
// coherent. Receivers capture one matched polarization. Noise enters only as
// the receiver power floor.
struct Scenario
{
    Antenna tx;
    Antenna rx;
    std::vector<RisPanel> panels; // interpreted as an ordered chain by the hop-based functions
    double frequency_hz = 5.8e9;
    double tx_power_dbm = 0.0;
    double noise_floor_dbm = -std::numeric_limits<double>::infinity();
    std::vector<AxisAlignedBox> blockers;

    double wavelength() const { return speed_of_light / frequency_hz; }
    double tx_power_watt() const { return db2lin(tx_power_dbm) * 1e-3; }

    void validate() const;
};

// Received signal power of the panel chain: entry i < panels.size() is the
// matched-polarization power collected by a unit-gain probe at the center of
// panel i+1 (entry 0: power arriving at panel 1 from panel 0, and so on);
// the last entry is the receiver power including the direct path, if any.
// Entries are dBm; fully blocked nodes carry -infinity.
std::vector<double> link_budget(const Scenario &sc, const std::vector<PhaseCodebook> &codebooks);

// Sequentially steers every panel of the chain at the center of its next hop
// (the receiver for the last panel) with the linear-time discrete optimizer.
// Throws blocked_link when a hop segment is occluded.
std::vector<PhaseCodebook> multi_hop_optimize(const Scenario &sc);

struct HopReport
{
    int panel_index = 0;
    double power_before_dbm = 0.0; // at the next node, panel still in the mirror baseline state
    double power_after_dbm = 0.0;  // after steering this panel
    bool specular_aligned = false; // next hop sits in the specular direction of the incoming ray
    double specular_offset_deg = 0.0;
};

struct MultiHopReport
{
    std::vector<HopReport> hops;
    double rx_power_baseline_dbm = 0.0; // whole chain in the mirror baseline state
    double rx_power_optimized_dbm = 0.0;
    std::vector<PhaseCodebook> codebooks;
};

// Reproduces the sequential multi-hop procedure: panels start in the uniform
// most-reflective ("mirror") state, each panel is steered in chain order, and
// the power at its next node is recorded before and after. Hops whose next
// node lies within `specular_threshold_deg` of the specular direction of the
// incoming ray are flagged; steering such a hop gains almost nothing.
MultiHopReport multi_hop_experiment(const Scenario &sc, double specular_threshold_deg = 5.0);

// Uniform codebook in the state with the largest |1 - Gamma| (the strongest
// scatterer); the panel then acts like a plain mirror.
PhaseCodebook mirror_baseline_codebook(const RisPanel &panel);

// Scalar gain decomposition of the Tx -> panel -> target transfer for one
// panel, other panels ignored. Feed it to the discrete optimizers; the
// objective is the matched-polarization field power at the target. Throws
// blocked_link when nothing reaches the target.
GainDecomposition panel_link_decomposition(const Scenario &sc, std::size_t panel_index, const Vec3d &target);

// --- coverage mapping -------------------------------------------------------

struct CoverageGridSpec
{
    Vec3d origin = Vec3d::Zero(); // lower corner of the grid, fixed z
    int nx = 0;
    int ny = 0;
    double step = 0.0; // cell pitch along world x and y

    void validate() const;
};

struct CoverageGrid
{
    Vec3d origin = Vec3d::Zero();
    int nx = 0;
    int ny = 0;
    double step = 0.0;
    Eigen::MatrixXd values_dbm; // (nx, ny); entry (ix, iy) at origin + (ix*step, iy*step, 0)

    Vec3d cell_center(int ix, int iy) const { return origin + Vec3d(ix * step, iy * step, 0.0); }
};

struct CoveragePolicy
{
    enum class Kind
    {
        off,               // every panel in state 0
        fixed,             // caller-provided codebooks
        optimize_to_point  // steer every panel at `focus`, hold fixed over the grid
    };
    Kind kind = Kind::off;
    std::vector<PhaseCodebook> codebooks; // for `fixed`
    Vec3d focus = Vec3d::Zero();          // for `optimize_to_point`
};

// Signal power on a horizontal grid of isotropic probes: direct path plus one
// single-bounce path per panel, power-summed with the scenario noise floor.
// Cells evaluate independently; `threads` workers give identical results.
CoverageGrid coverage_map(const Scenario &sc, const CoverageGridSpec &grid, const CoveragePolicy &policy,
                          unsigned threads = 1);

// --- imaging over a space of interest ---------------------------------------

struct SoiGridSpec
{
    Vec3d origin = Vec3d::Zero(); // center of voxel (0, 0, 0)
    int nx = 0, ny = 0, nz = 0;
    double step = 0.0;

    void validate() const;
    Vec3d voxel_center(int ix, int iy, int iz) const { return origin + step * Vec3d(ix, iy, iz); }
};

struct PointScatterer
{
    Vec3d position = Vec3d::Zero();
    double reflectivity = 1.0; // rho in (0, 1]
};

enum class SoiOptimizer
{
    das,
    greedy
};

struct SoiGrid
{
    SoiGridSpec spec;
    std::vector<double> intensity_dbm;          // x-major: ix + nx*(iy + ny*iz)
    std::vector<PhaseCodebook> voxel_codebooks; // same ordering

    int index(int ix, int iy, int iz) const { return ix + spec.nx * (iy + spec.ny * iz); }
    int size() const { return spec.nx * spec.ny * spec.nz; }
    int argmax() const;
};

// Scans the space of interest: steers the panel at every voxel center in turn
// and records the receiver power under that codebook. Point scatterers add
// re-radiated paths Tx -> panel -> scatterer -> Rx and Tx -> scatterer -> Rx.
// The volume must lie in front of the panel.
SoiGrid soi_imaging(const Scenario &sc, const SoiGridSpec &spec, SoiOptimizer optimizer,
                    const std::vector<PointScatterer> &scatterers, unsigned threads = 1);

// --- file exports ------------------------------------------------------------

// CSV with a header row carrying origin, step and dimensions, then ny rows of
// nx dB values with 4 decimal places. The PGM export is binary 16-bit (P5),
// the dB range mapped linearly onto 0..65535 with the range written to a
// sidecar text file "<path>.range.txt".
std::string write_coverage_csv(const CoverageGrid &grid);
CoverageGrid parse_coverage_csv(const std::string &text);
void save_coverage_csv(const std::string &path, const CoverageGrid &grid);
void save_coverage_pgm(const std::string &path, const CoverageGrid &grid);

std::string write_soi_csv(const SoiGrid &grid);
SoiGrid parse_soi_csv(const std::string &text);
void save_soi_csv(const std::string &path, const SoiGrid &grid);
// One PGM with the nz slices stacked vertically (z-major blocks of ny rows).
void save_soi_pgm(const std::string &path, const SoiGrid &grid);

} // namespace rissim

#endif
