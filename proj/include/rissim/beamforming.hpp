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

#ifndef RISSIM_BEAMFORMING_HPP
#define RISSIM_BEAMFORMING_HPP

#include "rissim/geometry.hpp"
#include "rissim/types.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace rissim
{

// Per-unit discrete phase-state indices: the control word sent to a panel.
// Unit (r, c) maps to the flat index r*cols + c everywhere in this library.
class PhaseCodebook
{
  public:
    PhaseCodebook() = default;
    PhaseCodebook(int rows, int cols, int bits)
        : bits_(bits), states_(Eigen::MatrixXi::Zero(rows, cols))
    {
        if (rows < 1 || cols < 1 || bits < 1)
            throw std::invalid_argument("PhaseCodebook: rows, cols and bits must be >= 1");
    }

    int rows() const { return static_cast<int>(states_.rows()); }
    int cols() const { return static_cast<int>(states_.cols()); }
    int bits() const { return bits_; }
    int size() const { return rows() * cols(); }
    int num_states() const { return 1 << bits_; }

    int state(int r, int c) const { return states_(r, c); }
    int state_flat(int m) const { return states_(m / cols(), m % cols()); }
    void set_state(int r, int c, int s)
    {
        check_state(s);
        states_(r, c) = s;
    }
    void set_state_flat(int m, int s)
    {
        check_state(s);
        states_(m / cols(), m % cols()) = s;
    }

    const Eigen::MatrixXi &states() const { return states_; }

    // Same states reinterpreted on a rows x cols grid (row-major order kept).
    PhaseCodebook reshaped(int rows, int cols) const;

    // Per-unit reflection coefficients A*exp(j*phase_state) for a given unit cell.
    std::vector<Complexd> reflection_coefficients(const UnitCell &unit) const;

    // Flat row-major state phases.
    std::vector<double> phases(const UnitCell &unit) const;

    void validate_for(const RisPanel &panel) const;

    bool operator==(const PhaseCodebook &o) const
    {
        return bits_ == o.bits_ && states_.rows() == o.states_.rows() && states_.cols() == o.states_.cols() &&
               states_ == o.states_;
    }

  private:
    void check_state(int s) const
    {
        if (s < 0 || s >= num_states())
            throw std::invalid_argument("PhaseCodebook: state index out of range");
    }

    int bits_ = 1;
    Eigen::MatrixXi states_;
};

// Scalar-link abstraction of one panel: the received amplitude is
//   direct + sum_m per_unit[m] * exp(j*phi_m).
struct GainDecomposition
{
    Complexd direct = 0.0;
    CVecd per_unit;
};

struct DiscreteOptResult
{
    PhaseCodebook codebook; // 1 x M; reshape to the panel grid as needed
    double objective = 0.0;
};

// |direct + sum_m per_unit[m]*exp(j*phases[m])|^2
double objective_power(const GainDecomposition &g, const std::vector<double> &phases);

// Evaluates the objective for a codebook against a unit cell's state table.
double objective_power(const GainDecomposition &g, const PhaseCodebook &codebook, const UnitCell &unit);

// Exact maximizer by exhaustive enumeration over all (2^bits)^M codebooks.
// Guarded by M*bits <= 24; ties resolve to the smallest state-index vector in
// lexicographic order (unit 0 most significant).
DiscreteOptResult brute_force_opt(const GainDecomposition &g, int bits, const UnitCell &unit);

// Globally optimal discrete phase assignment in O(M*2^bits*log(...)) time for
// bits in {1, 2, 3}. At an optimum every unit's state maximizes the projection
// of its rotated gain onto the total sum V, so the optimal codebook is one of
// the M*2^bits angular-sector configurations swept by the candidate direction
// psi; a single sorted sweep with O(1) incremental updates visits them all.
// Matches brute_force_opt on every instance.
DiscreteOptResult das_opt(const GainDecomposition &g, int bits, const UnitCell &unit);

// Continuous per-unit alignment -arg(per_unit[m]) + arg(direct or 0), rounded
// to the nearest state of the uniform 2^bits grid.
PhaseCodebook quantize_continuous(const GainDecomposition &g, int bits);

// Coordinate ascent over unit states against an arbitrary evaluation callback.
// Cycles units in row-major order, keeps strict improvements only, and stops
// after a full pass without change or after max_passes.
DiscreteOptResult greedy_opt(const std::function<double(const PhaseCodebook &)> &evaluate, const PhaseCodebook &init,
                             int max_passes);

// --- plain-text control-word format ---------------------------------------
//
//   bits=<b> rows=<r> cols=<c>
//   <r lines of c characters '0'..'7'>
//
// This is the export handed to the panel controller; bits <= 3.

std::string write_codebook_text(const PhaseCodebook &cb);
PhaseCodebook parse_codebook_text(const std::string &text);
void save_codebook(const std::string &path, const PhaseCodebook &cb);
PhaseCodebook load_codebook(const std::string &path);

// State phasors exp(j*phase_state) with components snapped to exact 0/±1 when
// within 1e-15, so that symmetric instances tie exactly in the optimizers.
std::vector<Complexd> state_phasors(const UnitCell &unit);

} // namespace rissim

#endif
