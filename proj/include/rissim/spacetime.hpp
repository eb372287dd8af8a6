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

#ifndef RISSIM_SPACETIME_HPP
#define RISSIM_SPACETIME_HPP

#include "rissim/em_response.hpp"
#include "rissim/geometry.hpp"
#include "rissim/types.hpp"

#include <map>
#include <string>
#include <vector>

namespace rissim
{

// Periodic per-unit switching schedule: unit (r, c), flattened row-major,
// holds state sequence[r*cols + c][l] during slot l of every period.
struct TimeCodebook
{
    int rows = 0;
    int cols = 0;
    int bits = 1;
    double slot_seconds = 1e-6;
    Eigen::MatrixXi sequence; // (rows*cols) x L

    int units() const { return rows * cols; }
    int slots() const { return static_cast<int>(sequence.cols()); }
    double period_seconds() const { return slot_seconds * slots(); }

    // Reflection waveform of one unit over a period.
    std::vector<Complexd> unit_waveform(int unit_index, const UnitCell &unit) const;

    void validate() const;
    void validate_for(const RisPanel &panel) const;
};

// Fourier convention for the periodic piecewise-constant reflection waveform.
//   continuous_time: coefficients of the continuous waveform; the slot width
//                    contributes a sinc(pi*k/L) factor and a square wave gives
//                    the textbook |a(+-1)| = 2/pi.
//   dft:             plain length-L DFT of the slot values (no sinc), periodic
//                    in k with period L.
enum class HarmonicConvention
{
    continuous_time,
    dft
};

// k-th Fourier coefficient of one unit's reflection waveform:
//   a(k) = (1/L) * sum_l Gamma_l * exp(-j*pi*k*(2l+1)/L) * sinc(pi*k/L)
// in the continuous_time convention; a(0) equals Gamma for a constant
// waveform under both conventions.
Complexd harmonic_coefficient(const std::vector<Complexd> &waveform, int k,
                              HarmonicConvention conv = HarmonicConvention::continuous_time);

// Coefficients for |k| <= k_max.
struct HarmonicSpectrum
{
    std::map<int, Complexd> coefficients;

    double power_sum() const;
};

HarmonicSpectrum harmonic_spectrum(const std::vector<Complexd> &waveform, int k_max,
                                   HarmonicConvention conv = HarmonicConvention::continuous_time);

// Frequency offset of harmonic k from the carrier for a given schedule.
inline double harmonic_frequency_offset(const TimeCodebook &tc, int k)
{
    return static_cast<double>(k) / tc.period_seconds();
}

// Equivalent synthesized phase arg(a(k)) of every unit's schedule. Sequences
// must use a 2-bit alphabet. k = 0 recovers the native phases of constant
// schedules; the designed 16-row table below is analyzed at k = 1, where the
// cyclic-shift theorem makes the synthesized phases land exactly on a uniform
// grid.
std::vector<double> equivalent_phase_table(const TimeCodebook &tc, const UnitCell &unit, int k);

// 16 two-state schedules (L = 16, 2-bit alphabet) whose first-harmonic phases
// are -180, -157.5, ..., +157.5 degrees with equal amplitudes 2/pi: cyclic
// shifts of a half-period square wave between states 0 and 2.
TimeCodebook designed_16_phase_sequences();

// Far-field magnitude pattern of harmonic k over a list of scan directions
// (panel frame), dB, peak-normalized to 0 dB. A direction with zero field maps
// to -infinity. The static (k = 0) pattern keeps the structural reflection
// term; for k != 0 only the switching part of the waveform radiates.
std::vector<double> harmonic_pattern(const RisPanel &panel, const TimeCodebook &tc, int k,
                                     const std::vector<SphericalDirection> &scan, const PlaneWave &wave);

// First-harmonic received power (dB, relative units) in a given direction for
// the symbol-0 and symbol-1 schedules of on-off-keying harmonic signaling.
// Contract: the high codebook yields strictly more power than the low one.
std::pair<double, double> ook_first_harmonic_power(const TimeCodebook &tc_low, const TimeCodebook &tc_high,
                                                   const RisPanel &panel, const SphericalDirection &direction,
                                                   const PlaneWave &wave);

// --- plain-text schedule format --------------------------------------------
//
//   bits=<b> rows=<r> cols=<c> slots=<L>
//   <r*c lines of L characters '0'..'7'>, units in row-major order

std::string write_timecode_text(const TimeCodebook &tc);
TimeCodebook parse_timecode_text(const std::string &text);
void save_timecode(const std::string &path, const TimeCodebook &tc);
TimeCodebook load_timecode(const std::string &path);

} // namespace rissim

#endif
