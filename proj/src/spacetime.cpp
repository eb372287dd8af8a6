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

#include "rissim/spacetime.hpp"

#include "rissim/beamforming.hpp"
#include "rissim/errors.hpp"
#include "rissim/numeric.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rissim
{

void TimeCodebook::validate() const
{
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("TimeCodebook: rows and cols must be >= 1");
    if (bits < 1 || bits > 3)
        throw std::invalid_argument("TimeCodebook: bits must be in [1, 3]");
    if (!(slot_seconds > 0.0))
        throw std::invalid_argument("TimeCodebook: slot duration must be positive");
    if (sequence.rows() != units() || sequence.cols() < 1)
        throw std::invalid_argument("TimeCodebook: sequence must be (rows*cols) x L with L >= 1");
    const int k = 1 << bits;
    if ((sequence.array() < 0).any() || (sequence.array() >= k).any())
        throw std::invalid_argument("TimeCodebook: state index out of range for the bit depth");
}

void TimeCodebook::validate_for(const RisPanel &panel) const
{
    validate();
    if (rows != panel.rows || cols != panel.cols)
        throw std::invalid_argument("TimeCodebook: dimensions do not match the panel");
    if ((std::size_t{1} << bits) > panel.unit.phase_states.size())
        throw std::invalid_argument("TimeCodebook: bits exceed the unit cell state count");
}

std::vector<Complexd> TimeCodebook::unit_waveform(int unit_index, const UnitCell &unit) const
{
    if (unit_index < 0 || unit_index >= units())
        throw std::invalid_argument("TimeCodebook: unit index out of range");
    const std::vector<Complexd> ph = state_phasors(unit);
    std::vector<Complexd> w(static_cast<std::size_t>(slots()));
    for (int l = 0; l < slots(); ++l)
        w[static_cast<std::size_t>(l)] =
            unit.amplitude_response * ph[static_cast<std::size_t>(sequence(unit_index, l))];
    return w;
}

Complexd harmonic_coefficient(const std::vector<Complexd> &waveform, int k, HarmonicConvention conv)
{
    const std::size_t L = waveform.size();
    if (L == 0)
        throw std::invalid_argument("harmonic_coefficient: waveform must have at least one slot");
    const double n = static_cast<double>(L);
    Complexd acc = pairwise_sum<Complexd>(L, [&](std::size_t l) {
        const double phase = (conv == HarmonicConvention::continuous_time)
                                 ? -pi * k * (2.0 * static_cast<double>(l) + 1.0) / n
                                 : -2.0 * pi * k * static_cast<double>(l) / n;
        return waveform[l] * std::polar(1.0, phase);
    });
    acc /= n;
    if (conv == HarmonicConvention::continuous_time)
        acc *= sinc(pi * k / n);
    return acc;
}

double HarmonicSpectrum::power_sum() const
{
    double p = 0.0;
    for (const auto &kv : coefficients)
        p += std::norm(kv.second);
    return p;
}

HarmonicSpectrum harmonic_spectrum(const std::vector<Complexd> &waveform, int k_max, HarmonicConvention conv)
{
    if (k_max < 0)
        throw std::invalid_argument("harmonic_spectrum: k_max must be >= 0");
    HarmonicSpectrum s;
    for (int k = -k_max; k <= k_max; ++k)
        s.coefficients[k] = harmonic_coefficient(waveform, k, conv);
    return s;
}

std::vector<double> equivalent_phase_table(const TimeCodebook &tc, const UnitCell &unit, int k)
{
    tc.validate();
    if (tc.bits != 2)
        throw std::invalid_argument("equivalent_phase_table: schedules must use the 2-bit alphabet");
    if (unit.phase_states.size() != 4)
        throw std::invalid_argument("equivalent_phase_table: unit cell must provide 4 states");
    std::vector<double> phases(static_cast<std::size_t>(tc.units()));
    for (int u = 0; u < tc.units(); ++u) {
        const Complexd a = harmonic_coefficient(tc.unit_waveform(u, unit), k);
        if (std::abs(a) < 1e-15)
            throw std::invalid_argument("equivalent_phase_table: harmonic coefficient vanishes for unit " +
                                        std::to_string(u));
        phases[static_cast<std::size_t>(u)] = std::arg(a);
    }
    return phases;
}

TimeCodebook designed_16_phase_sequences()
{
    // Base schedule: half a period in state 2 (phase pi), half in state 0.
    // Its first harmonic has amplitude 2/pi and phase +90 degrees; delaying by
    // s slots subtracts s*22.5 degrees, so the 16 cyclic shifts cover the
    // 4-bit grid -180..+157.5 exactly.
    TimeCodebook tc;
    tc.rows = 16;
    tc.cols = 1;
    tc.bits = 2;
    tc.sequence.resize(16, 16);
    for (int g = 0; g < 16; ++g) {
        const int delay = (12 - g + 16) % 16; // phase slot for grid entry -180 + 22.5*g
        for (int l = 0; l < 16; ++l) {
            const int base_slot = (l - delay + 16) % 16;
            tc.sequence(g, l) = (base_slot < 8) ? 2 : 0;
        }
    }
    return tc;
}

namespace
{

// Per-unit harmonic reflection weights; the k-th harmonic of the radiated
// field is sum_m s_m * (delta_k0 - a_m(k)).
std::vector<Complexd> harmonic_gamma_weights(const TimeCodebook &tc, const UnitCell &unit, int k)
{
    std::vector<Complexd> a(static_cast<std::size_t>(tc.units()));
    for (int u = 0; u < tc.units(); ++u)
        a[static_cast<std::size_t>(u)] = harmonic_coefficient(tc.unit_waveform(u, unit), k);
    return a;
}

CVec3d harmonic_field(const std::vector<CVec3d> &terms, const std::vector<Complexd> &a, int k)
{
    const Complexd dc = (k == 0) ? 1.0 : 0.0;
    return pairwise_sum<CVec3d>(terms.size(), [&](std::size_t m) { return CVec3d(terms[m] * (dc - a[m])); });
}

// Far-field observation point along a panel-frame direction.
Vec3d far_observation(const RisPanel &panel, const SphericalDirection &dir, double wavelength)
{
    const double d = panel.diagonal();
    const double r = std::max({20.0 * d * d / wavelength, 200.0 * d, 100.0 * wavelength});
    return panel.pose.to_world(r * direction_vector(dir));
}

} // namespace

std::vector<double> harmonic_pattern(const RisPanel &panel, const TimeCodebook &tc, int k,
                                     const std::vector<SphericalDirection> &scan, const PlaneWave &wave)
{
    tc.validate_for(panel);
    const std::vector<Complexd> a = harmonic_gamma_weights(tc, panel.unit, k);
    const PanelIllumination il = illuminate_plane_wave(panel, wave);

    std::vector<double> mag(scan.size(), 0.0);
    for (std::size_t i = 0; i < scan.size(); ++i) {
        const Vec3d obs = far_observation(panel, scan[i], wave.wavelength);
        const std::vector<CVec3d> terms = panel_structural_terms(panel, il, obs, wave.wavelength);
        mag[i] = harmonic_field(terms, a, k).norm();
    }
    double peak = 0.0;
    for (double m : mag)
        peak = std::max(peak, m);
    std::vector<double> db(scan.size());
    for (std::size_t i = 0; i < scan.size(); ++i)
        db[i] = (mag[i] > 0.0 && peak > 0.0) ? 20.0 * std::log10(mag[i] / peak)
                                             : -std::numeric_limits<double>::infinity();
    return db;
}

std::pair<double, double> ook_first_harmonic_power(const TimeCodebook &tc_low, const TimeCodebook &tc_high,
                                                   const RisPanel &panel, const SphericalDirection &direction,
                                                   const PlaneWave &wave)
{
    tc_low.validate_for(panel);
    tc_high.validate_for(panel);
    const PanelIllumination il = illuminate_plane_wave(panel, wave);
    const Vec3d obs = far_observation(panel, direction, wave.wavelength);
    const std::vector<CVec3d> terms = panel_structural_terms(panel, il, obs, wave.wavelength);

    auto power_db = [&](const TimeCodebook &tc) {
        const std::vector<Complexd> a = harmonic_gamma_weights(tc, panel.unit, 1);
        const double p = harmonic_field(terms, a, 1).squaredNorm();
        return p > 0.0 ? lin2db(p) : -std::numeric_limits<double>::infinity();
    };
    return {power_db(tc_low), power_db(tc_high)};
}

std::string write_timecode_text(const TimeCodebook &tc)
{
    tc.validate();
    std::ostringstream os;
    os << "bits=" << tc.bits << " rows=" << tc.rows << " cols=" << tc.cols << " slots=" << tc.slots() << "\n";
    for (int u = 0; u < tc.units(); ++u) {
        for (int l = 0; l < tc.slots(); ++l)
            os << static_cast<char>('0' + tc.sequence(u, l));
        os << "\n";
    }
    return os.str();
}

TimeCodebook parse_timecode_text(const std::string &text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("timecode: empty input");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();

    int bits = 0, rows = 0, cols = 0, slots = 0;
    {
        std::istringstream hs(line);
        std::string tok;
        while (hs >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("timecode header: expected key=value tokens");
            const std::string key = tok.substr(0, eq);
            int value = 0;
            try {
                value = std::stoi(tok.substr(eq + 1));
            } catch (const std::exception &) {
                throw std::invalid_argument("timecode header: non-numeric value in '" + tok + "'");
            }
            if (key == "bits")
                bits = value;
            else if (key == "rows")
                rows = value;
            else if (key == "cols")
                cols = value;
            else if (key == "slots")
                slots = value;
            else
                throw std::invalid_argument("timecode header: unknown key '" + key + "'");
        }
    }
    if (bits < 1 || bits > 3 || rows < 1 || cols < 1 || slots < 1)
        throw std::invalid_argument("timecode header: bits/rows/cols/slots missing or out of range");

    TimeCodebook tc;
    tc.bits = bits;
    tc.rows = rows;
    tc.cols = cols;
    tc.sequence.resize(rows * cols, slots);
    for (int u = 0; u < rows * cols; ++u) {
        if (!std::getline(is, line))
            throw std::invalid_argument("timecode: truncated body");
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (static_cast<int>(line.size()) != slots)
            throw std::invalid_argument("timecode: line length does not match slots");
        for (int l = 0; l < slots; ++l) {
            const char ch = line[static_cast<std::size_t>(l)];
            if (ch < '0' || ch > '7')
                throw std::invalid_argument("timecode: state characters must be '0'..'7'");
            const int s = ch - '0';
            if (s >= (1 << bits))
                throw std::invalid_argument("timecode: state index exceeds 2^bits");
            tc.sequence(u, l) = s;
        }
    }
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            throw std::invalid_argument("timecode: trailing content after the matrix");
    }
    return tc;
}

void save_timecode(const std::string &path, const TimeCodebook &tc)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("save_timecode: cannot open '" + path + "'");
    os << write_timecode_text(tc);
}

TimeCodebook load_timecode(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("load_timecode: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_timecode_text(ss.str());
}

} // namespace rissim
