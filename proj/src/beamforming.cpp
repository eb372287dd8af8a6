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

#include "rissim/beamforming.hpp"

#include "rissim/errors.hpp"
#include "rissim/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace rissim
{

PhaseCodebook PhaseCodebook::reshaped(int rows, int cols) const
{
    if (rows * cols != size())
        throw std::invalid_argument("PhaseCodebook::reshaped: element count mismatch");
    PhaseCodebook out(rows, cols, bits_);
    for (int m = 0; m < size(); ++m)
        out.set_state_flat(m, state_flat(m));
    return out;
}

std::vector<Complexd> PhaseCodebook::reflection_coefficients(const UnitCell &unit) const
{
    if (static_cast<std::size_t>(num_states()) > unit.phase_states.size())
        throw std::invalid_argument("PhaseCodebook: unit cell has fewer states than the codebook bits");
    std::vector<Complexd> out(size());
    const std::vector<Complexd> ph = state_phasors(unit);
    for (int m = 0; m < size(); ++m)
        out[m] = unit.amplitude_response * ph[static_cast<std::size_t>(state_flat(m))];
    return out;
}

std::vector<double> PhaseCodebook::phases(const UnitCell &unit) const
{
    if (static_cast<std::size_t>(num_states()) > unit.phase_states.size())
        throw std::invalid_argument("PhaseCodebook: unit cell has fewer states than the codebook bits");
    std::vector<double> out(size());
    for (int m = 0; m < size(); ++m)
        out[m] = unit.phase_states[static_cast<std::size_t>(state_flat(m))];
    return out;
}

void PhaseCodebook::validate_for(const RisPanel &panel) const
{
    if (rows() != panel.rows || cols() != panel.cols)
        throw std::invalid_argument("PhaseCodebook: dimensions do not match the panel");
    if (static_cast<std::size_t>(num_states()) > panel.unit.phase_states.size())
        throw std::invalid_argument("PhaseCodebook: bits exceed the unit cell state count");
}

std::vector<Complexd> state_phasors(const UnitCell &unit)
{
    std::vector<Complexd> ph(unit.phase_states.size());
    for (std::size_t s = 0; s < ph.size(); ++s) {
        double re = std::cos(unit.phase_states[s]);
        double im = std::sin(unit.phase_states[s]);
        // Snap to exact axis values so that mirror-symmetric instances tie
        // exactly instead of differing in the last ulp.
        auto snap = [](double v) {
            if (std::abs(v) < 1e-15)
                return 0.0;
            if (std::abs(v - 1.0) < 1e-15)
                return 1.0;
            if (std::abs(v + 1.0) < 1e-15)
                return -1.0;
            return v;
        };
        ph[s] = {snap(re), snap(im)};
    }
    return ph;
}

double objective_power(const GainDecomposition &g, const std::vector<double> &phases)
{
    if (static_cast<Eigen::Index>(phases.size()) != g.per_unit.size())
        throw std::invalid_argument("objective_power: phase vector length does not match per-unit gains");
    const Complexd v = g.direct + pairwise_sum<Complexd>(phases.size(), [&](std::size_t m) {
                           return g.per_unit[static_cast<Eigen::Index>(m)] * std::polar(1.0, phases[m]);
                       });
    return std::norm(v);
}

double objective_power(const GainDecomposition &g, const PhaseCodebook &codebook, const UnitCell &unit)
{
    if (codebook.size() != static_cast<int>(g.per_unit.size()))
        throw std::invalid_argument("objective_power: codebook size does not match per-unit gains");
    const std::vector<Complexd> ph = state_phasors(unit);
    const Complexd v = g.direct + pairwise_sum<Complexd>(static_cast<std::size_t>(codebook.size()), [&](std::size_t m) {
                           return g.per_unit[static_cast<Eigen::Index>(m)] *
                                  ph[static_cast<std::size_t>(codebook.state_flat(static_cast<int>(m)))];
                       });
    return std::norm(v);
}

namespace
{

void check_unit_states(const UnitCell &unit, int bits)
{
    unit.validate();
    if (unit.phase_states.size() != (std::size_t{1} << bits))
        throw std::invalid_argument("discrete optimizer: unit cell must provide exactly 2^bits states");
}

DiscreteOptResult make_result(const std::vector<int> &states, int bits, double objective)
{
    DiscreteOptResult res{PhaseCodebook(1, static_cast<int>(states.size()), bits), objective};
    for (std::size_t m = 0; m < states.size(); ++m)
        res.codebook.set_state_flat(static_cast<int>(m), states[m]);
    return res;
}

} // namespace

DiscreteOptResult brute_force_opt(const GainDecomposition &g, int bits, const UnitCell &unit)
{
    check_unit_states(unit, bits);
    const int m_count = static_cast<int>(g.per_unit.size());
    if (m_count < 1)
        throw std::invalid_argument("brute_force_opt: empty gain decomposition");
    if (m_count * bits > 24)
        throw enumeration_too_large("brute_force_opt: M*bits exceeds the enumeration guard of 24");

    const int k = 1 << bits;
    const std::vector<Complexd> ph = state_phasors(unit);
    // Per-unit per-state contributions, unit-major.
    std::vector<Complexd> contrib(static_cast<std::size_t>(m_count) * k);
    for (int m = 0; m < m_count; ++m)
        for (int s = 0; s < k; ++s)
            contrib[static_cast<std::size_t>(m) * k + s] = g.per_unit[m] * ph[static_cast<std::size_t>(s)];

    std::vector<int> current(m_count, 0), best(m_count, 0);
    double best_obj = -1.0;

    // Depth-first enumeration in lexicographic order; strict improvement keeps
    // the lexicographically smallest maximizer.
    auto rec = [&](auto &&self, int depth, Complexd sum) -> void {
        if (depth == m_count) {
            const double obj = std::norm(sum);
            if (obj > best_obj) {
                best_obj = obj;
                best = current;
            }
            return;
        }
        const Complexd *row = contrib.data() + static_cast<std::size_t>(depth) * k;
        for (int s = 0; s < k; ++s) {
            current[static_cast<std::size_t>(depth)] = s;
            self(self, depth + 1, sum + row[s]);
        }
    };
    rec(rec, 0, g.direct);
    return make_result(best, bits, best_obj);
}

DiscreteOptResult das_opt(const GainDecomposition &g, int bits, const UnitCell &unit)
{
    if (bits < 1 || bits > 3)
        throw std::invalid_argument("das_opt: bits must be in {1, 2, 3}");
    check_unit_states(unit, bits);
    const int m_count = static_cast<int>(g.per_unit.size());
    if (m_count < 1)
        throw std::invalid_argument("das_opt: empty gain decomposition");

    const int k = 1 << bits;
    const std::vector<Complexd> ph = state_phasors(unit);

    // States ordered by phase; the preferred state of a unit is the one whose
    // phase is circularly nearest to (psi - arg(gain)), so it changes exactly
    // at the k sector midpoints per unit as psi sweeps a full turn.
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> state_phase(k);
    for (int s = 0; s < k; ++s)
        state_phase[s] = std::remainder(unit.phase_states[static_cast<std::size_t>(s)], 2.0 * pi);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return state_phase[static_cast<std::size_t>(a)] < state_phase[static_cast<std::size_t>(b)];
    });

    struct Event
    {
        double angle;
        int unit;
        int new_state;
    };
    std::vector<Event> events;
    events.reserve(static_cast<std::size_t>(m_count) * k);

    std::vector<int> current(m_count);
    Complexd v = g.direct;

    auto wrap_pos = [](double a) {
        a = std::fmod(a, 2.0 * pi);
        return a < 0.0 ? a + 2.0 * pi : a;
    };

    for (int m = 0; m < m_count; ++m) {
        const Complexd gm = g.per_unit[m];
        if (gm == 0.0) {
            current[static_cast<std::size_t>(m)] = 0; // state irrelevant, no events
            continue;
        }
        const double theta = std::arg(gm);
        // Initial preferred state at psi = 0 (ties to the smallest index).
        int best_s = 0;
        double best_c = -2.0;
        for (int s = 0; s < k; ++s) {
            const double c = std::cos(theta + state_phase[static_cast<std::size_t>(s)]);
            if (c > best_c + 1e-15) {
                best_c = c;
                best_s = s;
            }
        }
        current[static_cast<std::size_t>(m)] = best_s;
        v += gm * ph[static_cast<std::size_t>(best_s)];
        for (int i = 0; i < k; ++i) {
            const int a = order[static_cast<std::size_t>(i)];
            const int b = order[static_cast<std::size_t>((i + 1) % k)];
            const double pa = state_phase[static_cast<std::size_t>(a)];
            double pb = state_phase[static_cast<std::size_t>(b)];
            if (i + 1 == k)
                pb += 2.0 * pi;
            // Crossing the midpoint between the sectors of a and b (as psi
            // increases) switches the preference from a to b.
            events.push_back({wrap_pos(theta + 0.5 * (pa + pb)), m, b});
        }
    }

    std::sort(events.begin(), events.end(), [](const Event &x, const Event &y) {
        if (x.angle != y.angle)
            return x.angle < y.angle;
        if (x.unit != y.unit)
            return x.unit < y.unit;
        return x.new_state < y.new_state;
    });

    std::vector<int> best = current;
    double best_obj = std::norm(v);
    auto consider = [&]() {
        const double obj = std::norm(v);
        if (obj > best_obj || (obj == best_obj && std::lexicographical_compare(current.begin(), current.end(),
                                                                               best.begin(), best.end()))) {
            best_obj = obj;
            best = current;
        }
    };

    for (const Event &e : events) {
        const std::size_t m = static_cast<std::size_t>(e.unit);
        const Complexd gm = g.per_unit[e.unit];
        v += gm * (ph[static_cast<std::size_t>(e.new_state)] - ph[static_cast<std::size_t>(current[m])]);
        current[m] = e.new_state;
        consider();
    }

    // Recompute the reported objective from scratch for the selected codebook;
    // the sweep accumulator carries O(M*K) rounding.
    DiscreteOptResult res = make_result(best, bits, 0.0);
    res.objective = objective_power(g, res.codebook, unit);
    return res;
}

PhaseCodebook quantize_continuous(const GainDecomposition &g, int bits)
{
    if (bits < 1)
        throw std::invalid_argument("quantize_continuous: bits must be >= 1");
    const int m_count = static_cast<int>(g.per_unit.size());
    const int k = 1 << bits;
    const double step = 2.0 * pi / k;
    const double target = (g.direct == 0.0) ? 0.0 : std::arg(g.direct);
    PhaseCodebook cb(1, std::max(m_count, 1), bits);
    for (int m = 0; m < m_count; ++m) {
        const double want = target - std::arg(g.per_unit[m]); // continuous aligning phase
        int s = static_cast<int>(std::lround(want / step));
        s %= k;
        if (s < 0)
            s += k;
        cb.set_state_flat(m, s);
    }
    return cb;
}

DiscreteOptResult greedy_opt(const std::function<double(const PhaseCodebook &)> &evaluate, const PhaseCodebook &init,
                             int max_passes)
{
    if (max_passes < 1)
        throw std::invalid_argument("greedy_opt: max_passes must be >= 1");
    PhaseCodebook cb = init;
    double obj = evaluate(cb);
    const int k = cb.num_states();
    for (int pass = 0; pass < max_passes; ++pass) {
        bool changed = false;
        for (int m = 0; m < cb.size(); ++m) {
            const int s0 = cb.state_flat(m);
            int best_s = s0;
            double best_obj = obj;
            for (int s = 0; s < k; ++s) {
                if (s == s0)
                    continue;
                cb.set_state_flat(m, s);
                const double o = evaluate(cb);
                if (o > best_obj) {
                    best_obj = o;
                    best_s = s;
                }
            }
            cb.set_state_flat(m, best_s);
            if (best_s != s0) {
                changed = true;
                obj = best_obj;
            }
        }
        if (!changed)
            break;
    }
    return {cb, obj};
}

std::string write_codebook_text(const PhaseCodebook &cb)
{
    if (cb.bits() > 3)
        throw std::invalid_argument("write_codebook_text: the text format carries at most 3 bits per unit");
    std::ostringstream os;
    os << "bits=" << cb.bits() << " rows=" << cb.rows() << " cols=" << cb.cols() << "\n";
    for (int r = 0; r < cb.rows(); ++r) {
        for (int c = 0; c < cb.cols(); ++c)
            os << static_cast<char>('0' + cb.state(r, c));
        os << "\n";
    }
    return os.str();
}

namespace
{

// Shared header scanner for the codebook and time-code formats.
struct MatrixHeader
{
    int bits = 0, rows = 0, cols = 0, slots = -1;
};

MatrixHeader parse_matrix_header(const std::string &line)
{
    MatrixHeader h;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("codebook header: expected key=value tokens, got '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        int value = 0;
        try {
            value = std::stoi(tok.substr(eq + 1));
        } catch (const std::exception &) {
            throw std::invalid_argument("codebook header: non-numeric value in '" + tok + "'");
        }
        if (key == "bits")
            h.bits = value;
        else if (key == "rows")
            h.rows = value;
        else if (key == "cols")
            h.cols = value;
        else if (key == "slots")
            h.slots = value;
        else
            throw std::invalid_argument("codebook header: unknown key '" + key + "'");
    }
    if (h.bits < 1 || h.bits > 3 || h.rows < 1 || h.cols < 1)
        throw std::invalid_argument("codebook header: bits/rows/cols missing or out of range");
    return h;
}

std::string strip_cr(std::string s)
{
    if (!s.empty() && s.back() == '\r')
        s.pop_back();
    return s;
}

} // namespace

PhaseCodebook parse_codebook_text(const std::string &text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("codebook: empty input");
    const MatrixHeader h = parse_matrix_header(strip_cr(line));
    if (h.slots != -1)
        throw std::invalid_argument("codebook: unexpected slots field (time-code file?)");
    PhaseCodebook cb(h.rows, h.cols, h.bits);
    for (int r = 0; r < h.rows; ++r) {
        if (!std::getline(is, line))
            throw std::invalid_argument("codebook: truncated matrix body");
        line = strip_cr(line);
        if (static_cast<int>(line.size()) != h.cols)
            throw std::invalid_argument("codebook: row length does not match cols");
        for (int c = 0; c < h.cols; ++c) {
            const char ch = line[static_cast<std::size_t>(c)];
            if (ch < '0' || ch > '7')
                throw std::invalid_argument("codebook: state characters must be '0'..'7'");
            const int s = ch - '0';
            if (s >= (1 << h.bits))
                throw std::invalid_argument("codebook: state index exceeds 2^bits");
            cb.set_state(r, c, s);
        }
    }
    while (std::getline(is, line))
        if (!strip_cr(line).empty())
            throw std::invalid_argument("codebook: trailing content after the matrix");
    return cb;
}

void save_codebook(const std::string &path, const PhaseCodebook &cb)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("save_codebook: cannot open '" + path + "'");
    os << write_codebook_text(cb);
}

PhaseCodebook load_codebook(const std::string &path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("load_codebook: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_codebook_text(ss.str());
}

} // namespace rissim
