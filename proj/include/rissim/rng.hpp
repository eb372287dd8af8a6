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

#ifndef RISSIM_RNG_HPP
#define RISSIM_RNG_HPP

#include "rissim/types.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace rissim
{

// Deterministic random generator. std::mt19937_64 has a fully specified
// sequence; the Gaussian transform is done by hand because the distribution
// adaptors in <random> are implementation-defined and would break
// reproducibility across standard libraries.
//
// Samplers take a generator explicitly. Parallel Monte Carlo must not share
// one generator between workers; derive one stream per task with
// Rng::stream(seed, index) instead.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent sub-stream for deterministic seed-space splitting.
    static Rng stream(std::uint64_t seed, std::uint64_t index)
    {
        // SplitMix64 step decorrelates consecutive stream indices.
        std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return Rng(z ^ (z >> 31));
    }

    // Uniform on [0, 1)
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Integer uniform on [0, n)
    std::uint64_t uniform_index(std::uint64_t n)
    {
        // Modulo bias is < 2^-40 for every n used here (n << 2^64).
        return engine_() % n;
    }

    // Standard normal via Box-Muller
    double gaussian()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly symmetric complex normal with E[|z|^2] = 1
    Complexd complex_gaussian()
    {
        const double s = 1.0 / std::sqrt(2.0);
        return {s * gaussian(), s * gaussian()};
    }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace rissim

#endif
