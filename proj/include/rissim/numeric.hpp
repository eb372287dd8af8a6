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

#ifndef RISSIM_NUMERIC_HPP
#define RISSIM_NUMERIC_HPP

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rissim
{

// Pairwise (cascade) summation. Panel field sums use this so that the result
// is independent of chunking and thread count, and accurate to ~1e-15 relative.
template <typename T, typename F>
T pairwise_sum(std::size_t n, F &&term)
{
    if (n == 0)
        return T{};
    if (n == 1)
        return term(std::size_t{0});
    // Recurse on halves; the split depends only on n, never on scheduling.
    struct Rec {
        F &f;
        T run(std::size_t lo, std::size_t len)
        {
            if (len == 1)
                return f(lo);
            std::size_t half = len / 2;
            return run(lo, half) + run(lo + half, len - half);
        }
    } rec{term};
    return rec.run(0, n);
}

// Deterministic parallel loop: item i writes only to its own output slot, so
// the result is byte-identical for any worker count.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &body)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (std::size_t i = t; i < n; i += threads)
                body(i);
        });
    }
    for (auto &th : pool)
        th.join();
}

} // namespace rissim

#endif
