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

#ifndef RISSIM_ERRORS_HPP
#define RISSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rissim
{

// Contract violations (dimension mismatches, out-of-range values) throw
// std::invalid_argument directly.

// Degenerate geometric input, e.g. a query point coincident with a panel center.
class degenerate_geometry : public std::invalid_argument
{
  public:
    explicit degenerate_geometry(const std::string &msg) : std::invalid_argument(msg) {}
};

// Exhaustive enumeration was requested beyond the configured guard.
class enumeration_too_large : public std::runtime_error
{
  public:
    explicit enumeration_too_large(const std::string &msg) : std::runtime_error(msg) {}
};

// A required propagation segment is occluded or geometrically infeasible.
class blocked_link : public std::runtime_error
{
  public:
    explicit blocked_link(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace rissim

#endif
