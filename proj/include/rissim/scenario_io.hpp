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

#ifndef RISSIM_SCENARIO_IO_HPP
#define RISSIM_SCENARIO_IO_HPP

#include "rissim/simulator.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rissim
{

// Schema or syntax violation in a scenario document. `where` is a line/column
// pair for syntax errors and a JSON pointer path for schema errors.
class scenario_error : public std::runtime_error
{
  public:
    scenario_error(const std::string &where, const std::string &what)
        : std::runtime_error(where + ": " + what), where_(where)
    {
    }
    const std::string &where() const { return where_; }

  private:
    std::string where_;
};

struct ScenarioFile
{
    Scenario scenario;
    std::uint64_t seed = 0;
};

// Strict JSON schema: SI units throughout (meters, hertz, dBm), unknown keys
// rejected. See the README for the full field list.
ScenarioFile parse_scenario_json(const std::string &text);
ScenarioFile load_scenario(const std::string &path);
std::string write_scenario_json(const ScenarioFile &sf);
void save_scenario(const std::string &path, const ScenarioFile &sf);

} // namespace rissim

#endif
