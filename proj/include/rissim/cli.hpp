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

#ifndef RISSIM_CLI_HPP
#define RISSIM_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace rissim
{

// Command-line front end, exposed as a function so tests can drive it
// in-process. `args` excludes the program name. Exit codes: 0 success,
// 2 unreadable input or schema violation, 3 infeasible geometry or an
// enumeration beyond the guard, 1 anything unexpected.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace rissim

#endif
