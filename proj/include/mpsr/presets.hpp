// SPDX-License-Identifier: Apache-2.0
//
// mpsr - multipath sparse recovery of radar waveforms and directions of arrival
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

#pragma once

#include "mpsr/physics.hpp"
#include "mpsr/scenario.hpp"
#include "mpsr/simulate.hpp"

namespace mpsr
{

// Three-sinusoid test signal on three paths, observed by a 5-sensor ULA for 0.8 us at 1.28 GHz.
// `full` selects the large grid (J = 166 400, P*Q = 23 040); otherwise a desk-sized grid.
ScenarioConfig three_tone_config(bool full);
Waveform three_tone_waveform();
PathSet three_tone_paths();

// 7-bit Barker sequence with 210/230 MHz FSK on two paths, 1 us at 1.28 GHz.
// `full` selects the large grid (J = 268 800, 6.19e9 columns); otherwise a desk-sized grid.
ScenarioConfig barker_config(bool full);
Waveform barker_waveform();
PathSet barker_paths();

std::vector<double> arange(double from, double to, double step); // inclusive end

} // namespace mpsr
