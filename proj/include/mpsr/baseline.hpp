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

#include "mpsr/scenario.hpp"
#include "mpsr/simulate.hpp"

#include <optional>

namespace mpsr
{

struct BaselineResult
{
    std::optional<std::size_t> toa_sample;
    std::optional<double> toa_s;
    std::optional<double> doa_deg;
    bool detected = false;
};

// First sample whose modulus on the first sensor exceeds 3 * sigma.
std::optional<std::size_t> detect_toa(const Observation &obs, double sigma);

// Grid angle maximizing |a(theta)^H y_n| for the snapshot at sample n; lowest angle index on ties.
double fit_doa(const Observation &obs, std::size_t n, const ScenarioConfig &config);

BaselineResult run_baseline(const Observation &obs, double sigma, const ScenarioConfig &config);

} // namespace mpsr
