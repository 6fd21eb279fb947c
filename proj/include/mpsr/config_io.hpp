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

#include <json.hpp>

#include <filesystem>

namespace mpsr
{

// A sequence is either a JSON array of numbers or {"from": a, "to": b, "step": h} (inclusive end).
std::vector<double> parse_sequence(const nlohmann::json &node, std::string_view field);

// Parse without validation. Structural problems (missing keys, wrong types) throw ConfigError.
ScenarioConfig config_from_json(const nlohmann::json &doc);
nlohmann::json config_to_json(const ScenarioConfig &config);

ScenarioConfig load_config(const std::filesystem::path &path);

} // namespace mpsr
