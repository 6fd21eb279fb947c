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

#include "mpsr/config_io.hpp"

#include <cmath>
#include <fstream>

namespace mpsr
{

using nlohmann::json;

namespace
{

const json &member(const json &node, const char *key, std::string_view where)
{
    if (!node.is_object() || !node.contains(key))
        throw ConfigError("missing key '" + std::string(where) + "." + key + "'");
    return node.at(key);
}

double number(const json &node, std::string_view field)
{
    if (!node.is_number())
        throw ConfigError("'" + std::string(field) + "' must be a number");
    return node.get<double>();
}

std::int64_t integer(const json &node, std::string_view field)
{
    if (!node.is_number_integer())
        throw ConfigError("'" + std::string(field) + "' must be an integer");
    return node.get<std::int64_t>();
}

} // namespace

std::vector<double> parse_sequence(const json &node, std::string_view field)
{
    std::vector<double> out;
    if (node.is_array())
    {
        for (const auto &v : node)
            out.push_back(number(v, field));
        return out;
    }
    if (node.is_object())
    {
        const std::string f(field);
        const double from = number(member(node, "from", f), f + ".from");
        const double to = number(member(node, "to", f), f + ".to");
        const double step = number(member(node, "step", f), f + ".step");
        if (!(step > 0.0) || to < from)
            throw ConfigError("'" + f + "' range needs step > 0 and to >= from");
        const double span = (to - from) / step;
        const auto count = static_cast<std::int64_t>(std::floor(span + 1e-9)) + 1;
        if (count > 100'000'000)
            throw ConfigError("'" + f + "' range is too long");
        out.reserve(static_cast<std::size_t>(count));
        for (std::int64_t i = 0; i < count; ++i)
            out.push_back(from + static_cast<double>(i) * step);
        return out;
    }
    throw ConfigError("'" + std::string(field) + "' must be an array or a {from,to,step} range");
}

ScenarioConfig config_from_json(const json &doc)
{
    ScenarioConfig cfg;
    const auto &smp = member(doc, "sampling", "");
    cfg.sampling.sample_rate_hz = number(member(smp, "fs_hz", "sampling"), "sampling.fs_hz");
    cfg.sampling.num_samples = integer(member(smp, "m", "sampling"), "sampling.m");

    const auto &arr = member(doc, "array", "");
    cfg.array.num_sensors = integer(member(arr, "c", "array"), "array.c");
    if (arr.contains("spacing_wl"))
        cfg.array.element_spacing_wavelengths = number(arr.at("spacing_wl"), "array.spacing_wl");

    const auto &dict = member(doc, "dictionary", "");
    const auto &kinds = member(dict, "kinds", "dictionary");
    if (!kinds.is_array())
        throw ConfigError("'dictionary.kinds' must be an array of strings");
    for (const auto &k : kinds)
    {
        if (!k.is_string())
            throw ConfigError("'dictionary.kinds' must be an array of strings");
        cfg.dictionary.kinds.push_back(parse_atom_kind(k.get<std::string>()));
    }
    cfg.dictionary.frequencies_hz = parse_sequence(member(dict, "freqs_hz", "dictionary"), "dictionary.freqs_hz");
    cfg.dictionary.lengths_s = parse_sequence(member(dict, "lengths_s", "dictionary"), "dictionary.lengths_s");
    cfg.dictionary.starts_s = parse_sequence(member(dict, "starts_s", "dictionary"), "dictionary.starts_s");
    if (dict.contains("phase"))
    {
        if (!dict.at("phase").is_string())
            throw ConfigError("'dictionary.phase' must be \"origin\" or \"start\"");
        cfg.dictionary.phase = parse_phase_reference(dict.at("phase").get<std::string>());
    }

    const auto &grids = member(doc, "grids", "");
    cfg.grids.delays_s = parse_sequence(member(grids, "delays_s", "grids"), "grids.delays_s");
    cfg.grids.angles_deg = parse_sequence(member(grids, "angles_deg", "grids"), "grids.angles_deg");
    return cfg;
}

json config_to_json(const ScenarioConfig &cfg)
{
    json kinds = json::array();
    for (auto k : cfg.dictionary.kinds)
        kinds.push_back(std::string(to_string(k)));
    return {
        {"sampling", {{"fs_hz", cfg.sampling.sample_rate_hz}, {"m", cfg.sampling.num_samples}}},
        {"array", {{"c", cfg.array.num_sensors}, {"spacing_wl", cfg.array.element_spacing_wavelengths}}},
        {"dictionary",
         {{"kinds", kinds},
          {"freqs_hz", cfg.dictionary.frequencies_hz},
          {"lengths_s", cfg.dictionary.lengths_s},
          {"starts_s", cfg.dictionary.starts_s},
          {"phase", std::string(to_string(cfg.dictionary.phase))}}},
        {"grids", {{"delays_s", cfg.grids.delays_s}, {"angles_deg", cfg.grids.angles_deg}}},
    };
}

ScenarioConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    json doc;
    try
    {
        in >> doc;
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

} // namespace mpsr
