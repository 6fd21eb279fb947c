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

#include "mpsr/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mpsr
{

namespace
{

constexpr double sample_tolerance = 1e-6;

std::string indexed(std::string_view field, std::size_t i)
{
    return std::string(field) + "[" + std::to_string(i) + "]";
}

void check_sequence(ValidationReport &report, std::string_view field, const std::vector<double> &values,
                    bool allow_zero)
{
    if (values.empty())
    {
        report.violations.push_back({std::string(field), "sequence is empty"});
        return;
    }
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        const double v = values[i];
        if (!std::isfinite(v))
            report.violations.push_back({indexed(field, i), "value is not finite"});
        else if (allow_zero ? v < 0.0 : v <= 0.0)
            report.violations.push_back({indexed(field, i), allow_zero ? "value is negative" : "value is not positive"});
        if (i > 0 && !(values[i] > values[i - 1]))
            report.violations.push_back({indexed(field, i), "sequence is not strictly increasing"});
    }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw ConfigError("dimension product overflows 64-bit integer");
    return out;
}

} // namespace

std::string_view to_string(AtomKind kind)
{
    return kind == AtomKind::Sine ? "sine" : "cosine";
}

AtomKind parse_atom_kind(std::string_view name)
{
    if (name == "sine" || name == "sin")
        return AtomKind::Sine;
    if (name == "cosine" || name == "cos")
        return AtomKind::Cosine;
    throw ConfigError("unknown atom kind '" + std::string(name) + "'");
}

std::string_view to_string(PhaseReference ref)
{
    return ref == PhaseReference::Origin ? "origin" : "start";
}

PhaseReference parse_phase_reference(std::string_view name)
{
    if (name == "origin")
        return PhaseReference::Origin;
    if (name == "start")
        return PhaseReference::Start;
    throw ConfigError("unknown phase reference '" + std::string(name) + "'");
}

std::string ValidationReport::summary() const
{
    if (ok())
        return "ok";
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i)
    {
        if (i)
            os << "; ";
        os << violations[i].field << ": " << violations[i].message;
    }
    return os.str();
}

std::optional<std::int64_t> exact_samples(double seconds, double sample_rate_hz)
{
    const double v = seconds * sample_rate_hz;
    const double r = std::round(v);
    if (std::abs(v - r) > sample_tolerance)
        return std::nullopt;
    return static_cast<std::int64_t>(r);
}

std::int64_t samples_within(double length_s, double sample_rate_hz)
{
    const double v = length_s * sample_rate_hz;
    const double r = std::round(v);
    if (std::abs(v - r) <= sample_tolerance)
        return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(v));
}

ValidationReport validate(const ScenarioConfig &config)
{
    ValidationReport report;
    const auto &smp = config.sampling;
    if (!(smp.sample_rate_hz > 0.0) || !std::isfinite(smp.sample_rate_hz))
        report.violations.push_back({"sampling.fs_hz", "sample rate must be positive"});
    if (smp.num_samples < 1)
        report.violations.push_back({"sampling.m", "number of samples must be at least 1"});
    if (config.array.num_sensors < 1)
        report.violations.push_back({"array.c", "number of sensors must be at least 1"});
    if (!(config.array.element_spacing_wavelengths > 0.0))
        report.violations.push_back({"array.spacing_wl", "element spacing must be positive"});

    const auto &dict = config.dictionary;
    if (dict.kinds.empty())
        report.violations.push_back({"dictionary.kinds", "sequence is empty"});
    if (std::set<AtomKind>(dict.kinds.begin(), dict.kinds.end()).size() != dict.kinds.size())
        report.violations.push_back({"dictionary.kinds", "kinds are not distinct"});
    check_sequence(report, "dictionary.freqs_hz", dict.frequencies_hz, false);
    check_sequence(report, "dictionary.lengths_s", dict.lengths_s, false);
    check_sequence(report, "dictionary.starts_s", dict.starts_s, true);
    check_sequence(report, "grids.delays_s", config.grids.delays_s, true);

    const auto &angles = config.grids.angles_deg;
    if (angles.empty())
        report.violations.push_back({"grids.angles_deg", "sequence is empty"});
    for (std::size_t i = 0; i < angles.size(); ++i)
    {
        if (!(angles[i] >= -90.0 && angles[i] <= 90.0))
            report.violations.push_back({indexed("grids.angles_deg", i), "angle outside [-90, 90] degrees"});
        if (i > 0 && !(angles[i] > angles[i - 1]))
            report.violations.push_back({indexed("grids.angles_deg", i), "sequence is not strictly increasing"});
    }

    if (!report.ok())
        return report; // the remaining checks need sane sampling and sequences

    const double fs = smp.sample_rate_hz;
    for (std::size_t i = 0; i < config.grids.delays_s.size(); ++i)
        if (!exact_samples(config.grids.delays_s[i], fs))
            report.violations.push_back({indexed("grids.delays_s", i), "delay not multiple of sample period"});
    for (std::size_t i = 0; i < dict.starts_s.size(); ++i)
        if (!exact_samples(dict.starts_s[i], fs))
            report.violations.push_back({indexed("dictionary.starts_s", i), "start not multiple of sample period"});
    if (!report.ok())
        return report;

    // Atoms running past the window end are truncated; their columns are normalized individually.
    const std::int64_t max_shift = *exact_samples(dict.starts_s.back(), fs) + *exact_samples(config.grids.delays_s.back(), fs);
    const std::int64_t max_len = samples_within(dict.lengths_s.back(), fs);
    if (max_shift + max_len > smp.num_samples)
        report.notes.push_back("max(starts) + max(delays) + max(lengths) exceeds the observation window; "
                               "late atoms are truncated");
    return report;
}

Dimensions dimensions(const ScenarioConfig &config)
{
    Dimensions d;
    const auto &dict = config.dictionary;
    d.J = checked_mul(checked_mul(dict.kinds.size(), dict.frequencies_hz.size()),
                      checked_mul(dict.lengths_s.size(), dict.starts_s.size()));
    d.P = config.grids.delays_s.size();
    d.Q = config.grids.angles_deg.size();
    d.C = static_cast<std::uint64_t>(std::max<std::int64_t>(config.array.num_sensors, 0));
    d.M = static_cast<std::uint64_t>(std::max<std::int64_t>(config.sampling.num_samples, 0));
    d.total = checked_mul(checked_mul(d.J, d.P), d.Q);
    return d;
}

Scenario::Scenario(ScenarioConfig config) : config_(std::move(config))
{
    const auto report = validate(config_);
    if (!report.ok())
        throw ConfigError("invalid scenario: " + report.summary());
    dims_ = dimensions(config_);
    const double fs = config_.sampling.sample_rate_hz;
    for (double d : config_.grids.delays_s)
        delay_samples_.push_back(*exact_samples(d, fs));
    for (double s : config_.dictionary.starts_s)
        start_samples_.push_back(*exact_samples(s, fs));
    for (double l : config_.dictionary.lengths_s)
        length_samples_.push_back(samples_within(l, fs));
    full_support_ = start_samples_.back() + delay_samples_.back() + length_samples_.back() <=
                    config_.sampling.num_samples;
}

DictionaryIndex Scenario::decode(std::size_t j) const
{
    DictionaryIndex idx;
    idx.start = j % num_starts();
    j /= num_starts();
    idx.length = j % num_lengths();
    j /= num_lengths();
    idx.freq = j % num_freqs();
    idx.kind = j / num_freqs();
    return idx;
}

std::size_t Scenario::encode(const DictionaryIndex &idx) const
{
    return ((idx.kind * num_freqs() + idx.freq) * num_lengths() + idx.length) * num_starts() + idx.start;
}

} // namespace mpsr
