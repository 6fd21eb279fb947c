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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mpsr
{

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class AtomKind : std::uint8_t
{
    Sine,
    Cosine
};

std::string_view to_string(AtomKind kind);
AtomKind parse_atom_kind(std::string_view name); // throws ConfigError

// Where an atom's sinusoid has zero phase. Origin: at the emission time origin, so a delayed atom
// reads trig(2*pi*f*(t - tau)) on its window. Start: at the atom's own start, which makes every
// atom's shape independent of its start.
enum class PhaseReference : std::uint8_t
{
    Origin,
    Start
};

std::string_view to_string(PhaseReference ref);
PhaseReference parse_phase_reference(std::string_view name); // throws ConfigError

struct SamplingSpec
{
    double sample_rate_hz = 0.0; // F_s
    std::int64_t num_samples = 0; // M

    double sample_period_s() const { return 1.0 / sample_rate_hz; }
};

// Uniform linear array. Element spacing is given in wavelengths of the narrowband carrier.
struct ArraySpec
{
    std::int64_t num_sensors = 0; // C
    double element_spacing_wavelengths = 0.5;
};

// Windowed-sinusoid dictionary: one atom per (kind, frequency, length, start).
struct DictionarySpec
{
    std::vector<AtomKind> kinds;
    std::vector<double> frequencies_hz;
    std::vector<double> lengths_s;
    std::vector<double> starts_s;
    PhaseReference phase = PhaseReference::Origin;
};

struct GridSpec
{
    std::vector<double> delays_s;
    std::vector<double> angles_deg;
};

struct ScenarioConfig
{
    SamplingSpec sampling;
    ArraySpec array;
    DictionarySpec dictionary;
    GridSpec grids;
};

struct Violation
{
    std::string field; // JSON-style path, e.g. "grids.delays_s[3]"
    std::string message;
};

struct ValidationReport
{
    std::vector<Violation> violations;
    std::vector<std::string> notes; // non-fatal observations, e.g. atoms truncated by the window end

    bool ok() const { return violations.empty(); }
    std::string summary() const;
};

ValidationReport validate(const ScenarioConfig &config);

struct Dimensions
{
    std::uint64_t J = 0; // dictionary size
    std::uint64_t P = 0; // delays
    std::uint64_t Q = 0; // angles
    std::uint64_t C = 0; // sensors
    std::uint64_t M = 0; // samples
    std::uint64_t total = 0; // J*P*Q virtual columns
};

// Throws ConfigError if any product overflows 64 bits.
Dimensions dimensions(const ScenarioConfig &config);

// Whole number of sample periods in `seconds`, or nullopt when it is not an integer multiple
// (tolerance 1e-6 of a sample).
std::optional<std::int64_t> exact_samples(double seconds, double sample_rate_hz);

// Number of sample instants n*Δ_s (n >= 0) inside the half-open window [0, length_s).
std::int64_t samples_within(double length_s, double sample_rate_hz);

struct DictionaryIndex
{
    std::size_t kind = 0;
    std::size_t freq = 0;
    std::size_t length = 0;
    std::size_t start = 0;
};

// A validated configuration together with its integer sample layout. Immutable.
class Scenario
{
public:
    explicit Scenario(ScenarioConfig config); // throws ConfigError carrying the validation summary

    const ScenarioConfig &config() const { return config_; }
    const Dimensions &dims() const { return dims_; }

    double sample_rate_hz() const { return config_.sampling.sample_rate_hz; }
    double sample_period_s() const { return config_.sampling.sample_period_s(); }
    std::size_t num_samples() const { return static_cast<std::size_t>(config_.sampling.num_samples); }
    std::size_t num_sensors() const { return static_cast<std::size_t>(config_.array.num_sensors); }
    std::size_t num_atoms() const { return static_cast<std::size_t>(dims_.J); }
    std::size_t num_delays() const { return config_.grids.delays_s.size(); }
    std::size_t num_angles() const { return config_.grids.angles_deg.size(); }
    std::size_t num_kinds() const { return config_.dictionary.kinds.size(); }
    std::size_t num_freqs() const { return config_.dictionary.frequencies_hz.size(); }
    std::size_t num_lengths() const { return config_.dictionary.lengths_s.size(); }
    std::size_t num_starts() const { return config_.dictionary.starts_s.size(); }

    // Dictionary index j enumerates (kind, freq, length, start) with start varying fastest.
    DictionaryIndex decode(std::size_t j) const;
    std::size_t encode(const DictionaryIndex &idx) const;

    std::int64_t delay_samples(std::size_t p) const { return delay_samples_[p]; }
    std::int64_t start_samples(std::size_t s) const { return start_samples_[s]; }
    std::int64_t length_samples(std::size_t l) const { return length_samples_[l]; }

    // Total shift (start + delay) of atom j on delay p, in samples.
    std::int64_t shift_samples(std::size_t j, std::size_t p) const
    {
        return start_samples_[decode(j).start] + delay_samples_[p];
    }

    // True when every shifted atom lies fully inside the observation window.
    bool full_support() const { return full_support_; }

private:
    ScenarioConfig config_;
    Dimensions dims_;
    std::vector<std::int64_t> delay_samples_;
    std::vector<std::int64_t> start_samples_;
    std::vector<std::int64_t> length_samples_;
    bool full_support_ = true;
};

} // namespace mpsr
