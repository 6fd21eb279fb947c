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

#include "mpsr/physics.hpp"

#include <cmath>
#include <numbers>

namespace mpsr
{

namespace
{

// Snapping tolerance for support boundaries (seconds); far below any sample period in use.
constexpr double time_epsilon = 1e-15;

} // namespace

double atom_value(const AtomSpec &atom, double t)
{
    double d = t - atom.start_s;
    if (std::abs(d) < time_epsilon)
        d = 0.0;
    if (d < 0.0 || d >= atom.length_s - time_epsilon)
        return 0.0;
    const double arg = atom.phase == PhaseReference::Start ? d : t;
    const double phase = 2.0 * std::numbers::pi * atom.freq_hz * arg;
    return atom.kind == AtomKind::Cosine ? std::cos(phase) : std::sin(phase);
}

std::vector<double> sample_atom(const AtomSpec &atom, const SamplingSpec &sampling, double extra_delay_s)
{
    const auto m = static_cast<std::size_t>(sampling.num_samples);
    std::vector<double> out(m);
    for (std::size_t n = 0; n < m; ++n)
        out[n] = atom_value(atom, sample_time(n, sampling.sample_rate_hz) - extra_delay_s);
    return out;
}

Eigen::VectorXcd steer(double theta_deg, const ArraySpec &array)
{
    const auto c = static_cast<Eigen::Index>(array.num_sensors);
    const double step = -2.0 * std::numbers::pi * array.element_spacing_wavelengths *
                        std::sin(theta_deg * std::numbers::pi / 180.0);
    Eigen::VectorXcd a(c);
    for (Eigen::Index i = 0; i < c; ++i)
        a[i] = std::polar(1.0, step * static_cast<double>(i));
    return a;
}

Eigen::VectorXcd synth_waveform(const Waveform &waveform, const SamplingSpec &sampling)
{
    const auto m = static_cast<Eigen::Index>(sampling.num_samples);
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(m);
    for (const auto &[atom, coeff] : waveform.terms)
    {
        const auto samples = sample_atom(atom, sampling, 0.0);
        for (Eigen::Index n = 0; n < m; ++n)
            s[n] += coeff * samples[static_cast<std::size_t>(n)];
    }
    return s;
}

AtomSpec atom_spec(const Scenario &scenario, std::size_t j)
{
    const auto idx = scenario.decode(j);
    const auto &dict = scenario.config().dictionary;
    return {dict.kinds[idx.kind], dict.frequencies_hz[idx.freq], dict.lengths_s[idx.length], dict.starts_s[idx.start],
            dict.phase};
}

} // namespace mpsr
