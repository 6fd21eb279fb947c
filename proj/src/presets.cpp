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

#include "mpsr/presets.hpp"

#include <cmath>

namespace mpsr
{

namespace
{

constexpr double fs = 1.28e9;
constexpr double dt = 1.0 / fs;

} // namespace

std::vector<double> arange(double from, double to, double step)
{
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
    for (long i = 0; i <= n; ++i)
        out.push_back(from + static_cast<double>(i) * step);
    return out;
}

ScenarioConfig three_tone_config(bool full)
{
    ScenarioConfig c;
    c.sampling = {fs, 1024};
    c.array = {5, 0.5};
    c.dictionary.kinds = {AtomKind::Sine, AtomKind::Cosine};
    c.dictionary.frequencies_hz = arange(90e6, 150e6, 5e6);
    c.grids.angles_deg = arange(1.0, 90.0, 1.0);
    if (full)
    {
        c.dictionary.lengths_s = arange(80e-9, 200e-9, 5e-9);
        c.dictionary.starts_s = arange(0.0, 765 * dt, 3 * dt);
        c.grids.delays_s = arange(0.0, 765 * dt, 3 * dt);
    }
    else
    {
        c.dictionary.lengths_s = arange(80e-9, 200e-9, 10e-9);
        c.dictionary.starts_s = arange(0.0, 384 * dt, 32 * dt);
        c.grids.delays_s = arange(0.0, 189 * dt, 3 * dt);
    }
    return c;
}

Waveform three_tone_waveform()
{
    Waveform w;
    w.terms.push_back({{AtomKind::Sine, 100e6, 150e-9, 0.0}, 1.0});
    w.terms.push_back({{AtomKind::Sine, 140e6, 100e-9, 150e-9}, 1.0});
    w.terms.push_back({{AtomKind::Sine, 110e6, 120e-9, 300e-9}, 1.0});
    return w;
}

PathSet three_tone_paths()
{
    return {{{1.0, 60e-9, 9.0}, {1.0, 95e-9, 13.0}, {1.0, 120e-9, 38.0}}};
}

ScenarioConfig barker_config(bool full)
{
    ScenarioConfig c;
    c.sampling = {fs, 1280};
    c.array = {5, 0.5};
    c.dictionary.kinds = {AtomKind::Sine, AtomKind::Cosine};
    c.grids.angles_deg = arange(1.0, 90.0, 1.0);
    if (full)
    {
        c.dictionary.frequencies_hz = arange(200e6, 240e6, 2e6);
        c.dictionary.lengths_s = arange(50e-9, 170e-9, 5e-9);
        c.dictionary.starts_s = arange(0.0, 255 * dt, dt);
        c.grids.delays_s = arange(0.0, 255 * dt, dt);
    }
    else
    {
        c.dictionary.frequencies_hz = arange(200e6, 240e6, 10e6);
        c.dictionary.lengths_s = arange(50e-9, 170e-9, 10e-9);
        c.dictionary.starts_s = arange(0.0, 528 * dt, 4 * dt);
        c.grids.delays_s = arange(0.0, 63 * dt, dt);
    }
    return c;
}

Waveform barker_waveform()
{
    // Runs of the sequence [1, 1, -1, -1, 1, -1, -1] with 80 ns bits; +1 -> 230 MHz, -1 -> 210 MHz.
    Waveform w;
    w.terms.push_back({{AtomKind::Sine, 230e6, 160e-9, 0.0}, 1.0});
    w.terms.push_back({{AtomKind::Sine, 210e6, 160e-9, 160e-9}, 1.0});
    w.terms.push_back({{AtomKind::Sine, 230e6, 80e-9, 320e-9}, 1.0});
    w.terms.push_back({{AtomKind::Sine, 210e6, 160e-9, 400e-9}, 1.0});
    return w;
}

PathSet barker_paths()
{
    return {{{1.0, 10e-9, 6.0}, {1.0, 40e-9, 42.0}}};
}

} // namespace mpsr
