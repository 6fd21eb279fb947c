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

#include <Eigen/Core>

#include <complex>
#include <utility>
#include <vector>

namespace mpsr
{

using cplx = std::complex<double>;

// Parametric identity of one dictionary element: a sinusoid windowed to [start, start + length).
struct AtomSpec
{
    AtomKind kind = AtomKind::Cosine;
    double freq_hz = 0.0;
    double length_s = 0.0;
    double start_s = 0.0;
    PhaseReference phase = PhaseReference::Origin;
};

// s0 = sum_j beta_j * phi_j, stored sparsely.
struct Waveform
{
    std::vector<std::pair<AtomSpec, cplx>> terms;
};

// Sample instant of the zero-based sample index n. Sample m = 1..M sits at (m-1)*Δ_s.
inline double sample_time(std::size_t n, double sample_rate_hz)
{
    return static_cast<double>(n) / sample_rate_hz;
}

// cos/sin(2*pi*f*t) on the half-open support [start, start + length), exactly 0 elsewhere.
// With PhaseReference::Start the argument is t - start instead.
double atom_value(const AtomSpec &atom, double t);

// Atom evaluated on the M sample instants after an additional delay.
std::vector<double> sample_atom(const AtomSpec &atom, const SamplingSpec &sampling, double extra_delay_s);

// ULA response: entry c = exp(-i*2*pi*spacing*c*sin(theta)), c = 0..C-1. Unit modulus, entry 0 is 1.
Eigen::VectorXcd steer(double theta_deg, const ArraySpec &array);

Eigen::VectorXcd synth_waveform(const Waveform &waveform, const SamplingSpec &sampling);

AtomSpec atom_spec(const Scenario &scenario, std::size_t j);

} // namespace mpsr
