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

#include "mpsr/baseline.hpp"

#include <cmath>
#include <stdexcept>

namespace mpsr
{

std::optional<std::size_t> detect_toa(const Observation &obs, double sigma)
{
    if (!(sigma > 0.0))
        throw std::invalid_argument("noise level must be positive");
    const double threshold = 3.0 * sigma;
    for (std::size_t n = 0; n < obs.num_samples; ++n)
        if (std::abs(obs.at(n, 0)) > threshold)
            return n;
    return std::nullopt;
}

double fit_doa(const Observation &obs, std::size_t n, const ScenarioConfig &config)
{
    if (n >= obs.num_samples)
        throw std::out_of_range("snapshot index outside the observation");
    const auto c = static_cast<Eigen::Index>(obs.num_sensors);
    const Eigen::VectorXcd snap = obs.y.segment(static_cast<Eigen::Index>(n) * c, c);
    double best = -1.0, angle = config.grids.angles_deg.front();
    for (double theta : config.grids.angles_deg)
    {
        const double v = std::abs(steer(theta, config.array).dot(snap));
        if (v > best)
        {
            best = v;
            angle = theta;
        }
    }
    return angle;
}

BaselineResult run_baseline(const Observation &obs, double sigma, const ScenarioConfig &config)
{
    BaselineResult r;
    r.toa_sample = detect_toa(obs, sigma);
    if (!r.toa_sample)
        return r;
    r.detected = true;
    r.toa_s = static_cast<double>(*r.toa_sample) / config.sampling.sample_rate_hz;
    r.doa_deg = fit_doa(obs, *r.toa_sample, config);
    return r;
}

} // namespace mpsr
