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

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace mpsr
{

struct Path
{
    cplx amplitude{1.0, 0.0}; // A_u
    double delay_s = 0.0;     // T_u, need not lie on the delay grid
    double angle_deg = 0.0;   // D_u
};

// The first path is the direct path.
struct PathSet
{
    std::vector<Path> paths;
};

// Sensor-stacked measurements: entry (m-1)*C + c (zero-based: n*C + c).
struct Observation
{
    Eigen::VectorXcd y;
    double sigma2 = 0.0;
    std::size_t num_sensors = 0;
    std::size_t num_samples = 0;

    cplx at(std::size_t n, std::size_t c) const { return y[static_cast<Eigen::Index>(n * num_sensors + c)]; }
};

struct NoiseSpec
{
    double snr_db = 0.0;
    std::uint64_t seed = 0;
};

Observation clean_signal(const Waveform &waveform, const PathSet &paths, const ScenarioConfig &config);

// Mean per-entry power of the direct-path component over all C*M entries.
double first_path_power(const Waveform &waveform, const PathSet &paths, const ScenarioConfig &config);

// sigma^2 = power / 10^(snr/10). Throws std::invalid_argument for nonpositive power.
double sigma2_for_snr(double snr_db, double first_path_power);

// Adds circular complex Gaussian noise, real and imaginary parts N(0, sigma2/2). Deterministic per seed.
Observation add_noise(const Observation &obs, double sigma2, std::uint64_t seed);

// Per-sensor view: row c holds the M samples of sensor c.
Eigen::MatrixXcd unstack(const Observation &obs);
Eigen::VectorXcd restack(const Eigen::MatrixXcd &per_sensor);

// CSV with header "m,c,re,im"; m and c are 1-based.
void write_observation_csv(const Observation &obs, const std::filesystem::path &path);
Observation read_observation_csv(const std::filesystem::path &path);

} // namespace mpsr
