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

#include "mpsr/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mpsr
{

namespace
{

// s0(t) for all sample instants, delayed by `delay_s`.
Eigen::VectorXcd delayed_waveform(const Waveform &waveform, const SamplingSpec &sampling, double delay_s)
{
    const auto m = static_cast<Eigen::Index>(sampling.num_samples);
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(m);
    for (const auto &[atom, coeff] : waveform.terms)
        for (Eigen::Index n = 0; n < m; ++n)
        {
            const double v = atom_value(atom, sample_time(static_cast<std::size_t>(n), sampling.sample_rate_hz) - delay_s);
            if (v != 0.0)
                s[n] += coeff * v;
        }
    return s;
}

void accumulate_path(Eigen::VectorXcd &y, const Waveform &waveform, const Path &path, const ScenarioConfig &config)
{
    const auto s0 = delayed_waveform(waveform, config.sampling, path.delay_s);
    const Eigen::VectorXcd a = steer(path.angle_deg, config.array);
    const auto c = a.size();
    for (Eigen::Index n = 0; n < s0.size(); ++n)
    {
        if (s0[n] == cplx{})
            continue;
        const cplx v = path.amplitude * s0[n];
        for (Eigen::Index k = 0; k < c; ++k)
            y[n * c + k] += v * a[k];
    }
}

} // namespace

Observation clean_signal(const Waveform &waveform, const PathSet &paths, const ScenarioConfig &config)
{
    Observation obs;
    obs.num_sensors = static_cast<std::size_t>(config.array.num_sensors);
    obs.num_samples = static_cast<std::size_t>(config.sampling.num_samples);
    obs.y = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(obs.num_sensors * obs.num_samples));
    for (const auto &path : paths.paths)
        accumulate_path(obs.y, waveform, path, config);
    return obs;
}

double first_path_power(const Waveform &waveform, const PathSet &paths, const ScenarioConfig &config)
{
    if (paths.paths.empty())
        throw std::invalid_argument("first_path_power: path set is empty");
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(config.array.num_sensors * config.sampling.num_samples);
    accumulate_path(y, waveform, paths.paths.front(), config);
    return y.squaredNorm() / static_cast<double>(y.size());
}

double sigma2_for_snr(double snr_db, double power)
{
    if (!(power > 0.0))
        throw std::invalid_argument("sigma2_for_snr: signal power must be positive");
    return power / std::pow(10.0, snr_db / 10.0);
}

Observation add_noise(const Observation &obs, double sigma2, std::uint64_t seed)
{
    if (sigma2 < 0.0)
        throw std::invalid_argument("add_noise: negative variance");
    Observation out = obs;
    out.sigma2 = sigma2;
    if (sigma2 == 0.0)
        return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
    for (Eigen::Index i = 0; i < out.y.size(); ++i)
    {
        const double re = gauss(rng);
        const double im = gauss(rng);
        out.y[i] += cplx{re, im};
    }
    return out;
}

Eigen::MatrixXcd unstack(const Observation &obs)
{
    const auto c = static_cast<Eigen::Index>(obs.num_sensors);
    const auto m = static_cast<Eigen::Index>(obs.num_samples);
    // Column-major C x M view of the stacked vector, transposed to C rows of M samples.
    return Eigen::Map<const Eigen::MatrixXcd>(obs.y.data(), c, m);
}

Eigen::VectorXcd restack(const Eigen::MatrixXcd &per_sensor)
{
    return Eigen::Map<const Eigen::VectorXcd>(per_sensor.data(), per_sensor.size());
}

void write_observation_csv(const Observation &obs, const std::filesystem::path &path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << "m,c,re,im\n";
    char buf[128];
    for (std::size_t n = 0; n < obs.num_samples; ++n)
        for (std::size_t c = 0; c < obs.num_sensors; ++c)
        {
            const cplx v = obs.at(n, c);
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g\n", n + 1, c + 1, v.real(), v.imag());
            out << buf;
        }
    if (!out)
        throw std::runtime_error("write failed for '" + path.string() + "'");
}

Observation read_observation_csv(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind("m,c,re,im", 0) != 0)
        throw std::runtime_error("'" + path.string() + "': expected header m,c,re,im");

    struct Row
    {
        std::size_t m, c;
        cplx v;
    };
    std::vector<Row> rows;
    std::size_t max_m = 0, max_c = 0;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        Row r{};
        double re = 0, im = 0;
        if (std::sscanf(line.c_str(), "%zu,%zu,%lf,%lf", &r.m, &r.c, &re, &im) != 4 || r.m == 0 || r.c == 0)
            throw std::runtime_error("'" + path.string() + "': malformed row '" + line + "'");
        r.v = {re, im};
        max_m = std::max(max_m, r.m);
        max_c = std::max(max_c, r.c);
        rows.push_back(r);
    }
    if (rows.size() != max_m * max_c)
        throw std::runtime_error("'" + path.string() + "': row count does not match C*M");
    Observation obs;
    obs.num_samples = max_m;
    obs.num_sensors = max_c;
    obs.y = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(max_m * max_c));
    for (const auto &r : rows)
        obs.y[static_cast<Eigen::Index>((r.m - 1) * max_c + (r.c - 1))] = r.v;
    return obs;
}

} // namespace mpsr
