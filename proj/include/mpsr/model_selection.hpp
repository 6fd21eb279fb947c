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

#include "mpsr/gomp.hpp"

#include <filesystem>
#include <vector>

namespace mpsr
{

struct LossPoint
{
    std::size_t k = 0; // activated groups
    double loss = 0.0;
};

struct LossCurve
{
    std::vector<LossPoint> points;
};

LossCurve loss_curve(const GompState &state);

struct Kink
{
    std::size_t k = 0;
    bool low_confidence = false; // fewer than three points
    bool degenerate = false;     // no point strictly below the first-to-last chord
    double confidence = 0.0;     // longest / second-longest lower-hull segment (normalized axes)
};

// Both axes are mapped affinely to [0, 1]; among the lower convex hull vertices the one
// farthest below the chord joining the first and last point is the kink.
Kink find_kink(const LossCurve &curve);

struct Selection
{
    std::size_t record = 0; // index into the trajectory
    std::vector<std::size_t> active_beta;
    std::vector<Cell> active_alpha;
    Eigen::VectorXcd coeffs; // index b * active_alpha.size() + a
    double loss = 0.0;
    bool exact = true;       // false when k was not present and a smaller record was used
};

// Snapshot whose activated-group count is k (or the largest one below it).
Selection select_solution(const GompState &state, std::size_t k);

void write_loss_curve_csv(const LossCurve &curve, const std::filesystem::path &path);

} // namespace mpsr
