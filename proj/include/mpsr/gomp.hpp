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

#include "mpsr/predictor_engine.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace mpsr
{

// An alpha group G^alpha_{p,q} (all atoms on one delay/angle cell) or a beta group G^beta_j
// (one atom on all cells).
struct GroupId
{
    enum class Type
    {
        Alpha,
        Beta
    };
    Type type = Type::Alpha;
    Cell cell;
    std::size_t j = 0;

    static GroupId alpha(Cell c) { return {Type::Alpha, c, 0}; }
    static GroupId beta(std::size_t j) { return {Type::Beta, {}, j}; }
    friend bool operator==(const GroupId &, const GroupId &) = default;
};

struct GompConfig
{
    std::size_t u_max = 2;        // cap on active alpha groups
    std::size_t max_iters = 9;    // number of least-squares updates, the initial step included
    double ls_tolerance = 1e-9;   // stop once ||r|| <= ls_tolerance * ||Y||
};

struct IterationRecord
{
    std::size_t t = 0;                  // 1 for the initial step
    std::vector<GroupId> activated;     // two groups at t = 1, one afterwards
    double score = 0.0;                 // winning group score
    std::size_t n_alpha = 0;
    std::size_t n_beta = 0;
    double loss = 0.0;                  // ||Y - X_A w||^2
    bool rank_deficient = false;
    Eigen::VectorXcd coeffs;            // index b * n_alpha + a over active_beta x active_alpha

    std::size_t groups() const { return n_alpha + n_beta; }
};

struct GompState
{
    Eigen::VectorXcd y;
    std::vector<std::size_t> active_beta; // activation order
    std::vector<Cell> active_alpha;       // activation order
    Eigen::VectorXcd coeffs;
    Eigen::VectorXcd residual;
    std::vector<IterationRecord> trajectory;
    bool degenerate = false; // Y was zero, nothing selected
    bool exhausted = false;  // no legal candidate group left

    double loss() const { return residual.squaredNorm(); }
    // Active triples, coefficient order.
    std::vector<TripleIndex> active_set() const;
};

struct LsSolution
{
    Eigen::VectorXcd coeffs;
    Eigen::VectorXcd residual;
    bool rank_deficient = false;
};

// Least squares on the synthesized columns via complete orthogonal decomposition; the
// minimum-norm solution when the columns are dependent.
LsSolution solve_ls(const PredictorEngine &engine, const std::vector<TripleIndex> &active, const Eigen::VectorXcd &y);

// Triples of the cross product, index b * alpha.size() + a.
std::vector<TripleIndex> cross_product(const std::vector<std::size_t> &beta, const std::vector<Cell> &alpha);

GompState initial_step(const Eigen::VectorXcd &y, const PredictorEngine &engine);
// Activates one more group; returns false (and sets exhausted) if no candidate is left.
bool step(GompState &state, const PredictorEngine &engine, const GompConfig &config);
GompState run(const Eigen::VectorXcd &y, const PredictorEngine &engine, const GompConfig &config);

nlohmann::json trajectory_to_json(const GompState &state);

} // namespace mpsr
