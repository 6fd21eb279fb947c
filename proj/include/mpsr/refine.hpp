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

#include "mpsr/model_selection.hpp"
#include "mpsr/predictor_engine.hpp"

#include <json.hpp>

#include <vector>

namespace mpsr
{

// Bilinear model restricted to the selected atoms and cells:
// Y ~ sum_j beta_j X_j alpha, X_j holding the columns (j, cell) for every kept cell.
class ReducedProblem
{
public:
    ReducedProblem(const PredictorEngine &engine, std::vector<std::size_t> kept_j, std::vector<Cell> kept_pq,
                   Eigen::VectorXcd y);

    const std::vector<std::size_t> &kept_j() const { return kept_j_; }
    const std::vector<Cell> &kept_pq() const { return kept_pq_; }
    const Eigen::VectorXcd &y() const { return y_; }
    std::size_t num_atoms() const { return kept_j_.size(); }
    std::size_t num_cells() const { return kept_pq_.size(); }

    // X(beta) = sum_j beta_j X_j, size C*M x num_cells.
    Eigen::MatrixXcd mixed(const Eigen::VectorXcd &beta) const;
    // ||Y - X(beta) alpha||^2
    double loss(const Eigen::VectorXcd &alpha, const Eigen::VectorXcd &beta) const;
    // min over alpha of the loss, from precomputed Gram blocks.
    double profiled_loss(const Eigen::VectorXcd &beta) const;

private:
    std::vector<std::size_t> kept_j_;
    std::vector<Cell> kept_pq_;
    Eigen::VectorXcd y_;
    std::vector<Eigen::MatrixXcd> blocks_;           // X_j
    std::vector<std::vector<Eigen::MatrixXcd>> gram_; // X_i^H X_k
    std::vector<Eigen::VectorXcd> proj_;             // X_j^H Y
    double yy_ = 0.0;
};

struct AlphaFit
{
    Eigen::VectorXcd alpha;
    bool rank_deficient = false;
};

AlphaFit alpha_ols(const Eigen::VectorXcd &beta, const ReducedProblem &problem);

struct BetaInit
{
    Eigen::VectorXcd beta;              // beta[0] == 1
    std::vector<std::size_t> kept_j;    // possibly reordered so that the pivot atom comes first
    bool pivoted = false;
};

// Dominant singular pair of the coefficient matrix W(b, a) = coeffs[b * n_alpha + a].
BetaInit init_beta(const Eigen::VectorXcd &coeffs, const std::vector<std::size_t> &kept_j, std::size_t n_alpha);

struct NelderMeadOptions
{
    double diameter_tolerance = 1e-9;
    double spread_tolerance = 1e-12;
    std::size_t max_iterations = 0; // 0: 500 per free complex coefficient
};

struct RefinedEstimate
{
    Eigen::VectorXcd alpha;
    Eigen::VectorXcd beta; // beta[0] == 1
    double loss = 0.0;
    std::size_t iterations = 0;
    bool hit_iteration_cap = false;
    bool rank_deficient = false;
};

RefinedEstimate refine(const ReducedProblem &problem, const Eigen::VectorXcd &beta_init,
                       const NelderMeadOptions &options = {});

struct PathEstimate
{
    Cell cell;
    double angle_deg = 0.0;
    double delay_s = 0.0; // grid delay of the cell
    double toa_s = 0.0;   // delay plus the earliest kept atom start
    cplx alpha;
};

struct AtomEstimate
{
    std::size_t j = 0;
    AtomKind kind = AtomKind::Sine;
    double freq_hz = 0.0;
    double length_s = 0.0;
    double start_s = 0.0; // relative to the earliest kept atom
    cplx beta;
};

struct Interpretation
{
    std::vector<PathEstimate> paths; // ascending delay; paths[0] is the direct path
    std::vector<AtomEstimate> atoms; // ascending start
};

// Every path TOA is referenced to the earliest kept atom and atom starts are reported relative
// to it. With start-referenced phase, start and delay are only identified through their sum, so
// this is the only meaningful split; with origin-referenced phase it is the physical arrival.
Interpretation interpret(const ReducedProblem &problem, const RefinedEstimate &estimate, const Scenario &scenario);

nlohmann::json to_json(const RefinedEstimate &estimate, const Interpretation &interp);

} // namespace mpsr
