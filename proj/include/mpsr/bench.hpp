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

#include "mpsr/baseline.hpp"
#include "mpsr/gomp.hpp"
#include "mpsr/model_selection.hpp"
#include "mpsr/refine.hpp"
#include "mpsr/simulate.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mpsr
{

struct Truth
{
    Waveform waveform;
    PathSet paths;
};

struct ExperimentPlan
{
    std::string name;
    ScenarioConfig scenario;
    Truth truth;
    std::vector<double> snr_db;
    std::size_t replicates = 1;
    std::uint64_t seed_base = 1;
    GompConfig gomp;
};

// "three-tone" or "barker"; `full` switches to the large grids.
ExperimentPlan builtin_plan(std::string_view name, bool full = false);
std::vector<std::string> builtin_plan_names();

nlohmann::json plan_to_json(const ExperimentPlan &plan);
ExperimentPlan plan_from_json(const nlohmann::json &doc); // throws ConfigError
ExperimentPlan load_plan(const std::filesystem::path &path);

struct RecoveryResult
{
    GompState state;
    LossCurve curve;
    bool converged = false; // residual reached the tolerance; kink.k is then the last record
    Kink kink;
    Selection selection;
    std::vector<std::size_t> kept_j; // refine order, beta[0] belongs to kept_j[0]
    RefinedEstimate estimate;
    Interpretation interp;
    Eigen::VectorXcd waveform; // reconstructed s0 on the sample grid, up to the scale shared with alpha
};

// gomp run, kink selection (or the final record of a converged run), snapshot, bilinear refinement.
// Throws std::runtime_error when Y is zero.
RecoveryResult recover(const Eigen::VectorXcd &y, const PredictorEngine &engine, const GompConfig &config);
nlohmann::json to_json(const RecoveryResult &result);

std::optional<double> compute_rmse(const std::vector<double> &estimates, double truth);

struct ReplicateOutcome
{
    double snr_db = 0.0;
    std::size_t replicate = 0;
    std::uint64_t seed = 0;
    double sigma2 = 0.0;
    std::string error;                    // empty on success
    std::vector<PathEstimate> paths;      // proposed method, ascending TOA
    std::vector<AtomEstimate> atoms;      // ascending start
    std::size_t n_alpha = 0, n_beta = 0;
    BaselineResult baseline;
};

struct Moments
{
    std::optional<double> mean, std;
};

struct McRecord
{
    double snr_db = 0.0;
    std::string method; // "omp" or "baseline"
    std::size_t replicates = 0;
    std::size_t valid = 0;
    double detection_rate = 0.0;
    std::optional<double> doa_rmse_deg, toa_rmse_s;
    std::optional<double> doa_rmse_penalized_deg, toa_rmse_penalized_s;
    Moments doa1, toa1, doa2, toa2;
    Moments total, n_alpha, n_beta;
    std::vector<Moments> freq, length, start; // per atom rank, proposed method only
};

struct McSummary
{
    std::vector<McRecord> records;
    std::vector<ReplicateOutcome> outcomes;
};

// Every (snr, replicate) pair: simulate with seed seed_base + replicate, run both methods.
// Replicates run on `threads` workers; results do not depend on the worker count.
McSummary run_mc(const ExperimentPlan &plan, unsigned threads);

std::vector<McRecord> aggregate(const ExperimentPlan &plan, const std::vector<ReplicateOutcome> &outcomes);

std::string summary_csv(const McSummary &summary);
nlohmann::json summary_to_json(const McSummary &summary);

// Files written by the CLI subcommands.
void cmd_simulate(const ExperimentPlan &plan, const std::filesystem::path &out_dir);
nlohmann::json cmd_recover(const std::filesystem::path &obs_path, const ScenarioConfig &config,
                           const GompConfig &gomp, unsigned threads);
McSummary cmd_mc(const ExperimentPlan &plan, const std::filesystem::path &out_dir, unsigned threads);

} // namespace mpsr
