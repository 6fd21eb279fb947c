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
#include "mpsr/scenario.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace mpsr
{

// Column index (j, p, q) of the virtual design matrix X.
struct TripleIndex
{
    std::size_t j = 0;
    std::size_t p = 0;
    std::size_t q = 0;

    friend bool operator==(const TripleIndex &, const TripleIndex &) = default;
};

// Delay/angle cell, the index of an alpha group.
struct Cell
{
    std::size_t p = 0;
    std::size_t q = 0;

    friend bool operator==(const Cell &, const Cell &) = default;
};

// Tie-break order for equal scores: delay index, then angle index, then dictionary index.
// With start-referenced phase, columns with the same total shift start + delay are identical,
// so among duplicates the representative with the earliest delay wins.
bool precedes(const TripleIndex &a, const TripleIndex &b);

struct ScanResult
{
    TripleIndex index;
    double score = -1.0;
};

// Column norms. at() holds the per-(kind, f, l, q) table for untruncated start-referenced atoms,
// which do not depend on start or delay. Everything else (origin-referenced phase, truncation)
// goes through per-(kind, f) prefix energies, so every norm is exact.
class NormCache
{
public:
    NormCache(const Scenario &scenario, const Eigen::VectorXd &steering_energy);

    double at(std::size_t kind, std::size_t f, std::size_t l, std::size_t q) const
    {
        return norms_[((kind * nf_ + f) * nl_ + l) * nq_ + q];
    }
    // Norm of the first `samples` samples of atom (kind, f) on beam q.
    double truncated(std::size_t kind, std::size_t f, std::size_t q, std::int64_t samples) const;
    // Sum of trig^2 over the first `samples` samples of atom (kind, f).
    double energy(std::size_t kind, std::size_t f, std::int64_t samples) const
    {
        return energy_[(kind * nf_ + f) * (m_ + 1) + static_cast<std::size_t>(samples)];
    }
    // Norm of samples [offset, offset + samples) of atom (kind, f) on beam q.
    double windowed(std::size_t kind, std::size_t f, std::size_t q, std::int64_t offset, std::int64_t samples) const;
    std::size_t size() const { return norms_.size(); }

private:
    std::size_t nf_, nl_, nq_, m_;
    std::vector<double> norms_;
    std::vector<double> energy_;
    Eigen::VectorXd steering_energy_;
};

// Q x M beamformed residual, row q holds a(theta_q)^H r_n for every sample n.
using Beamspace = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Un-normalized cosine/sine windowed correlations of one (f, l) window against one beam, for
// every shift k in [0, M), phase referenced to the window start. Windows that run past the end
// are truncated.
struct ShiftProfile
{
    std::vector<cplx> cosine;
    std::vector<cplx> sine;
};

class PredictorEngine
{
public:
    explicit PredictorEngine(Scenario scenario, unsigned workers = 1);

    const Scenario &scenario() const { return scenario_; }
    const NormCache &norms() const { return norms_; }
    const Eigen::MatrixXcd &steering() const { return steering_; } // C x Q
    unsigned workers() const { return workers_; }
    void set_workers(unsigned workers) { workers_ = workers < 1 ? 1 : workers; }

    std::size_t num_columns_per_atom() const { return scenario_.num_delays() * scenario_.num_angles(); }

    // Unit-norm column; all-zero when the shifted atom has no energy inside the window.
    Eigen::VectorXcd column(const TripleIndex &idx) const;
    // Norm of the un-normalized column, accounting for truncation at the window end.
    double column_norm(const TripleIndex &idx) const;
    double norm_constant(std::size_t kind, std::size_t f, std::size_t l, std::size_t q) const
    {
        return norms_.at(kind, f, l, q);
    }

    Beamspace beamspace(const Eigen::VectorXcd &r) const;
    Beamspace beamspace(const Eigen::VectorXcd &r, std::span<const std::size_t> rows) const;

    // column(idx)^H r, by explicit column synthesis.
    cplx correlate_direct(const TripleIndex &idx, const Eigen::VectorXcd &r) const;
    // Same value via a windowed inner product against beam q.
    cplx correlate_one(const TripleIndex &idx, const Beamspace &b) const;
    cplx correlate_one(const TripleIndex &idx, const Eigen::VectorXcd &r) const;

    double score_alpha_group(const Cell &cell, std::span<const std::size_t> active_j, const Eigen::VectorXcd &r) const;
    double score_beta_group(std::size_t j, std::span<const Cell> active_pq, const Eigen::VectorXcd &r) const;

    // Batched scores of every alpha cell (index p*Q + q) and every atom j, via shift profiles.
    std::vector<double> alpha_scores(std::span<const std::size_t> active_j, const Eigen::VectorXcd &r) const;
    std::vector<double> beta_scores(std::span<const Cell> active_pq, const Eigen::VectorXcd &r) const;

    // Global argmax of |correlate|^2 over all J*P*Q columns, ties by precedes().
    ScanResult scan_initial(const Eigen::VectorXcd &y) const;

    ShiftProfile shift_profile(std::size_t f, std::size_t l, std::span<const cplx> beam) const;

private:
    struct Prefix
    {
        std::vector<cplx> plus, minus;
    };
    void build_prefix(std::size_t f, const cplx *beam, Prefix &out) const;
    // Raw correlation of atom (kind, f) with window length L at shift k; returns (cos, sin).
    // `origin` is the sample where the sinusoid has zero phase.
    std::pair<cplx, cplx> window(std::size_t f, std::int64_t L, std::int64_t k, std::int64_t origin,
                                 const Prefix &pre) const;
    double scaled_power(std::size_t kind, std::size_t f, std::size_t l, std::size_t s, std::size_t q, std::int64_t k,
                        const std::pair<cplx, cplx> &raw) const;
    std::int64_t phase_origin(std::size_t s, std::size_t p) const;
    std::int64_t energy_offset(std::size_t s) const;

    struct Placement
    {
        std::size_t p, s;
        std::int64_t shift;
    };

    Scenario scenario_;
    unsigned workers_;
    Eigen::MatrixXcd steering_;
    Eigen::VectorXd steering_energy_;
    NormCache norms_;
    std::vector<double> omega_;              // radians per sample, per frequency
    std::vector<std::vector<cplx>> phase_;   // exp(i*omega*n), n = 0..M
    std::vector<Placement> placements_;      // distinct (delay, start) pairs scanned initially
};

} // namespace mpsr
