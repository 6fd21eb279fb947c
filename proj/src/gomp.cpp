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

#include "mpsr/gomp.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <stdexcept>

namespace mpsr
{

std::vector<TripleIndex> cross_product(const std::vector<std::size_t> &beta, const std::vector<Cell> &alpha)
{
    std::vector<TripleIndex> out;
    out.reserve(beta.size() * alpha.size());
    for (std::size_t j : beta)
        for (const auto &c : alpha)
            out.push_back({j, c.p, c.q});
    return out;
}

std::vector<TripleIndex> GompState::active_set() const
{
    return cross_product(active_beta, active_alpha);
}

LsSolution solve_ls(const PredictorEngine &engine, const std::vector<TripleIndex> &active, const Eigen::VectorXcd &y)
{
    LsSolution out;
    if (active.empty())
    {
        out.residual = y;
        return out;
    }
    if (active.size() > static_cast<std::size_t>(y.size()))
        throw std::invalid_argument("more active columns than observations");
    Eigen::MatrixXcd x(y.size(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t i = 0; i < active.size(); ++i)
        x.col(static_cast<Eigen::Index>(i)) = engine.column(active[i]);
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(x);
    out.coeffs = cod.solve(y);
    out.rank_deficient = cod.rank() < x.cols();
    out.residual = y - x * out.coeffs;
    return out;
}

namespace
{

void update(GompState &st, const PredictorEngine &engine, IterationRecord rec)
{
    auto ls = solve_ls(engine, st.active_set(), st.y);
    st.coeffs = std::move(ls.coeffs);
    st.residual = std::move(ls.residual);
    rec.t = st.trajectory.size() + 1;
    rec.n_alpha = st.active_alpha.size();
    rec.n_beta = st.active_beta.size();
    rec.loss = st.residual.squaredNorm();
    rec.rank_deficient = ls.rank_deficient;
    rec.coeffs = st.coeffs;
    st.trajectory.push_back(std::move(rec));
}

} // namespace

GompState initial_step(const Eigen::VectorXcd &y, const PredictorEngine &engine)
{
    GompState st;
    st.y = y;
    st.residual = y;
    if (y.squaredNorm() == 0.0)
    {
        st.degenerate = true;
        return st;
    }
    const auto best = engine.scan_initial(y);
    st.active_beta.push_back(best.index.j);
    st.active_alpha.push_back({best.index.p, best.index.q});
    IterationRecord rec;
    rec.activated = {GroupId::beta(best.index.j), GroupId::alpha({best.index.p, best.index.q})};
    rec.score = best.score;
    update(st, engine, std::move(rec));
    return st;
}

bool step(GompState &st, const PredictorEngine &engine, const GompConfig &config)
{
    if (st.degenerate || st.exhausted)
        return false;
    const auto &sc = engine.scenario();
    const std::size_t nq = sc.num_angles();

    std::optional<Cell> best_cell;
    double alpha_score = -1.0;
    if (st.active_alpha.size() < config.u_max)
    {
        const auto scores = engine.alpha_scores(st.active_beta, st.residual);
        std::vector<char> active(scores.size(), 0);
        for (const auto &c : st.active_alpha)
            active[c.p * nq + c.q] = 1;
        for (std::size_t i = 0; i < scores.size(); ++i) // ascending (p, q): strict > keeps the first
            if (!active[i] && scores[i] > alpha_score)
            {
                alpha_score = scores[i];
                best_cell = Cell{i / nq, i % nq};
            }
    }

    std::optional<std::size_t> best_j;
    double beta_score = -1.0;
    {
        const auto scores = engine.beta_scores(st.active_alpha, st.residual);
        std::vector<char> active(scores.size(), 0);
        for (std::size_t j : st.active_beta)
            active[j] = 1;
        for (std::size_t j = 0; j < scores.size(); ++j)
            if (!active[j] && scores[j] > beta_score)
            {
                beta_score = scores[j];
                best_j = j;
            }
    }

    IterationRecord rec;
    if (best_cell && alpha_score >= beta_score)
    {
        st.active_alpha.push_back(*best_cell);
        rec.activated = {GroupId::alpha(*best_cell)};
        rec.score = alpha_score;
    }
    else if (best_j)
    {
        st.active_beta.push_back(*best_j);
        rec.activated = {GroupId::beta(*best_j)};
        rec.score = beta_score;
    }
    else
    {
        st.exhausted = true;
        return false;
    }
    update(st, engine, std::move(rec));
    return true;
}

GompState run(const Eigen::VectorXcd &y, const PredictorEngine &engine, const GompConfig &config)
{
    if (config.max_iters < 1)
        throw std::invalid_argument("max_iters must be at least 1");
    if (config.u_max < 1)
        throw std::invalid_argument("u_max must be at least 1");
    auto st = initial_step(y, engine);
    const double stop = config.ls_tolerance * y.norm();
    while (!st.degenerate && st.trajectory.size() < config.max_iters && st.residual.norm() > stop)
        if (!step(st, engine, config))
            break;
    return st;
}

namespace
{

nlohmann::json group_json(const GroupId &g)
{
    if (g.type == GroupId::Type::Alpha)
        return {{"type", "alpha"}, {"indices", {g.cell.p, g.cell.q}}};
    return {{"type", "beta"}, {"indices", {g.j}}};
}

} // namespace

nlohmann::json trajectory_to_json(const GompState &state)
{
    auto out = nlohmann::json::array();
    for (const auto &rec : state.trajectory)
    {
        nlohmann::json groups = nlohmann::json::array();
        for (const auto &g : rec.activated)
            groups.push_back(group_json(g));
        out.push_back({{"t", rec.t},
                       {"group", rec.activated.size() == 1 ? groups[0] : groups},
                       {"n_alpha", rec.n_alpha},
                       {"n_beta", rec.n_beta},
                       {"loss", rec.loss},
                       {"score", rec.score},
                       {"rank_deficient", rec.rank_deficient}});
    }
    return out;
}

} // namespace mpsr
