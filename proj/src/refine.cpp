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

#include "mpsr/refine.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mpsr
{

ReducedProblem::ReducedProblem(const PredictorEngine &engine, std::vector<std::size_t> kept_j,
                               std::vector<Cell> kept_pq, Eigen::VectorXcd y)
    : kept_j_(std::move(kept_j)), kept_pq_(std::move(kept_pq)), y_(std::move(y))
{
    if (kept_j_.empty() || kept_pq_.empty())
        throw std::invalid_argument("reduced problem needs at least one atom and one cell");
    if (kept_j_.size() * kept_pq_.size() > static_cast<std::size_t>(y_.size()))
        throw std::invalid_argument("reduced problem has more unknowns than observations");
    const auto na = static_cast<Eigen::Index>(kept_pq_.size());
    for (std::size_t j : kept_j_)
    {
        Eigen::MatrixXcd x(y_.size(), na);
        for (Eigen::Index a = 0; a < na; ++a)
            x.col(a) = engine.column({j, kept_pq_[static_cast<std::size_t>(a)].p, kept_pq_[static_cast<std::size_t>(a)].q});
        proj_.push_back(x.adjoint() * y_);
        blocks_.push_back(std::move(x));
    }
    gram_.resize(blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i)
        for (std::size_t k = 0; k < blocks_.size(); ++k)
            gram_[i].push_back(blocks_[i].adjoint() * blocks_[k]);
    yy_ = y_.squaredNorm();
}

Eigen::MatrixXcd ReducedProblem::mixed(const Eigen::VectorXcd &beta) const
{
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(y_.size(), static_cast<Eigen::Index>(kept_pq_.size()));
    for (std::size_t j = 0; j < blocks_.size(); ++j)
        x += beta[static_cast<Eigen::Index>(j)] * blocks_[j];
    return x;
}

double ReducedProblem::loss(const Eigen::VectorXcd &alpha, const Eigen::VectorXcd &beta) const
{
    return (y_ - mixed(beta) * alpha).squaredNorm();
}

double ReducedProblem::profiled_loss(const Eigen::VectorXcd &beta) const
{
    const auto na = static_cast<Eigen::Index>(kept_pq_.size());
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(na, na);
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(na);
    for (std::size_t i = 0; i < blocks_.size(); ++i)
    {
        const cplx bi = std::conj(beta[static_cast<Eigen::Index>(i)]);
        b += bi * proj_[i];
        for (std::size_t k = 0; k < blocks_.size(); ++k)
            g += (bi * beta[static_cast<Eigen::Index>(k)]) * gram_[i][k];
    }
    const Eigen::VectorXcd a = g.completeOrthogonalDecomposition().solve(b);
    return std::max(0.0, yy_ - b.dot(a).real());
}

AlphaFit alpha_ols(const Eigen::VectorXcd &beta, const ReducedProblem &problem)
{
    const Eigen::MatrixXcd x = problem.mixed(beta);
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(x);
    return {cod.solve(problem.y()), cod.rank() < x.cols()};
}

BetaInit init_beta(const Eigen::VectorXcd &coeffs, const std::vector<std::size_t> &kept_j, std::size_t n_alpha)
{
    const auto nb = static_cast<Eigen::Index>(kept_j.size());
    const auto na = static_cast<Eigen::Index>(n_alpha);
    if (coeffs.size() != nb * na)
        throw std::invalid_argument("coefficient snapshot does not match kept atoms and cells");
    BetaInit out;
    out.kept_j = kept_j;
    if (nb == 1)
    {
        out.beta = Eigen::VectorXcd::Ones(1);
        return out;
    }
    Eigen::MatrixXcd w(nb, na);
    for (Eigen::Index b = 0; b < nb; ++b)
        for (Eigen::Index a = 0; a < na; ++a)
            w(b, a) = coeffs[b * na + a];
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(w, Eigen::ComputeThinU);
    Eigen::VectorXcd u = svd.matrixU().col(0);
    Eigen::Index pivot = 0;
    if (std::abs(u[0]) <= 1e-8 * u.cwiseAbs().maxCoeff())
    {
        u.cwiseAbs().maxCoeff(&pivot);
        out.pivoted = true;
        std::rotate(out.kept_j.begin(), out.kept_j.begin() + pivot, out.kept_j.begin() + pivot + 1);
        const cplx moved = u[pivot];
        for (Eigen::Index i = pivot; i > 0; --i)
            u[i] = u[i - 1];
        u[0] = moved;
    }
    if (u[0] == cplx(0.0))
        throw std::invalid_argument("coefficient snapshot is zero");
    out.beta = u / u[0];
    out.beta[0] = 1.0;
    return out;
}

namespace
{

Eigen::VectorXcd beta_from(const std::vector<double> &x)
{
    Eigen::VectorXcd beta(static_cast<Eigen::Index>(x.size() / 2 + 1));
    beta[0] = 1.0;
    for (std::size_t i = 0; i < x.size() / 2; ++i)
        beta[static_cast<Eigen::Index>(i + 1)] = cplx(x[2 * i], x[2 * i + 1]);
    return beta;
}

} // namespace

RefinedEstimate refine(const ReducedProblem &problem, const Eigen::VectorXcd &beta_init,
                       const NelderMeadOptions &options)
{
    if (static_cast<std::size_t>(beta_init.size()) != problem.num_atoms())
        throw std::invalid_argument("beta_init size does not match the reduced problem");
    RefinedEstimate out;
    const std::size_t free = problem.num_atoms() - 1;
    Eigen::VectorXcd beta = beta_init / beta_init[0];
    beta[0] = 1.0;

    if (free > 0)
    {
        const std::size_t n = 2 * free;
        const std::size_t cap = options.max_iterations ? options.max_iterations : 500 * free;
        auto f = [&](const std::vector<double> &x) { return problem.profiled_loss(beta_from(x)); };

        std::vector<std::vector<double>> pts(n + 1, std::vector<double>(n));
        for (std::size_t i = 0; i < free; ++i)
        {
            pts[0][2 * i] = beta[static_cast<Eigen::Index>(i + 1)].real();
            pts[0][2 * i + 1] = beta[static_cast<Eigen::Index>(i + 1)].imag();
        }
        const double scale = std::max(1.0, Eigen::VectorXd(beta.cwiseAbs()).maxCoeff());
        for (std::size_t i = 0; i < n; ++i)
        {
            pts[i + 1] = pts[0];
            pts[i + 1][i] += 0.05 * scale;
        }
        std::vector<double> val(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            val[i] = f(pts[i]);

        std::vector<std::size_t> order(n + 1);
        auto combine = [&](const std::vector<double> &c, const std::vector<double> &x, double t) {
            std::vector<double> r(n);
            for (std::size_t d = 0; d < n; ++d)
                r[d] = c[d] + t * (x[d] - c[d]);
            return r;
        };
        std::size_t it = 0;
        for (;; ++it)
        {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
            const auto best = order.front(), worst = order.back(), second = order[n - 1];
            double diam = 0.0;
            for (std::size_t i = 0; i <= n; ++i)
            {
                double d2 = 0.0;
                for (std::size_t d = 0; d < n; ++d)
                    d2 += (pts[i][d] - pts[best][d]) * (pts[i][d] - pts[best][d]);
                diam = std::max(diam, std::sqrt(d2));
            }
            if (diam < options.diameter_tolerance ||
                val[worst] - val[best] < options.spread_tolerance * (1.0 + std::abs(val[best])))
                break;
            if (it >= cap)
            {
                out.hit_iteration_cap = true;
                break;
            }
            std::vector<double> c(n, 0.0);
            for (std::size_t i = 0; i <= n; ++i)
                if (i != worst)
                    for (std::size_t d = 0; d < n; ++d)
                        c[d] += pts[i][d] / static_cast<double>(n);

            const auto xr = combine(c, pts[worst], -1.0);
            const double fr = f(xr);
            if (fr < val[best])
            {
                const auto xe = combine(c, pts[worst], -2.0);
                const double fe = f(xe);
                if (fe < fr)
                    pts[worst] = xe, val[worst] = fe;
                else
                    pts[worst] = xr, val[worst] = fr;
                continue;
            }
            if (fr < val[second])
            {
                pts[worst] = xr, val[worst] = fr;
                continue;
            }
            const bool outside = fr < val[worst];
            const auto xc = outside ? combine(c, xr, 0.5) : combine(c, pts[worst], 0.5);
            const double fc = f(xc);
            if (outside ? fc <= fr : fc < val[worst])
            {
                pts[worst] = xc, val[worst] = fc;
                continue;
            }
            for (std::size_t i = 0; i <= n; ++i)
                if (i != best)
                {
                    pts[i] = combine(pts[best], pts[i], 0.5);
                    val[i] = f(pts[i]);
                }
        }
        const auto best = static_cast<std::size_t>(std::min_element(val.begin(), val.end()) - val.begin());
        beta = beta_from(pts[best]);
        out.iterations = it;
    }

    const auto fit = alpha_ols(beta, problem);
    out.alpha = fit.alpha;
    out.beta = beta;
    out.rank_deficient = fit.rank_deficient;
    out.loss = problem.loss(out.alpha, out.beta);
    return out;
}

Interpretation interpret(const ReducedProblem &problem, const RefinedEstimate &estimate, const Scenario &scenario)
{
    const auto &cfg = scenario.config();
    Interpretation out;
    std::size_t first = problem.kept_j().front();
    for (std::size_t j : problem.kept_j())
        if (scenario.start_samples(scenario.decode(j).start) < scenario.start_samples(scenario.decode(first).start))
            first = j;
    const double origin = cfg.dictionary.starts_s[scenario.decode(first).start];

    for (std::size_t a = 0; a < problem.num_cells(); ++a)
    {
        const auto c = problem.kept_pq()[a];
        out.paths.push_back({c, cfg.grids.angles_deg[c.q], cfg.grids.delays_s[c.p], cfg.grids.delays_s[c.p] + origin,
                             estimate.alpha[static_cast<Eigen::Index>(a)]});
    }
    std::stable_sort(out.paths.begin(), out.paths.end(), [](const auto &x, const auto &y) {
        if (x.cell.p != y.cell.p)
            return x.cell.p < y.cell.p;
        return std::abs(x.alpha) > std::abs(y.alpha);
    });

    for (std::size_t b = 0; b < problem.num_atoms(); ++b)
    {
        const std::size_t j = problem.kept_j()[b];
        const auto d = scenario.decode(j);
        out.atoms.push_back({j, cfg.dictionary.kinds[d.kind], cfg.dictionary.frequencies_hz[d.freq],
                             cfg.dictionary.lengths_s[d.length], cfg.dictionary.starts_s[d.start] - origin,
                             estimate.beta[static_cast<Eigen::Index>(b)]});
    }
    std::stable_sort(out.atoms.begin(), out.atoms.end(),
                     [](const auto &x, const auto &y) { return x.start_s < y.start_s; });
    return out;
}

namespace
{

nlohmann::json cjson(cplx v)
{
    return nlohmann::json::array({v.real(), v.imag()});
}

} // namespace

nlohmann::json to_json(const RefinedEstimate &estimate, const Interpretation &interp)
{
    nlohmann::json alpha = nlohmann::json::array(), beta = nlohmann::json::array();
    for (Eigen::Index i = 0; i < estimate.alpha.size(); ++i)
        alpha.push_back(cjson(estimate.alpha[i]));
    for (Eigen::Index i = 0; i < estimate.beta.size(); ++i)
        beta.push_back(cjson(estimate.beta[i]));
    nlohmann::json paths = nlohmann::json::array(), atoms = nlohmann::json::array();
    for (const auto &p : interp.paths)
        paths.push_back({{"p", p.cell.p},
                         {"q", p.cell.q},
                         {"angle_deg", p.angle_deg},
                         {"delay_s", p.delay_s},
                         {"toa_s", p.toa_s},
                         {"alpha", cjson(p.alpha)}});
    for (const auto &a : interp.atoms)
        atoms.push_back({{"j", a.j},
                         {"kind", std::string(to_string(a.kind))},
                         {"freq_hz", a.freq_hz},
                         {"length_s", a.length_s},
                         {"start_s", a.start_s},
                         {"beta", cjson(a.beta)}});
    return {{"alpha", alpha},
            {"beta", beta},
            {"loss", estimate.loss},
            {"iterations", estimate.iterations},
            {"hit_iteration_cap", estimate.hit_iteration_cap},
            {"rank_deficient", estimate.rank_deficient},
            {"paths", paths},
            {"atoms", atoms}};
}

} // namespace mpsr
