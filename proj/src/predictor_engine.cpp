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

#include "mpsr/predictor_engine.hpp"
#include "mpsr/parallel.hpp"

#include <cmath>
#include <numbers>
#include <tuple>

namespace mpsr
{

namespace
{

double trig(AtomKind kind, double phase)
{
    return kind == AtomKind::Cosine ? std::cos(phase) : std::sin(phase);
}

void offer(ScanResult &best, double score, const TripleIndex &idx)
{
    if (score > best.score || (score == best.score && precedes(idx, best.index)))
        best = {idx, score};
}

} // namespace

bool precedes(const TripleIndex &a, const TripleIndex &b)
{
    return std::tie(a.p, a.q, a.j) < std::tie(b.p, b.q, b.j);
}

NormCache::NormCache(const Scenario &scenario, const Eigen::VectorXd &steering_energy)
    : nf_(scenario.num_freqs()), nl_(scenario.num_lengths()), nq_(scenario.num_angles()),
      m_(scenario.num_samples()), steering_energy_(steering_energy)
{
    const auto &kinds = scenario.config().dictionary.kinds;
    const auto &freqs = scenario.config().dictionary.frequencies_hz;
    energy_.assign(kinds.size() * nf_ * (m_ + 1), 0.0);
    for (std::size_t k = 0; k < kinds.size(); ++k)
        for (std::size_t f = 0; f < nf_; ++f)
        {
            const double omega = 2.0 * std::numbers::pi * freqs[f] / scenario.sample_rate_hz();
            double *e = &energy_[(k * nf_ + f) * (m_ + 1)];
            for (std::size_t n = 0; n < m_; ++n)
            {
                const double v = trig(kinds[k], omega * static_cast<double>(n));
                e[n + 1] = e[n] + v * v;
            }
        }
    norms_.resize(kinds.size() * nf_ * nl_ * nq_);
    for (std::size_t k = 0; k < kinds.size(); ++k)
        for (std::size_t f = 0; f < nf_; ++f)
            for (std::size_t l = 0; l < nl_; ++l)
            {
                const auto len = std::min<std::int64_t>(scenario.length_samples(l), static_cast<std::int64_t>(m_));
                for (std::size_t q = 0; q < nq_; ++q)
                    norms_[((k * nf_ + f) * nl_ + l) * nq_ + q] = truncated(k, f, q, len);
            }
}

double NormCache::truncated(std::size_t kind, std::size_t f, std::size_t q, std::int64_t samples) const
{
    return windowed(kind, f, q, 0, samples);
}

double NormCache::windowed(std::size_t kind, std::size_t f, std::size_t q, std::int64_t offset,
                           std::int64_t samples) const
{
    const auto m = static_cast<std::int64_t>(m_);
    samples = std::min(samples, m - offset);
    if (samples <= 0)
        return 0.0;
    const double e = energy(kind, f, offset + samples) - energy(kind, f, offset);
    return std::sqrt(steering_energy_[static_cast<Eigen::Index>(q)] * std::max(e, 0.0));
}

namespace
{

Eigen::MatrixXcd steering_matrix(const Scenario &sc)
{
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(sc.num_sensors()), static_cast<Eigen::Index>(sc.num_angles()));
    for (std::size_t q = 0; q < sc.num_angles(); ++q)
        a.col(static_cast<Eigen::Index>(q)) = steer(sc.config().grids.angles_deg[q], sc.config().array);
    return a;
}

} // namespace

PredictorEngine::PredictorEngine(Scenario scenario, unsigned workers)
    : scenario_(std::move(scenario)), workers_(workers < 1 ? 1 : workers), steering_(steering_matrix(scenario_)),
      steering_energy_(steering_.colwise().squaredNorm().transpose()), norms_(scenario_, steering_energy_)
{
    const std::size_t m = scenario_.num_samples();
    for (double f : scenario_.config().dictionary.frequencies_hz)
    {
        const double omega = 2.0 * std::numbers::pi * f / scenario_.sample_rate_hz();
        omega_.push_back(omega);
        std::vector<cplx> ph(m + 1);
        for (std::size_t n = 0; n <= m; ++n)
            ph[n] = std::polar(1.0, omega * static_cast<double>(n));
        phase_.push_back(std::move(ph));
    }
    // With start-referenced phase the column depends on start + delay only, so one representative
    // per shift suffices: the smallest delay index reaching it.
    const bool by_shift = scenario_.config().dictionary.phase == PhaseReference::Start;
    std::vector<char> seen(by_shift ? m : 0, 0);
    for (std::size_t p = 0; p < scenario_.num_delays(); ++p)
        for (std::size_t s = 0; s < scenario_.num_starts(); ++s)
        {
            const auto k = scenario_.delay_samples(p) + scenario_.start_samples(s);
            if (k >= static_cast<std::int64_t>(m))
                continue;
            if (by_shift)
            {
                if (seen[static_cast<std::size_t>(k)])
                    continue;
                seen[static_cast<std::size_t>(k)] = 1;
            }
            placements_.push_back({p, s, k});
        }
}

std::int64_t PredictorEngine::phase_origin(std::size_t s, std::size_t p) const
{
    const auto d = scenario_.delay_samples(p);
    return scenario_.config().dictionary.phase == PhaseReference::Start ? d + scenario_.start_samples(s) : d;
}

std::int64_t PredictorEngine::energy_offset(std::size_t s) const
{
    return scenario_.config().dictionary.phase == PhaseReference::Start ? 0 : scenario_.start_samples(s);
}

double PredictorEngine::column_norm(const TripleIndex &idx) const
{
    const auto d = scenario_.decode(idx.j);
    const auto m = static_cast<std::int64_t>(scenario_.num_samples());
    const auto k = scenario_.start_samples(d.start) + scenario_.delay_samples(idx.p);
    const auto len = std::min(scenario_.length_samples(d.length), m - k);
    return norms_.windowed(d.kind, d.freq, idx.q, energy_offset(d.start), len);
}

Eigen::VectorXcd PredictorEngine::column(const TripleIndex &idx) const
{
    const auto &cfg = scenario_.config();
    const auto samples = sample_atom(atom_spec(scenario_, idx.j), cfg.sampling, cfg.grids.delays_s[idx.p]);
    const auto c = static_cast<Eigen::Index>(scenario_.num_sensors());
    const Eigen::VectorXcd a = steering_.col(static_cast<Eigen::Index>(idx.q));
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(c * static_cast<Eigen::Index>(samples.size()));
    const double eta = column_norm(idx);
    if (eta <= 0.0)
        return x;
    for (std::size_t n = 0; n < samples.size(); ++n)
        if (samples[n] != 0.0)
            x.segment(static_cast<Eigen::Index>(n) * c, c) = a * (samples[n] / eta);
    return x;
}

Beamspace PredictorEngine::beamspace(const Eigen::VectorXcd &r) const
{
    const auto c = static_cast<Eigen::Index>(scenario_.num_sensors());
    const auto m = static_cast<Eigen::Index>(scenario_.num_samples());
    Eigen::Map<const Eigen::MatrixXcd> rm(r.data(), c, m);
    return steering_.adjoint() * rm;
}

Beamspace PredictorEngine::beamspace(const Eigen::VectorXcd &r, std::span<const std::size_t> rows) const
{
    const auto c = static_cast<Eigen::Index>(scenario_.num_sensors());
    const auto m = static_cast<Eigen::Index>(scenario_.num_samples());
    Eigen::Map<const Eigen::MatrixXcd> rm(r.data(), c, m);
    Beamspace b(static_cast<Eigen::Index>(rows.size()), m);
    for (std::size_t i = 0; i < rows.size(); ++i)
        b.row(static_cast<Eigen::Index>(i)) = steering_.col(static_cast<Eigen::Index>(rows[i])).adjoint() * rm;
    return b;
}

cplx PredictorEngine::correlate_direct(const TripleIndex &idx, const Eigen::VectorXcd &r) const
{
    return column(idx).dot(r);
}

cplx PredictorEngine::correlate_one(const TripleIndex &idx, const Beamspace &b) const
{
    const double eta = column_norm(idx);
    if (eta <= 0.0)
        return {};
    const auto d = scenario_.decode(idx.j);
    const auto kind = scenario_.config().dictionary.kinds[d.kind];
    const auto m = static_cast<std::int64_t>(scenario_.num_samples());
    const auto k = scenario_.start_samples(d.start) + scenario_.delay_samples(idx.p);
    const auto len = std::min(scenario_.length_samples(d.length), m - k);
    const auto lead = k - phase_origin(d.start, idx.p);
    const cplx *beam = b.row(static_cast<Eigen::Index>(idx.q)).data();
    cplx acc = 0.0;
    for (std::int64_t n = 0; n < len; ++n)
        acc += trig(kind, omega_[d.freq] * static_cast<double>(lead + n)) * beam[k + n];
    return acc / eta;
}

cplx PredictorEngine::correlate_one(const TripleIndex &idx, const Eigen::VectorXcd &r) const
{
    return correlate_one(idx, beamspace(r));
}

double PredictorEngine::score_alpha_group(const Cell &cell, std::span<const std::size_t> active_j,
                                          const Eigen::VectorXcd &r) const
{
    const auto b = beamspace(r);
    double s = 0.0;
    for (std::size_t j : active_j)
        s += std::norm(correlate_one({j, cell.p, cell.q}, b));
    return s;
}

double PredictorEngine::score_beta_group(std::size_t j, std::span<const Cell> active_pq,
                                         const Eigen::VectorXcd &r) const
{
    const auto b = beamspace(r);
    double s = 0.0;
    for (const auto &cell : active_pq)
        s += std::norm(correlate_one({j, cell.p, cell.q}, b));
    return s;
}

void PredictorEngine::build_prefix(std::size_t f, const cplx *beam, Prefix &out) const
{
    const std::size_t m = scenario_.num_samples();
    const auto &ph = phase_[f];
    out.plus.resize(m + 1);
    out.minus.resize(m + 1);
    out.plus[0] = out.minus[0] = 0.0;
    for (std::size_t n = 0; n < m; ++n)
    {
        out.plus[n + 1] = out.plus[n] + ph[n] * beam[n];
        out.minus[n + 1] = out.minus[n] + std::conj(ph[n]) * beam[n];
    }
}

std::pair<cplx, cplx> PredictorEngine::window(std::size_t f, std::int64_t L, std::int64_t k, std::int64_t origin,
                                              const Prefix &pre) const
{
    const auto m = static_cast<std::int64_t>(scenario_.num_samples());
    const auto len = std::min(L, m - k);
    if (len <= 0)
        return {};
    const auto a = static_cast<std::size_t>(k);
    const auto e = static_cast<std::size_t>(k + len);
    const cplx ph = phase_[f][static_cast<std::size_t>(origin)];
    const cplx ep = std::conj(ph) * (pre.plus[e] - pre.plus[a]);
    const cplx em = ph * (pre.minus[e] - pre.minus[a]);
    return {0.5 * (ep + em), cplx(0.0, -0.5) * (ep - em)};
}

double PredictorEngine::scaled_power(std::size_t kind, std::size_t f, std::size_t l, std::size_t s, std::size_t q,
                                     std::int64_t k, const std::pair<cplx, cplx> &raw) const
{
    const auto m = static_cast<std::int64_t>(scenario_.num_samples());
    const auto len = std::min(scenario_.length_samples(l), m - k);
    const double eta = norms_.windowed(kind, f, q, energy_offset(s), len);
    if (eta <= 0.0)
        return 0.0;
    const cplx v = scenario_.config().dictionary.kinds[kind] == AtomKind::Cosine ? raw.first : raw.second;
    return std::norm(v) / (eta * eta);
}

ShiftProfile PredictorEngine::shift_profile(std::size_t f, std::size_t l, std::span<const cplx> beam) const
{
    Prefix pre;
    build_prefix(f, beam.data(), pre);
    const std::size_t m = scenario_.num_samples();
    ShiftProfile out;
    out.cosine.resize(m);
    out.sine.resize(m);
    for (std::size_t k = 0; k < m; ++k)
        std::tie(out.cosine[k], out.sine[k]) =
            window(f, scenario_.length_samples(l), static_cast<std::int64_t>(k), static_cast<std::int64_t>(k), pre);
    return out;
}

std::vector<double> PredictorEngine::alpha_scores(std::span<const std::size_t> active_j,
                                                  const Eigen::VectorXcd &r) const
{
    const std::size_t nq = scenario_.num_angles();
    const std::size_t np = scenario_.num_delays();
    const auto m = static_cast<std::int64_t>(scenario_.num_samples());
    const auto b = beamspace(r);
    std::vector<double> out(np * nq, 0.0);
    parallel_for(nq, workers_, [&](std::size_t q0, std::size_t q1, unsigned) {
        std::vector<Prefix> pre(scenario_.num_freqs());
        std::vector<char> built(scenario_.num_freqs());
        for (std::size_t q = q0; q < q1; ++q)
        {
            std::fill(built.begin(), built.end(), 0);
            const cplx *beam = b.row(static_cast<Eigen::Index>(q)).data();
            for (std::size_t j : active_j)
            {
                const auto d = scenario_.decode(j);
                if (!built[d.freq])
                {
                    build_prefix(d.freq, beam, pre[d.freq]);
                    built[d.freq] = 1;
                }
                const auto len = scenario_.length_samples(d.length);
                for (std::size_t p = 0; p < np; ++p)
                {
                    const auto k = scenario_.start_samples(d.start) + scenario_.delay_samples(p);
                    if (k >= m)
                        continue;
                    const auto raw = window(d.freq, len, k, phase_origin(d.start, p), pre[d.freq]);
                    out[p * nq + q] += scaled_power(d.kind, d.freq, d.length, d.start, q, k, raw);
                }
            }
        }
    });
    return out;
}

std::vector<double> PredictorEngine::beta_scores(std::span<const Cell> active_pq, const Eigen::VectorXcd &r) const
{
    const auto m = static_cast<std::int64_t>(scenario_.num_samples());
    std::vector<double> out(scenario_.num_atoms(), 0.0);
    for (const auto &cell : active_pq)
    {
        const std::size_t row[] = {cell.q};
        const auto b = beamspace(r, row);
        const cplx *beam = b.data();
        const auto delay = scenario_.delay_samples(cell.p);
        parallel_for(scenario_.num_freqs(), workers_, [&](std::size_t f0, std::size_t f1, unsigned) {
            Prefix pre;
            for (std::size_t f = f0; f < f1; ++f)
            {
                build_prefix(f, beam, pre);
                for (std::size_t l = 0; l < scenario_.num_lengths(); ++l)
                {
                    const auto len = scenario_.length_samples(l);
                    for (std::size_t s = 0; s < scenario_.num_starts(); ++s)
                    {
                        const auto k = scenario_.start_samples(s) + delay;
                        if (k >= m)
                            continue;
                        const auto raw = window(f, len, k, phase_origin(s, cell.p), pre);
                        for (std::size_t kind = 0; kind < scenario_.num_kinds(); ++kind)
                            out[scenario_.encode({kind, f, l, s})] += scaled_power(kind, f, l, s, cell.q, k, raw);
                    }
                }
            }
        });
    }
    return out;
}

ScanResult PredictorEngine::scan_initial(const Eigen::VectorXcd &y) const
{
    const std::size_t nq = scenario_.num_angles();
    const auto b = beamspace(y);
    std::vector<ScanResult> partial(std::max(1u, workers_));
    parallel_for(nq, workers_, [&](std::size_t q0, std::size_t q1, unsigned w) {
        Prefix pre;
        ScanResult best;
        for (std::size_t q = q0; q < q1; ++q)
        {
            const cplx *beam = b.row(static_cast<Eigen::Index>(q)).data();
            for (std::size_t f = 0; f < scenario_.num_freqs(); ++f)
            {
                build_prefix(f, beam, pre);
                for (std::size_t l = 0; l < scenario_.num_lengths(); ++l)
                {
                    const auto len = scenario_.length_samples(l);
                    for (const auto &pl : placements_)
                    {
                        const auto raw = window(f, len, pl.shift, phase_origin(pl.s, pl.p), pre);
                        for (std::size_t kind = 0; kind < scenario_.num_kinds(); ++kind)
                            offer(best, scaled_power(kind, f, l, pl.s, q, pl.shift, raw),
                                  {scenario_.encode({kind, f, l, pl.s}), pl.p, q});
                    }
                }
            }
        }
        partial[w] = best;
    });
    ScanResult best;
    for (const auto &r : partial)
        if (r.score >= 0.0)
            offer(best, r.score, r.index);
    return best;
}

} // namespace mpsr
