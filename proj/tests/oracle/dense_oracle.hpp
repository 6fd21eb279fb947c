#pragma once

// Test-side reference implementations built from first principles: an explicit dense design
// matrix and exhaustive scoring over it. Only usable for tiny configurations.

#include "mpsr/predictor_engine.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle
{

using mpsr::cplx;
using mpsr::TripleIndex;

struct DenseX
{
    Eigen::MatrixXcd X;                // columns in (j, p, q) order, q fastest
    std::vector<TripleIndex> index;    // column -> triple
    std::size_t P = 0, Q = 0;

    Eigen::Index col(const TripleIndex &t) const
    {
        return static_cast<Eigen::Index>((t.j * P + t.p) * Q + t.q);
    }
};

inline DenseX dense_x(const mpsr::Scenario &sc)
{
    const auto &cfg = sc.config();
    const double fs = cfg.sampling.sample_rate_hz;
    const auto m = static_cast<Eigen::Index>(cfg.sampling.num_samples);
    const auto c = static_cast<Eigen::Index>(cfg.array.num_sensors);
    DenseX d;
    d.P = cfg.grids.delays_s.size();
    d.Q = cfg.grids.angles_deg.size();
    d.X = Eigen::MatrixXcd::Zero(c * m, static_cast<Eigen::Index>(sc.num_atoms() * d.P * d.Q));
    const double eps = 1e-6 / fs;
    for (std::size_t j = 0; j < sc.num_atoms(); ++j)
    {
        const auto di = sc.decode(j);
        const bool cosine = cfg.dictionary.kinds[di.kind] == mpsr::AtomKind::Cosine;
        const double f = cfg.dictionary.frequencies_hz[di.freq];
        const double len = cfg.dictionary.lengths_s[di.length];
        const double start = cfg.dictionary.starts_s[di.start];
        for (std::size_t p = 0; p < d.P; ++p)
            for (std::size_t q = 0; q < d.Q; ++q)
            {
                const double sn = std::sin(cfg.grids.angles_deg[q] * std::numbers::pi / 180.0);
                Eigen::VectorXcd x = Eigen::VectorXcd::Zero(c * m);
                for (Eigen::Index n = 0; n < m; ++n)
                {
                    const double u = static_cast<double>(n) / fs - cfg.grids.delays_s[p] - start;
                    // half-open support [0, len), boundary samples snapped
                    if (u < -eps || u >= len - eps)
                        continue;
                    const double ref = cfg.dictionary.phase == mpsr::PhaseReference::Start ? u : u + start;
                    const double arg = 2.0 * std::numbers::pi * f * ref;
                    const double v = cosine ? std::cos(arg) : std::sin(arg);
                    for (Eigen::Index ch = 0; ch < c; ++ch)
                        x[n * c + ch] = v * std::exp(cplx(0.0, -2.0 * std::numbers::pi *
                                                                   cfg.array.element_spacing_wavelengths *
                                                                   static_cast<double>(ch) * sn));
                }
                const double nrm = x.norm();
                if (nrm > 0.0)
                    x /= nrm;
                const TripleIndex t{j, p, q};
                d.X.col(d.col(t)) = x;
                d.index.push_back(t);
            }
    }
    return d;
}

// Exhaustive argmax of |x^H y|^2. Scores within rel_tie of the maximum count as ties and are
// resolved with the library's index order (duplicate columns differ only by rounding).
inline mpsr::ScanResult dense_argmax(const DenseX &d, const Eigen::VectorXcd &y, double rel_tie = 1e-9)
{
    const Eigen::VectorXcd corr = d.X.adjoint() * y;
    const double top = corr.cwiseAbs2().maxCoeff();
    mpsr::ScanResult best;
    bool have = false;
    for (Eigen::Index i = 0; i < corr.size(); ++i)
    {
        const double s = std::norm(corr[i]);
        if (s < top - rel_tie * top)
            continue;
        const auto &t = d.index[static_cast<std::size_t>(i)];
        if (!have || mpsr::precedes(t, best.index))
        {
            best = {t, s};
            have = true;
        }
    }
    best.score = top;
    return best;
}

// Least squares through the normal equations, independent of the library's factorization.
inline Eigen::VectorXcd normal_equations(const Eigen::MatrixXcd &A, const Eigen::VectorXcd &y)
{
    const Eigen::MatrixXcd g = A.adjoint() * A;
    return g.ldlt().solve(A.adjoint() * y);
}

} // namespace oracle
