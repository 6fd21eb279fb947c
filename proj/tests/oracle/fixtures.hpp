#pragma once

#include "mpsr/physics.hpp"
#include "mpsr/scenario.hpp"

#include <Eigen/Core>

#include <random>

namespace fixtures
{

// 216 columns, C*M = 120.
inline mpsr::ScenarioConfig tiny_config()
{
    mpsr::ScenarioConfig c;
    c.sampling = {1e9, 40};
    c.array = {3, 0.5};
    c.dictionary.kinds = {mpsr::AtomKind::Sine, mpsr::AtomKind::Cosine};
    c.dictionary.frequencies_hz = {50e6, 130e6};
    c.dictionary.lengths_s = {5e-9, 8e-9};
    c.dictionary.starts_s = {0.0, 2e-9, 4e-9};
    c.grids.delays_s = {0.0, 1e-9, 3e-9};
    c.grids.angles_deg = {-20.0, 10.0, 35.0};
    return c;
}

// Atoms may run past the window end (and some shifts land beyond it entirely).
inline mpsr::ScenarioConfig truncating_config()
{
    mpsr::ScenarioConfig c;
    c.sampling = {1e9, 16};
    c.array = {2, 0.5};
    c.dictionary.kinds = {mpsr::AtomKind::Sine, mpsr::AtomKind::Cosine};
    c.dictionary.frequencies_hz = {70e6, 190e6};
    c.dictionary.lengths_s = {5e-9, 8.5e-9};
    c.dictionary.starts_s = {0.0, 4e-9, 8e-9};
    c.grids.delays_s = {0.0, 3e-9, 6e-9, 9e-9};
    c.grids.angles_deg = {-40.0, 25.0};
    return c;
}

// Random small grid with J*P*Q <= max_columns and C*M <= 512.
inline mpsr::ScenarioConfig random_config(std::mt19937_64 &rng, std::size_t max_columns = 2000)
{
    std::uniform_int_distribution<int> pick(0, 1 << 20);
    for (;;)
    {
        mpsr::ScenarioConfig c;
        const double fs = 1e9;
        c.sampling = {fs, 24 + pick(rng) % 40};
        c.array = {2 + pick(rng) % 4, 0.5};
        if (c.array.num_sensors * c.sampling.num_samples > 512)
            continue;
        c.dictionary.kinds = pick(rng) % 2 ? std::vector{mpsr::AtomKind::Sine, mpsr::AtomKind::Cosine}
                                           : std::vector{mpsr::AtomKind::Cosine};
        const int nf = 1 + pick(rng) % 3;
        double f = 40e6 + 10e6 * (pick(rng) % 5);
        for (int i = 0; i < nf; ++i, f += 30e6 + 10e6 * (pick(rng) % 3))
            c.dictionary.frequencies_hz.push_back(f);
        const int nl = 1 + pick(rng) % 2;
        double l = (4 + pick(rng) % 4) * 1e-9;
        for (int i = 0; i < nl; ++i, l += (2 + pick(rng) % 4) * 1e-9)
            c.dictionary.lengths_s.push_back(l);
        const int ns = 1 + pick(rng) % 3;
        const int sstep = 1 + pick(rng) % 4;
        for (int i = 0; i < ns; ++i)
            c.dictionary.starts_s.push_back(i * sstep * 1e-9);
        const int np = 1 + pick(rng) % 5;
        const int pstep = 1 + pick(rng) % 3;
        for (int i = 0; i < np; ++i)
            c.grids.delays_s.push_back(i * pstep * 1e-9);
        const int nq = 2 + pick(rng) % 5;
        double a = -60.0 + pick(rng) % 30;
        for (int i = 0; i < nq; ++i, a += 7.0 + pick(rng) % 15)
            c.grids.angles_deg.push_back(a);
        if (c.grids.angles_deg.back() > 90.0)
            continue;
        const std::size_t cols =
            c.dictionary.kinds.size() * nf * nl * ns * static_cast<std::size_t>(np) * static_cast<std::size_t>(nq);
        const auto shift = (ns - 1) * sstep + (np - 1) * pstep;
        if (cols > max_columns || shift + c.dictionary.lengths_s.back() * fs > c.sampling.num_samples + 1e-9)
            continue;
        return c;
    }
}

inline Eigen::VectorXcd random_vector(std::mt19937_64 &rng, Eigen::Index n)
{
    std::normal_distribution<double> g;
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v[i] = mpsr::cplx(g(rng), g(rng));
    return v;
}

} // namespace fixtures
