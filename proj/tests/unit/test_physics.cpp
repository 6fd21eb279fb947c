#include "mpsr/physics.hpp"
#include "mpsr/presets.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mpsr;

namespace
{

const SamplingSpec sampling{1.28e9, 1024};

} // namespace

TEST_CASE("atom values at support boundaries")
{
    const AtomSpec c{AtomKind::Cosine, 123e6, 50e-9, 20e-9, PhaseReference::Start};
    const AtomSpec s{AtomKind::Sine, 123e6, 50e-9, 20e-9, PhaseReference::Start};
    CHECK(atom_value(c, 20e-9) == 1.0);
    CHECK(atom_value(s, 20e-9) == 0.0);
    CHECK(atom_value(c, 70e-9) == 0.0);
    CHECK(atom_value(c, 19.99e-9) == 0.0);
    CHECK(atom_value(c, 69.99e-9) != 0.0);
}

TEST_CASE("origin-referenced phase keeps the sinusoid running across starts")
{
    const AtomSpec early{AtomKind::Sine, 123e6, 50e-9, 0.0};
    const AtomSpec late{AtomKind::Sine, 123e6, 50e-9, 20e-9};
    for (double t : {20e-9, 31e-9, 49.5e-9})
        CHECK(atom_value(late, t) == doctest::Approx(atom_value(early, t)).epsilon(1e-15));
    CHECK(atom_value(late, 20e-9) == doctest::Approx(std::sin(2.0 * std::numbers::pi * 123e6 * 20e-9)));
}

TEST_CASE("quarter period of a 100 MHz cosine is zero")
{
    const AtomSpec c{AtomKind::Cosine, 100e6, 100e-9, 0.0};
    CHECK(std::abs(atom_value(c, 2.5e-9)) < 1e-12);
}

TEST_CASE("integer delay shifts the sampled atom")
{
    const AtomSpec a{AtomKind::Sine, 140e6, 100e-9, 150e-9};
    const double dt = 1.0 / sampling.sample_rate_hz;
    const auto base = sample_atom(a, sampling, 0.0);
    const auto moved = sample_atom(a, sampling, 37 * dt);
    for (std::size_t n = 0; n < base.size(); ++n)
        CHECK(moved[n] == doctest::Approx(n >= 37 ? base[n - 37] : 0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("nonzero sample count follows the half-open convention")
{
    const double dt = 1.0 / sampling.sample_rate_hz;
    for (double len : {80e-9, 85e-9, 150e-9, 3.5 * dt})
    {
        const AtomSpec a{AtomKind::Cosine, 90e6, len, 0.0};
        const auto v = sample_atom(a, sampling, 0.0);
        std::size_t count = 0;
        for (std::size_t n = 0; n < v.size(); ++n)
            if (static_cast<double>(n) * dt < len - 1e-6 * dt)
                ++count;
        std::size_t support = 0;
        for (std::size_t n = 0; n < v.size(); ++n)
            support += (n < count);
        CHECK(static_cast<std::int64_t>(count) == samples_within(len, sampling.sample_rate_hz));
        for (std::size_t n = count; n < v.size(); ++n)
            CHECK(v[n] == 0.0);
    }
}

TEST_CASE("steering vectors")
{
    const auto a0 = steer(0.0, {5, 0.5});
    for (int c = 0; c < 5; ++c)
        CHECK(std::abs(a0[c] - cplx(1.0, 0.0)) < 1e-15);
    const auto a90 = steer(90.0, {2, 0.5});
    CHECK(std::abs(a90[1] - cplx(-1.0, 0.0)) < 1e-12);
    const auto a30 = steer(30.0, {3, 0.5});
    CHECK(std::abs(a30[1] - cplx(0.0, -1.0)) < 1e-12);
    CHECK(std::abs(a30[2] - cplx(-1.0, 0.0)) < 1e-12);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-90.0, 90.0);
    for (int i = 0; i < 50; ++i)
    {
        const auto a = steer(u(rng), {7, 0.5});
        CHECK(a[0] == cplx(1.0, 0.0));
        for (int c = 0; c < 7; ++c)
            CHECK(std::abs(std::abs(a[c]) - 1.0) < 1e-14);
    }
}

TEST_CASE("waveform synthesis is linear")
{
    const AtomSpec a{AtomKind::Sine, 100e6, 150e-9, 0.0};
    Waveform one{{{a, 1.0}}};
    const auto s1 = synth_waveform(one, sampling);
    const auto ref = sample_atom(a, sampling, 0.0);
    for (std::size_t n = 0; n < ref.size(); ++n)
        CHECK(s1[static_cast<Eigen::Index>(n)] == cplx(ref[n], 0.0));
    Waveform two{{{a, 2.0}}};
    CHECK((synth_waveform(two, sampling) - 2.0 * s1).norm() == 0.0);

    auto w1 = three_tone_waveform();
    auto w2 = three_tone_waveform();
    for (auto &t : w2.terms)
        t.second = cplx(0.3, -1.7);
    Waveform sum = w1;
    for (std::size_t i = 0; i < sum.terms.size(); ++i)
        sum.terms[i].second += w2.terms[i].second;
    const auto diff = synth_waveform(sum, sampling) - synth_waveform(w1, sampling) - synth_waveform(w2, sampling);
    CHECK(diff.norm() < 1e-13);
}

TEST_CASE("three-tone support is [0,150) u [150,250) u [300,420) ns")
{
    const auto s = synth_waveform(three_tone_waveform(), sampling);
    const double dt = 1.0 / sampling.sample_rate_hz;
    for (Eigen::Index n = 0; n < s.size(); ++n)
    {
        const double t = static_cast<double>(n) * dt;
        const bool inside = t < 250e-9 - 1e-15 || (t >= 300e-9 - 1e-15 && t < 420e-9 - 1e-15);
        if (!inside)
            CHECK(s[n] == cplx(0.0, 0.0));
    }
    // sine atoms vanish at their own start, so test a sample just after each start
    CHECK(std::abs(s[1]) > 0.0);
    CHECK(std::abs(s[193]) > 0.0);
    CHECK(std::abs(s[385]) > 0.0);
}
