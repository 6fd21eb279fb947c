#include "oracle/dense_oracle.hpp"
#include "oracle/fixtures.hpp"

#include "mpsr/refine.hpp"

#include <doctest.h>

#include <random>

using namespace mpsr;

namespace
{

struct Instance
{
    std::vector<std::size_t> js;
    std::vector<Cell> cells;
    Eigen::VectorXcd beta, alpha, y;
};

cplx random_coeff(std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> mag(0.5, 1.5), ph(-3.14159, 3.14159);
    return std::polar(mag(rng), ph(rng));
}

// Dense X(beta) = sum_b beta_b [x(j_b, cell_0) ... x(j_b, cell_last)].
Eigen::MatrixXcd dense_mixed(const oracle::DenseX &d, const Instance &in, const Eigen::VectorXcd &beta)
{
    Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(d.X.rows(), static_cast<Eigen::Index>(in.cells.size()));
    for (std::size_t b = 0; b < in.js.size(); ++b)
        for (std::size_t a = 0; a < in.cells.size(); ++a)
            x.col(static_cast<Eigen::Index>(a)) +=
                beta[static_cast<Eigen::Index>(b)] * d.X.col(d.col({in.js[b], in.cells[a].p, in.cells[a].q}));
    return x;
}

// Distinct atoms on distinct cells, with beta[0] = 1 and y = X(beta) alpha.
Instance exact_instance(const PredictorEngine &eng, const oracle::DenseX &d, std::mt19937_64 &rng, std::size_t nb,
                        std::size_t na)
{
    const auto &sc = eng.scenario();
    Instance in;
    while (in.js.size() < nb)
    {
        const std::size_t j = rng() % sc.num_atoms();
        if (std::find(in.js.begin(), in.js.end(), j) == in.js.end())
            in.js.push_back(j);
    }
    while (in.cells.size() < na)
    {
        const Cell c{rng() % sc.num_delays(), rng() % sc.num_angles()};
        if (std::find(in.cells.begin(), in.cells.end(), c) == in.cells.end())
            in.cells.push_back(c);
    }
    in.beta.resize(static_cast<Eigen::Index>(nb));
    in.alpha.resize(static_cast<Eigen::Index>(na));
    for (auto &b : in.beta)
        b = random_coeff(rng);
    in.beta[0] = 1.0;
    for (auto &a : in.alpha)
        a = random_coeff(rng);
    in.y = dense_mixed(d, in, in.beta) * in.alpha;
    return in;
}

} // namespace

TEST_CASE("reduced problem and alpha_ols against dense oracles")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial)
    {
        auto cfg = fixtures::random_config(rng, 1500);
        cfg.dictionary.phase = trial % 2 ? PhaseReference::Start : PhaseReference::Origin;
        const PredictorEngine eng{Scenario(cfg)};
        const auto d = oracle::dense_x(eng.scenario());
        const std::size_t nb = std::min<std::size_t>(1 + trial % 3, eng.scenario().num_atoms());
        const std::size_t na = std::min<std::size_t>(1 + trial % 2, d.P * d.Q);
        const auto in = exact_instance(eng, d, rng, nb, na);
        const Eigen::VectorXcd y = in.y + 0.3 * fixtures::random_vector(rng, d.X.rows());
        const ReducedProblem prob(eng, in.js, in.cells, y);

        Eigen::VectorXcd beta(static_cast<Eigen::Index>(nb));
        for (auto &b : beta)
            b = random_coeff(rng);
        beta[0] = 1.0;
        const Eigen::MatrixXcd xb = dense_mixed(d, in, beta);
        CHECK((prob.mixed(beta) - xb).norm() <= 1e-10 * xb.norm());

        const auto fit = alpha_ols(beta, prob);
        if (fit.rank_deficient)
            continue; // coinciding columns: the normal equations are singular
        const auto ref = oracle::normal_equations(xb, y);
        CHECK((fit.alpha - ref).norm() <= 1e-8 * std::max(1.0, ref.norm()));
        const double want = (y - xb * ref).squaredNorm();
        CHECK(std::abs(prob.loss(fit.alpha, beta) - want) <= 1e-8 * y.squaredNorm());
        CHECK(std::abs(prob.profiled_loss(beta) - want) <= 1e-8 * y.squaredNorm());
    }
}

TEST_CASE("alpha_ols recovers alpha at the true beta")
{
    std::mt19937_64 rng(3);
    const PredictorEngine eng{Scenario(fixtures::tiny_config())};
    const auto d = oracle::dense_x(eng.scenario());
    const auto in = exact_instance(eng, d, rng, 3, 2);
    const ReducedProblem prob(eng, in.js, in.cells, in.y);
    const auto fit = alpha_ols(in.beta, prob);
    CHECK((fit.alpha - in.alpha).norm() <= 1e-8);
    CHECK(prob.loss(fit.alpha, in.beta) <= 1e-20 * in.y.squaredNorm());
}

TEST_CASE("init_beta")
{
    std::mt19937_64 rng(21);
    Eigen::VectorXcd b0(3), a0(2);
    b0 << cplx(2.0, 1.0), cplx(-0.5, 0.3), cplx(0.1, -1.2);
    a0 << cplx(0.7, 0.0), cplx(-0.2, 0.9);
    Eigen::VectorXcd w(6);
    for (int b = 0; b < 3; ++b)
        for (int a = 0; a < 2; ++a)
            w[b * 2 + a] = b0[b] * a0[a];
    const std::vector<std::size_t> js{4, 9, 2};

    SUBCASE("exact rank one")
    {
        const auto init = init_beta(w, js, 2);
        CHECK_FALSE(init.pivoted);
        CHECK(init.kept_j == js);
        CHECK(init.beta[0] == cplx(1.0, 0.0));
        CHECK((init.beta - b0 / b0[0]).norm() < 1e-12);
    }
    SUBCASE("rank one plus small noise")
    {
        const Eigen::VectorXcd noisy = w + 1e-6 * fixtures::random_vector(rng, 6);
        CHECK((init_beta(noisy, js, 2).beta - b0 / b0[0]).norm() < 1e-5);
    }
    SUBCASE("single atom")
    {
        const auto init = init_beta(w.head(2), {7}, 2);
        CHECK(init.beta.size() == 1);
        CHECK(init.beta[0] == cplx(1.0, 0.0));
    }
    SUBCASE("zero first row pivots to the largest row")
    {
        Eigen::VectorXcd z = w;
        z.head(2).setZero();
        const auto init = init_beta(z, js, 2);
        CHECK(init.pivoted);
        CHECK(init.kept_j == std::vector<std::size_t>{2, 4, 9});
        // rows of the reordered problem: atom 2, atom 4 (zero), atom 9
        CHECK(std::abs(init.beta[1]) < 1e-12);
        CHECK(std::abs(init.beta[2] - b0[1] / b0[2]) < 1e-12);
    }
    CHECK_THROWS_AS(init_beta(w, js, 3), std::invalid_argument);
}

TEST_CASE("refine on exact reduced models")
{
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 6; ++trial)
    {
        auto cfg = fixtures::tiny_config();
        cfg.dictionary.phase = trial % 2 ? PhaseReference::Start : PhaseReference::Origin;
        const PredictorEngine eng{Scenario(cfg)};
        const auto d = oracle::dense_x(eng.scenario());
        const auto in = exact_instance(eng, d, rng, 2 + trial % 2, 1 + trial % 2);
        const ReducedProblem prob(eng, in.js, in.cells, in.y);

        Eigen::VectorXcd start = in.beta;
        for (Eigen::Index i = 1; i < start.size(); ++i)
            start[i] += cplx(0.05, -0.03);
        const auto est = refine(prob, start);
        CAPTURE(trial);
        CHECK(est.beta[0] == cplx(1.0, 0.0));
        CHECK(est.loss <= 1e-10 * in.y.squaredNorm());
        CHECK((est.beta - in.beta).norm() <= 1e-5);
        CHECK((est.alpha - in.alpha).norm() <= 1e-5);
        CHECK(std::abs(est.loss - prob.loss(est.alpha, est.beta)) <= 1e-10 * in.y.squaredNorm());
        CHECK_FALSE(est.hit_iteration_cap);
    }
}

TEST_CASE("refine: scale convention and the single-atom case")
{
    std::mt19937_64 rng(5);
    const PredictorEngine eng{Scenario(fixtures::tiny_config())};
    const auto d = oracle::dense_x(eng.scenario());
    auto in = exact_instance(eng, d, rng, 2, 2);
    const Eigen::VectorXcd y = in.y + 0.05 * fixtures::random_vector(rng, d.X.rows());
    const ReducedProblem prob(eng, in.js, in.cells, y);

    // the loss only sees the product beta (x) alpha
    const cplx c(0.3, -1.7);
    CHECK(std::abs(prob.loss(in.alpha / c, c * in.beta) - prob.loss(in.alpha, in.beta)) <= 1e-10 * y.squaredNorm());

    Eigen::VectorXcd s1 = in.beta, s2 = in.beta;
    s1[1] *= cplx(1.1, 0.1);
    s2[1] *= cplx(0.9, -0.1);
    const auto e1 = refine(prob, s1), e2 = refine(prob, s2);
    const Eigen::MatrixXcd p1 = e1.beta * e1.alpha.transpose(), p2 = e2.beta * e2.alpha.transpose();
    CHECK((p1 - p2).norm() <= 1e-6 * p1.norm());

    const ReducedProblem single(eng, {in.js[0]}, in.cells, y);
    const auto one = refine(single, Eigen::VectorXcd::Ones(1));
    CHECK(one.iterations == 0);
    CHECK((one.alpha - alpha_ols(Eigen::VectorXcd::Ones(1), single).alpha).norm() == 0.0);
}

TEST_CASE("interpretation references TOA to the earliest kept atom")
{
    const PredictorEngine eng{Scenario(fixtures::tiny_config())};
    const auto &sc = eng.scenario();
    // atoms with starts 2 ns and 4 ns; cells at delays 3 ns and 0 ns
    const std::size_t ja = sc.encode({0, 0, 0, 2}), jb = sc.encode({1, 1, 1, 1});
    const std::vector<Cell> cells{{2, 1}, {0, 2}};
    const Eigen::VectorXcd y = eng.column({ja, 2, 1}) + eng.column({jb, 0, 2});
    const ReducedProblem prob(eng, {ja, jb}, cells, y);
    RefinedEstimate est;
    est.alpha = Eigen::VectorXcd::Ones(2);
    est.beta = Eigen::VectorXcd::Ones(2);
    const auto it = interpret(prob, est, sc);
    REQUIRE(it.paths.size() == 2);
    CHECK(it.paths[0].cell == Cell{0, 2}); // earliest delay first
    CHECK(it.paths[0].toa_s == doctest::Approx(0.0 + 2e-9));
    CHECK(it.paths[1].toa_s == doctest::Approx(3e-9 + 2e-9));
    CHECK(it.paths[1].angle_deg == sc.config().grids.angles_deg[1]);
    REQUIRE(it.atoms.size() == 2);
    CHECK(it.atoms[0].j == jb);
    CHECK(it.atoms[0].start_s == 0.0);
    CHECK(it.atoms[1].start_s == doctest::Approx(2e-9));

    const auto js = to_json(est, it);
    CHECK(js["paths"].size() == 2);
    CHECK(js["atoms"].size() == 2);
}
