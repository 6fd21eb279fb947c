#include "mpsr/bench.hpp"
#include "mpsr/config_io.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mpsr;
namespace fs = std::filesystem;

namespace
{

const fs::path data_dir = MPSR_TEST_DATA;

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir
{
    fs::path path;
    explicit TempDir(const std::string &name) : path(fs::temp_directory_path() / name)
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string &args, const fs::path &err_file)
{
    const std::string cmd = std::string(MPSR_BENCH_BIN) + " " + args + " > /dev/null 2> " + err_file.string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_CASE("rmse")
{
    CHECK_FALSE(compute_rmse({}, 1.0).has_value());
    CHECK(*compute_rmse({3.0, 3.0}, 3.0) == 0.0);
    CHECK(*compute_rmse({8.0}, 6.0) == doctest::Approx(2.0));
    CHECK(*compute_rmse({4.0, 2.0}, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("built-in plans")
{
    for (const auto &name : builtin_plan_names())
    {
        const auto plan = builtin_plan(name);
        CHECK(validate(plan.scenario).ok());
        CHECK(plan.truth.paths.paths.size() >= 2);
        const auto back = plan_from_json(plan_to_json(plan));
        CHECK(plan_to_json(back) == plan_to_json(plan));
    }
    CHECK_THROWS_AS(builtin_plan("nope"), ConfigError);

    const auto tt = builtin_plan("three-tone");
    CHECK(tt.snr_db == std::vector<double>{5.0, -5.0, -15.0});
    CHECK(tt.scenario.grids.delays_s.size() == 64);
    CHECK(tt.scenario.grids.angles_deg.size() == 90);

    const auto over = plan_from_json(nlohmann::json::parse(R"({"builtin":"barker","snr_db":[20],"replicates":2})"));
    CHECK(over.snr_db == std::vector<double>{20.0});
    CHECK(over.replicates == 2);
    CHECK_THROWS_AS(plan_from_json(nlohmann::json::parse(R"({"scenario":{}})")), ConfigError);
    CHECK_THROWS_AS(plan_from_json(nlohmann::json::parse(R"({"builtin":"barker","replicates":0})")), ConfigError);
}

TEST_CASE("monte-carlo summary matches the frozen golden file for any worker count")
{
    const auto plan = load_plan(data_dir / "tiny_plan.json");
    const auto golden = slurp(data_dir / "tiny_summary.csv");
    const auto one = run_mc(plan, 1);
    CHECK(summary_csv(one) == golden);
    for (unsigned w : {2u, 5u})
    {
        const auto many = run_mc(plan, w);
        CHECK(summary_csv(many) == golden);
        CHECK(summary_to_json(many) == summary_to_json(one));
    }
    // one record per (snr, method), in plan order
    REQUIRE(one.records.size() == 4);
    CHECK(one.records[0].snr_db == 10.0);
    CHECK(one.records[0].method == "omp");
    CHECK(one.records[1].method == "baseline");
    CHECK(one.outcomes.size() == 6);
    CHECK(one.outcomes[0].seed == one.outcomes[3].seed); // seeds are shared across SNRs
}

TEST_CASE("single snr, single replicate")
{
    auto plan = load_plan(data_dir / "tiny_plan.json");
    plan.snr_db = {30.0};
    plan.replicates = 1;
    const auto s = run_mc(plan, 1);
    REQUIRE(s.records.size() == 2);
    CHECK(s.records[0].replicates == 1);
    // at high SNR the two on-grid paths come back exactly
    REQUIRE(s.records[0].doa1.mean);
    CHECK(*s.records[0].doa1.mean == 0.0);
    CHECK(*s.records[0].doa2.mean == 30.0);
    CHECK(*s.records[0].toa1.mean == doctest::Approx(4e-9));
    CHECK(*s.records[0].toa2.mean == doctest::Approx(12e-9));
}

TEST_CASE("command line")
{
    TempDir tmp("mpsr_cli_test");
    const auto err = tmp.path / "err.txt";
    const auto plan = (data_dir / "tiny_plan.json").string();

    // scenario config out of the plan, then validate it
    const auto cfg_path = tmp.path / "cfg.json";
    std::ofstream(cfg_path) << config_to_json(load_plan(plan).scenario).dump();
    CHECK(run_cli("validate-config --config " + cfg_path.string(), err) == 0);

    auto bad = config_to_json(load_plan(plan).scenario);
    bad["grids"]["delays_s"] = {0.0, 1.5e-9};
    const auto bad_path = tmp.path / "bad.json";
    std::ofstream(bad_path) << bad.dump();
    CHECK(run_cli("validate-config --config " + bad_path.string(), err) == 3);

    CHECK(run_cli("validate-config --config " + (tmp.path / "missing.json").string(), err) == 2);
    const auto e = nlohmann::json::parse(slurp(err));
    CHECK(e["error"]["type"] == "config");
    CHECK(e["error"].contains("message"));

    CHECK(run_cli("frobnicate", err) == 2);

    const auto sim = tmp.path / "sim";
    REQUIRE(run_cli("simulate --plan " + plan + " --out " + sim.string() + " --replicates 1", err) == 0);
    const auto manifest = nlohmann::json::parse(slurp(sim / "manifest.json"));
    CHECK(manifest.contains("plan"));
    std::size_t files = 0;
    fs::path obs;
    for (const auto &entry : fs::directory_iterator(sim))
        if (entry.path().extension() == ".csv")
            ++files, obs = entry.path();
    CHECK(files == 2);

    std::size_t rows = 0;
    {
        std::ifstream in(obs);
        std::string line;
        while (std::getline(in, line))
            ++rows;
    }
    CHECK(rows == 1 + 3 * 64);

    const auto res = tmp.path / "res.json";
    REQUIRE(run_cli("recover " + obs.string() + " --config " + cfg_path.string() + " --out " + res.string(), err) == 0);
    const auto r = nlohmann::json::parse(slurp(res));
    for (const char *key : {"trajectory", "loss_curve", "kink", "selected", "refined"})
        CHECK(r.contains(key));

    // an observation that does not fit the config is a config error
    auto other = load_plan(plan).scenario;
    other.sampling.num_samples = 32;
    const auto other_path = tmp.path / "other.json";
    std::ofstream(other_path) << config_to_json(other).dump();
    CHECK(run_cli("recover " + obs.string() + " --config " + other_path.string(), err) == 2);

    const auto mc = tmp.path / "mc";
    REQUIRE(run_cli("mc --plan " + plan + " --out " + mc.string() + " --threads 2", err) == 0);
    CHECK(slurp(mc / "summary.csv") == slurp(data_dir / "tiny_summary.csv"));
    CHECK(fs::exists(mc / "summary.json"));
}
