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

#include "mpsr/bench.hpp"
#include "mpsr/config_io.hpp"
#include "mpsr/parallel.hpp"
#include "mpsr/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mpsr
{

using nlohmann::json;

ExperimentPlan builtin_plan(std::string_view name, bool full)
{
    ExperimentPlan plan;
    plan.name = std::string(name);
    plan.seed_base = 1;
    plan.gomp = {2, 9, 1e-9};
    if (name == "three-tone")
    {
        plan.scenario = three_tone_config(full);
        plan.truth = {three_tone_waveform(), three_tone_paths()};
        plan.snr_db = {5.0, -5.0, -15.0};
        plan.replicates = 50;
    }
    else if (name == "barker")
    {
        plan.scenario = barker_config(full);
        plan.truth = {barker_waveform(), barker_paths()};
        plan.snr_db = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
        plan.replicates = 20;
    }
    else
        throw ConfigError("unknown built-in plan '" + std::string(name) + "'");
    return plan;
}

std::vector<std::string> builtin_plan_names()
{
    return {"three-tone", "barker"};
}

namespace
{

json cjson(cplx v)
{
    return json::array({v.real(), v.imag()});
}

cplx parse_complex(const json &node, const std::string &field)
{
    if (node.is_number())
        return {node.get<double>(), 0.0};
    if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number())
        return {node[0].get<double>(), node[1].get<double>()};
    throw ConfigError("'" + field + "' must be a number or [re, im]");
}

template <class T>
T get_or(const json &node, const char *key, T fallback)
{
    if (!node.contains(key))
        return fallback;
    try
    {
        return node.at(key).get<T>();
    }
    catch (const json::exception &)
    {
        throw ConfigError(std::string("'") + key + "' has the wrong type");
    }
}

} // namespace

json plan_to_json(const ExperimentPlan &plan)
{
    json atoms = json::array(), paths = json::array();
    for (const auto &[a, c] : plan.truth.waveform.terms)
        atoms.push_back({{"kind", std::string(to_string(a.kind))},
                         {"freq_hz", a.freq_hz},
                         {"length_s", a.length_s},
                         {"start_s", a.start_s},
                         {"phase", std::string(to_string(a.phase))},
                         {"coeff", cjson(c)}});
    for (const auto &p : plan.truth.paths.paths)
        paths.push_back({{"amplitude", cjson(p.amplitude)}, {"delay_s", p.delay_s}, {"angle_deg", p.angle_deg}});
    return {{"name", plan.name},
            {"scenario", config_to_json(plan.scenario)},
            {"truth", {{"atoms", atoms}, {"paths", paths}}},
            {"snr_db", plan.snr_db},
            {"replicates", plan.replicates},
            {"seed_base", plan.seed_base},
            {"gomp",
             {{"u_max", plan.gomp.u_max}, {"max_iters", plan.gomp.max_iters}, {"ls_tolerance", plan.gomp.ls_tolerance}}}};
}

namespace
{

ExperimentPlan parse_plan(const json &doc)
{
    if (!doc.is_object())
        throw ConfigError("plan must be a JSON object");
    ExperimentPlan plan;
    if (doc.contains("builtin"))
    {
        plan = builtin_plan(doc.at("builtin").get<std::string>(), get_or(doc, "full", false));
    }
    else
    {
        if (!doc.contains("scenario") || !doc.contains("truth"))
            throw ConfigError("plan needs 'scenario' and 'truth' (or 'builtin')");
        plan.scenario = config_from_json(doc.at("scenario"));
        const auto &truth = doc.at("truth");
        for (const auto &a : truth.value("atoms", json::array()))
        {
            AtomSpec s{parse_atom_kind(a.at("kind").get<std::string>()), a.at("freq_hz").get<double>(),
                       a.at("length_s").get<double>(), a.at("start_s").get<double>(), plan.scenario.dictionary.phase};
            if (a.contains("phase"))
                s.phase = parse_phase_reference(a.at("phase").get<std::string>());
            plan.truth.waveform.terms.push_back({s, a.contains("coeff") ? parse_complex(a.at("coeff"), "coeff") : 1.0});
        }
        for (const auto &p : truth.value("paths", json::array()))
            plan.truth.paths.paths.push_back(
                {p.contains("amplitude") ? parse_complex(p.at("amplitude"), "amplitude") : cplx(1.0, 0.0),
                 p.at("delay_s").get<double>(), p.at("angle_deg").get<double>()});
        if (plan.truth.waveform.terms.empty() || plan.truth.paths.paths.empty())
            throw ConfigError("truth needs at least one atom and one path");
    }
    plan.name = get_or<std::string>(doc, "name", plan.name);
    if (doc.contains("snr_db"))
        plan.snr_db = parse_sequence(doc.at("snr_db"), "snr_db");
    plan.replicates = get_or<std::size_t>(doc, "replicates", plan.replicates);
    plan.seed_base = get_or<std::uint64_t>(doc, "seed_base", plan.seed_base);
    if (doc.contains("gomp"))
    {
        const auto &g = doc.at("gomp");
        plan.gomp.u_max = get_or<std::size_t>(g, "u_max", plan.gomp.u_max);
        plan.gomp.max_iters = get_or<std::size_t>(g, "max_iters", plan.gomp.max_iters);
        plan.gomp.ls_tolerance = get_or<double>(g, "ls_tolerance", plan.gomp.ls_tolerance);
    }
    if (plan.replicates < 1)
        throw ConfigError("replicates must be at least 1");
    if (plan.snr_db.empty())
        throw ConfigError("snr_db is empty");
    if (plan.gomp.u_max < 1 || plan.gomp.max_iters < 1)
        throw ConfigError("gomp.u_max and gomp.max_iters must be at least 1");
    return plan;
}

} // namespace

ExperimentPlan plan_from_json(const json &doc)
{
    try
    {
        return parse_plan(doc);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("malformed plan: ") + e.what());
    }
}

ExperimentPlan load_plan(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open plan file " + path.string());
    json doc;
    try
    {
        in >> doc;
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
    return plan_from_json(doc);
}

RecoveryResult recover(const Eigen::VectorXcd &y, const PredictorEngine &engine, const GompConfig &config)
{
    RecoveryResult r;
    r.state = run(y, engine, config);
    if (r.state.degenerate)
        throw std::runtime_error("observation is identically zero");
    r.curve = loss_curve(r.state);
    // a run that fit Y to tolerance ends on its model; the kink is only looked for otherwise
    const double tol = config.ls_tolerance * y.norm();
    r.converged = r.state.trajectory.back().loss <= tol * tol;
    if (r.converged)
        r.kink.k = r.curve.points.back().k;
    else
        r.kink = find_kink(r.curve);
    r.selection = select_solution(r.state, r.kink.k);
    const auto init = init_beta(r.selection.coeffs, r.selection.active_beta, r.selection.active_alpha.size());
    r.kept_j = init.kept_j;
    const ReducedProblem problem(engine, init.kept_j, r.selection.active_alpha, y);
    r.estimate = refine(problem, init.beta);
    r.interp = interpret(problem, r.estimate, engine.scenario());

    // beta multiplies unit-norm columns; undo the normalization against the first kept cell
    const auto &sampling = engine.scenario().config().sampling;
    const Cell ref = r.selection.active_alpha.front();
    r.waveform = Eigen::VectorXcd::Zero(sampling.num_samples);
    for (std::size_t b = 0; b < r.kept_j.size(); ++b)
    {
        const double eta = engine.column_norm({r.kept_j[b], ref.p, ref.q});
        if (eta <= 0.0)
            continue;
        const auto v = sample_atom(atom_spec(engine.scenario(), r.kept_j[b]), sampling, 0.0);
        const cplx scale = r.estimate.beta[static_cast<Eigen::Index>(b)] / eta;
        for (std::size_t n = 0; n < v.size(); ++n)
            r.waveform[static_cast<Eigen::Index>(n)] += scale * v[n];
    }
    return r;
}

json to_json(const RecoveryResult &r)
{
    json curve = json::array();
    for (const auto &p : r.curve.points)
        curve.push_back({{"k", p.k}, {"loss", p.loss}});
    json wave = json::array();
    for (Eigen::Index n = 0; n < r.waveform.size(); ++n)
        wave.push_back(cjson(r.waveform[n]));
    return {{"trajectory", trajectory_to_json(r.state)},
            {"loss_curve", curve},
            {"converged", r.converged},
            {"kink",
             {{"k", r.kink.k},
              {"low_confidence", r.kink.low_confidence},
              {"degenerate", r.kink.degenerate},
              {"confidence", std::isfinite(r.kink.confidence) ? json(r.kink.confidence) : json(nullptr)}}},
            {"selected", {{"record", r.selection.record}, {"exact", r.selection.exact}, {"loss", r.selection.loss}}},
            {"refined", to_json(r.estimate, r.interp)},
            {"waveform", wave}};
}

std::optional<double> compute_rmse(const std::vector<double> &estimates, double truth)
{
    if (estimates.empty())
        return std::nullopt;
    double s = 0.0;
    for (double e : estimates)
        s += (e - truth) * (e - truth);
    return std::sqrt(s / static_cast<double>(estimates.size()));
}

namespace
{

Moments moments(const std::vector<double> &v)
{
    Moments m;
    if (v.empty())
        return m;
    double s = 0.0;
    for (double x : v)
        s += x;
    const double mean = s / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v)
        ss += (x - mean) * (x - mean);
    m.mean = mean;
    m.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return m;
}

ReplicateOutcome run_replicate(const ExperimentPlan &plan, const PredictorEngine &engine, const Observation &clean,
                               double power, double snr_db, std::size_t rep)
{
    ReplicateOutcome o;
    o.snr_db = snr_db;
    o.replicate = rep;
    o.seed = plan.seed_base + rep;
    try
    {
        o.sigma2 = sigma2_for_snr(snr_db, power);
        const auto obs = add_noise(clean, o.sigma2, o.seed);
        o.baseline = run_baseline(obs, std::sqrt(o.sigma2), plan.scenario);
        const auto r = recover(obs.y, engine, plan.gomp);
        o.paths = r.interp.paths;
        o.atoms = r.interp.atoms;
        o.n_alpha = r.selection.active_alpha.size();
        o.n_beta = r.selection.active_beta.size();
    }
    catch (const std::exception &e)
    {
        o.error = e.what();
    }
    return o;
}

} // namespace

std::vector<McRecord> aggregate(const ExperimentPlan &plan, const std::vector<ReplicateOutcome> &outcomes)
{
    const auto &truth = plan.truth.paths.paths.front();
    const auto &grid = plan.scenario.grids.angles_deg;
    double worst_doa = 0.0;
    for (double a : grid)
        worst_doa = std::max(worst_doa, std::abs(a - truth.angle_deg));
    const double t_end = static_cast<double>(plan.scenario.sampling.num_samples - 1) / plan.scenario.sampling.sample_rate_hz;
    const double worst_toa = std::max(truth.delay_s, std::abs(t_end - truth.delay_s));

    std::vector<McRecord> out;
    for (double snr : plan.snr_db)
    {
        std::vector<const ReplicateOutcome *> rows;
        for (const auto &o : outcomes)
            if (o.snr_db == snr)
                rows.push_back(&o);

        McRecord omp, base;
        omp.snr_db = base.snr_db = snr;
        omp.method = "omp";
        base.method = "baseline";
        omp.replicates = base.replicates = rows.size();
        std::vector<double> d1, t1, d2, t2, tot, na, nb, d1p, t1p, bd, bt, bdp, btp;
        std::vector<std::vector<double>> fq, ln, st;
        for (const auto *o : rows)
        {
            if (o->error.empty() && !o->paths.empty())
            {
                ++omp.valid;
                d1.push_back(o->paths[0].angle_deg);
                t1.push_back(o->paths[0].toa_s);
                d1p.push_back(o->paths[0].angle_deg);
                t1p.push_back(o->paths[0].toa_s);
                if (o->paths.size() > 1)
                {
                    d2.push_back(o->paths[1].angle_deg);
                    t2.push_back(o->paths[1].toa_s);
                }
                tot.push_back(static_cast<double>(o->n_alpha + o->n_beta));
                na.push_back(static_cast<double>(o->n_alpha));
                nb.push_back(static_cast<double>(o->n_beta));
                for (std::size_t i = 0; i < o->atoms.size(); ++i)
                {
                    if (fq.size() <= i)
                        fq.resize(i + 1), ln.resize(i + 1), st.resize(i + 1);
                    fq[i].push_back(o->atoms[i].freq_hz);
                    ln[i].push_back(o->atoms[i].length_s);
                    st[i].push_back(o->atoms[i].start_s);
                }
            }
            else
            {
                d1p.push_back(truth.angle_deg + worst_doa);
                t1p.push_back(truth.delay_s + worst_toa);
            }
            if (o->baseline.detected)
            {
                ++base.valid;
                bd.push_back(*o->baseline.doa_deg);
                bt.push_back(*o->baseline.toa_s);
                bdp.push_back(*o->baseline.doa_deg);
                btp.push_back(*o->baseline.toa_s);
            }
            else
            {
                bdp.push_back(truth.angle_deg + worst_doa);
                btp.push_back(truth.delay_s + worst_toa);
            }
        }
        const double n = std::max<double>(1.0, static_cast<double>(rows.size()));
        omp.detection_rate = static_cast<double>(omp.valid) / n;
        base.detection_rate = static_cast<double>(base.valid) / n;
        omp.doa_rmse_deg = compute_rmse(d1, truth.angle_deg);
        omp.toa_rmse_s = compute_rmse(t1, truth.delay_s);
        omp.doa_rmse_penalized_deg = compute_rmse(d1p, truth.angle_deg);
        omp.toa_rmse_penalized_s = compute_rmse(t1p, truth.delay_s);
        omp.doa1 = moments(d1);
        omp.toa1 = moments(t1);
        omp.doa2 = moments(d2);
        omp.toa2 = moments(t2);
        omp.total = moments(tot);
        omp.n_alpha = moments(na);
        omp.n_beta = moments(nb);
        for (std::size_t i = 0; i < fq.size(); ++i)
        {
            omp.freq.push_back(moments(fq[i]));
            omp.length.push_back(moments(ln[i]));
            omp.start.push_back(moments(st[i]));
        }
        base.doa_rmse_deg = compute_rmse(bd, truth.angle_deg);
        base.toa_rmse_s = compute_rmse(bt, truth.delay_s);
        base.doa_rmse_penalized_deg = compute_rmse(bdp, truth.angle_deg);
        base.toa_rmse_penalized_s = compute_rmse(btp, truth.delay_s);
        base.doa1 = moments(bd);
        base.toa1 = moments(bt);
        out.push_back(std::move(omp));
        out.push_back(std::move(base));
    }
    return out;
}

McSummary run_mc(const ExperimentPlan &plan, unsigned threads)
{
    const PredictorEngine engine{Scenario(plan.scenario), 1};
    const auto clean = clean_signal(plan.truth.waveform, plan.truth.paths, plan.scenario);
    const double power = first_path_power(plan.truth.waveform, plan.truth.paths, plan.scenario);
    const std::size_t tasks = plan.snr_db.size() * plan.replicates;
    McSummary s;
    s.outcomes.resize(tasks);
    parallel_for(tasks, threads, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t i = begin; i < end; ++i)
            s.outcomes[i] = run_replicate(plan, engine, clean, power, plan.snr_db[i / plan.replicates],
                                          i % plan.replicates);
    });
    s.records = aggregate(plan, s.outcomes);
    return s;
}

namespace
{

std::string field(const std::optional<double> &v)
{
    if (!v)
        return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", *v);
    return buf;
}

json jopt(const std::optional<double> &v)
{
    return v ? json(*v) : json(nullptr);
}

json jmom(const Moments &m)
{
    return {{"mean", jopt(m.mean)}, {"std", jopt(m.std)}};
}

} // namespace

std::string summary_csv(const McSummary &summary)
{
    std::ostringstream os;
    os << "snr_db,method,replicates,valid,detection_rate,doa_rmse_deg,toa_rmse_s,doa_rmse_penalized_deg,"
          "toa_rmse_penalized_s,doa1_mean_deg,doa1_std_deg,toa1_mean_s,toa1_std_s,doa2_mean_deg,doa2_std_deg,"
          "toa2_mean_s,toa2_std_s,total_mean,total_std,n_alpha_mean,n_alpha_std,n_beta_mean,n_beta_std\n";
    for (const auto &r : summary.records)
    {
        os << field(r.snr_db) << ',' << r.method << ',' << r.replicates << ',' << r.valid << ','
           << field(r.detection_rate) << ',' << field(r.doa_rmse_deg) << ',' << field(r.toa_rmse_s) << ','
           << field(r.doa_rmse_penalized_deg) << ',' << field(r.toa_rmse_penalized_s);
        for (const auto *m : {&r.doa1, &r.toa1, &r.doa2, &r.toa2, &r.total, &r.n_alpha, &r.n_beta})
            os << ',' << field(m->mean) << ',' << field(m->std);
        os << '\n';
    }
    return os.str();
}

json summary_to_json(const McSummary &summary)
{
    json records = json::array();
    for (const auto &r : summary.records)
    {
        json atoms = json::array();
        for (std::size_t i = 0; i < r.freq.size(); ++i)
            atoms.push_back({{"freq_hz", jmom(r.freq[i])}, {"length_s", jmom(r.length[i])}, {"start_s", jmom(r.start[i])}});
        records.push_back({{"snr_db", r.snr_db},
                           {"method", r.method},
                           {"replicates", r.replicates},
                           {"valid", r.valid},
                           {"detection_rate", r.detection_rate},
                           {"doa_rmse_deg", jopt(r.doa_rmse_deg)},
                           {"toa_rmse_s", jopt(r.toa_rmse_s)},
                           {"doa_rmse_penalized_deg", jopt(r.doa_rmse_penalized_deg)},
                           {"toa_rmse_penalized_s", jopt(r.toa_rmse_penalized_s)},
                           {"doa1_deg", jmom(r.doa1)},
                           {"toa1_s", jmom(r.toa1)},
                           {"doa2_deg", jmom(r.doa2)},
                           {"toa2_s", jmom(r.toa2)},
                           {"total", jmom(r.total)},
                           {"n_alpha", jmom(r.n_alpha)},
                           {"n_beta", jmom(r.n_beta)},
                           {"atoms", atoms}});
    }
    json errors = json::array();
    for (const auto &o : summary.outcomes)
        if (!o.error.empty())
            errors.push_back({{"snr_db", o.snr_db}, {"replicate", o.replicate}, {"error", o.error}});
    return {{"records", records}, {"errors", errors}};
}

void cmd_simulate(const ExperimentPlan &plan, const std::filesystem::path &out_dir)
{
    std::filesystem::create_directories(out_dir);
    const Scenario scenario(plan.scenario);
    const auto clean = clean_signal(plan.truth.waveform, plan.truth.paths, plan.scenario);
    const double power = first_path_power(plan.truth.waveform, plan.truth.paths, plan.scenario);
    json entries = json::array();
    for (double snr : plan.snr_db)
        for (std::size_t rep = 0; rep < plan.replicates; ++rep)
        {
            const std::uint64_t seed = plan.seed_base + rep;
            const double s2 = sigma2_for_snr(snr, power);
            char name[64];
            std::snprintf(name, sizeof name, "obs_snr%+g_rep%03zu.csv", snr, rep);
            write_observation_csv(add_noise(clean, s2, seed), out_dir / name);
            entries.push_back({{"file", name}, {"snr_db", snr}, {"replicate", rep}, {"seed", seed}, {"sigma2", s2}});
        }
    std::ofstream out(out_dir / "manifest.json");
    out << json{{"plan", plan_to_json(plan)}, {"first_path_power", power}, {"observations", entries}}.dump(2) << '\n';
    if (!out)
        throw std::runtime_error("cannot write manifest in " + out_dir.string());
}

json cmd_recover(const std::filesystem::path &obs_path, const ScenarioConfig &config, const GompConfig &gomp,
                 unsigned threads)
{
    const auto obs = read_observation_csv(obs_path);
    if (obs.num_sensors != static_cast<std::size_t>(config.array.num_sensors) ||
        obs.num_samples != static_cast<std::size_t>(config.sampling.num_samples))
        throw ConfigError("observation is " + std::to_string(obs.num_sensors) + " x " + std::to_string(obs.num_samples) +
                          " but the configuration expects " + std::to_string(config.array.num_sensors) + " x " +
                          std::to_string(config.sampling.num_samples));
    const PredictorEngine engine{Scenario(config), threads};
    return to_json(recover(obs.y, engine, gomp));
}

McSummary cmd_mc(const ExperimentPlan &plan, const std::filesystem::path &out_dir, unsigned threads)
{
    auto summary = run_mc(plan, threads);
    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir / "summary.csv");
    csv << summary_csv(summary);
    std::ofstream js(out_dir / "summary.json");
    js << summary_to_json(summary).dump(2) << '\n';
    if (!csv || !js)
        throw std::runtime_error("cannot write summary in " + out_dir.string());
    return summary;
}

} // namespace mpsr
