#include "nemo/assembly.hpp"
#include "nemo/config.hpp"
#include "nemo/criteria.hpp"
#include "nemo/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <omp.h>
#include <sys/resource.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

// Configuration errors are reported as usage errors.
struct UsageError : nemo::Error {
    using nemo::Error::Error;
};

struct CommonOptions {
    std::optional<std::string> config;
    std::optional<std::string> preset;
    nemo::ConfigOverrides overrides;
    int threads = 1;
    std::string output = "out";
    bool wallclock = false;
};

void add_config_options(CLI::App* app, CommonOptions& o) {
    app->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--preset", o.preset, "parameter preset (fig2a, desk)");
    app->add_option("--seed", o.overrides.seed, "master seed (overrides NEMO_SEED and the file)");
    app->add_option("--beta", o.overrides.beta, "plasticity rate for every area");
    app->add_option("--l", o.overrides.l, "nouns (and verbs) in the lexicon");
    app->add_option("--C", o.overrides.contexts, "extra context areas");
    app->add_option("--tau", o.overrides.tau, "steps per word");
    app->add_option("--order", o.overrides.order, "word order (SV, VS)");
    app->add_option("--backend", o.overrides.backend, "connectome backend (explicit, lazy)");
    app->add_option("--max-sentences", o.overrides.max_sentences, "sentence budget per trial");
    app->add_option("--tutoring-interval", o.overrides.tutoring_interval,
                    "tutor one word every N sentences (0: never)");
    app->add_option("--repeats", o.overrides.repeats, "trials per sweep point");
    app->add_option("--eval-every", o.overrides.eval_every, "sentences between evaluations");
}

void add_run_options(CLI::App* app, CommonOptions& o) {
    add_config_options(app, o);
    app->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    app->add_option("--output", o.output, "output directory");
    app->add_flag("--wallclock", o.wallclock, "fill the wallclock_ms column");
}

nemo::RunConfig load(const CommonOptions& o) {
    std::optional<std::string> env;
    if (const char* s = std::getenv("NEMO_SEED")) env = s;
    std::optional<fs::path> file;
    if (o.config) file = *o.config;
    try {
        return nemo::resolve_config(file, o.preset, o.overrides, env);
    } catch (const nemo::Error& e) {
        throw UsageError(e.what());
    }
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw nemo::Error("cannot write " + path.string());
    out << text;
    if (!out) throw nemo::Error("write failed: " + path.string());
}

void write_json(const fs::path& path, const ordered_json& j) { write_file(path, j.dump(2) + "\n"); }

fs::path prepare_output(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void finish_manifest(const fs::path& dir, nemo::RunManifest& m) {
    m.finished_at = nemo::utc_timestamp();
    write_json(dir / "manifest.json", m.to_json());
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError(what + ": not a number: '" + s + "'");
    return v;
}

std::vector<double> parse_values(const std::string& text, nemo::SweepVariable var) {
    std::vector<double> out;
    for (const auto& item : split_list(text)) {
        if (var == nemo::SweepVariable::TutoringInterval && item == "none") {
            out.push_back(0.0);
            continue;
        }
        double v = parse_number(item, "--values");
        if (v < 0.0) throw UsageError("--values: negative value " + item);
        if (var != nemo::SweepVariable::Beta && v != static_cast<double>(static_cast<long long>(v)))
            throw UsageError("--values: expected integers, got " + item);
        if (var == nemo::SweepVariable::Lexicon && v < 1.0)
            throw UsageError("--values: l must be at least 1");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("--values: empty list");
    return out;
}

void log_progress(std::size_t s, const nemo::SuccessReport& r, std::size_t budget) {
    if (r.pass || s % 50 == 0 || s == budget)
        std::cerr << "sentence " << s << ": " << r.passing_criteria() << "/" << 4 * r.words.size()
                  << " criteria" << (r.pass ? ", success" : "") << "\n";
}

int cmd_run(const CommonOptions& o) {
    auto cfg = load(o);
    auto dir = prepare_output(o.output);
    auto manifest = nemo::make_manifest("run", cfg, o.threads);
    write_json(dir / "manifest.json", manifest.to_json());

    auto exp = cfg.experiment;
    if (o.threads > 1) {
        omp_set_num_threads(o.threads);
        exp.organ.kernels = nemo::KernelMode::Parallel;
    }
    const std::size_t budget = exp.budget();
    auto trial = nemo::train_until_success(
        exp, nemo::trial_seed(exp.seed, 0),
        [budget](std::size_t s, const nemo::SuccessReport& r) { log_progress(s, r, budget); });

    write_file(dir / "trial.csv",
               nemo::trials_csv_header() + nemo::trial_csv_row(trial, o.wallclock));
    ordered_json criteria;
    criteria["success"] = trial.success();
    criteria["sentences_to_success"] =
        trial.sentences_to_success ? ordered_json(*trial.sentences_to_success) : ordered_json();
    criteria["sentences_fed"] = trial.sentences_fed;
    criteria["lexicon"] =
        nemo::Lexicon(exp.l, exp.organ.contexts, nemo::derive_seed(trial.seed, "lexicon")).to_json();
    criteria["report"] = trial.final_report.to_json();
    write_json(dir / "criteria.json", criteria);
    finish_manifest(dir, manifest);
    std::cerr << (trial.success() ? "success after " + std::to_string(trial.sentences_fed)
                                  : "no success within " + std::to_string(budget))
              << " sentences\n";
    return kExitOk;
}

int cmd_sweep(const CommonOptions& o, nemo::SweepVariable var, const std::string& values) {
    auto cfg = load(o);
    std::vector<double> points;
    if (!values.empty())
        points = parse_values(values, var);
    else if (cfg.sweep && cfg.sweep->variable == var)
        points = cfg.sweep->values;
    else if (var == nemo::SweepVariable::Lexicon)
        points = {2, 3, 4, 5};
    else if (var == nemo::SweepVariable::Beta)
        points = {0.03, 0.06, 0.1};
    else
        points = {0, 2, 5};
    cfg.sweep = nemo::SweepSpec{var, points};

    auto dir = prepare_output(o.output);
    const std::string name = "sweep-" + std::string(nemo::to_string(var));
    auto manifest = nemo::make_manifest(name, cfg, o.threads);
    write_json(dir / "manifest.json", manifest.to_json());

    std::cerr << name << ": " << points.size() << " points x " << cfg.experiment.repeats
              << " trials on " << o.threads << " thread(s)\n";
    nemo::SweepResult result;
    const auto& base = cfg.experiment;
    if (var == nemo::SweepVariable::Lexicon) {
        std::vector<std::size_t> ls(points.begin(), points.end());
        result = nemo::sweep_lexicon(base, ls, o.threads);
    } else if (var == nemo::SweepVariable::Beta) {
        result = nemo::sweep_beta(base, points, o.threads);
    } else {
        std::vector<std::size_t> iv(points.begin(), points.end());
        result = nemo::sweep_tutoring(base, iv, o.threads);
    }

    std::string csv = nemo::trials_csv_header();
    for (const auto& p : result.points)
        for (const auto& t : p.trials) csv += nemo::trial_csv_row(t, o.wallclock);
    write_file(dir / "trials.csv", csv);
    write_json(dir / "sweep.json", nemo::sweep_json(result, o.wallclock));
    finish_manifest(dir, manifest);
    for (const auto& p : result.points)
        std::cerr << result.variable << "=" << p.value << ": mean " << p.stats.mean << " std "
                  << p.stats.std << " failures " << p.stats.failures << "\n";
    return kExitOk;
}

struct DemoOptions {
    std::size_t n = 10000;
    std::size_t k = 100;
    double p = 0.01;
    double beta = 0.1;
    std::size_t steps = 50;
    double threshold = 0.95;
    std::uint64_t seed = 0;
    std::string backend = "explicit";
    std::string output = "out";
};

int cmd_project_demo(const DemoOptions& d) {
    nemo::AreaParams target{"TARGET", d.n, d.k, d.beta, d.p};
    nemo::Backend backend;
    try {
        target.validate();
        backend = nemo::backend_from_string(d.backend);
    } catch (const nemo::Error& e) {
        throw UsageError(e.what());
    }
    auto dir = prepare_output(d.output);
    nemo::RunManifest m;
    m.command = "project-demo";
    m.config = {{"n", d.n},       {"k", d.k},         {"p", d.p},
                {"beta", d.beta}, {"steps", d.steps}, {"threshold", d.threshold},
                {"backend", d.backend}};
    m.version = std::string(nemo::tool_version());
    m.build_id = std::string(nemo::build_id());
    m.seed = d.seed;
    m.started_at = nemo::utc_timestamp();
    write_json(dir / "manifest.json", m.to_json());

    auto setup = nemo::make_projection_setup(target, backend, d.seed);
    auto r = nemo::project(setup.net, setup.stimulus, setup.target, d.steps, d.threshold);
    std::cout << "step overlap\n";
    for (std::size_t i = 0; i < r.trace.overlaps.size(); ++i)
        std::cout << i + 2 << " " << r.trace.overlaps[i] << "\n";
    if (r.trace.converged_at)
        std::cout << "converged at step " << *r.trace.converged_at << "\n";
    else
        std::cout << "no convergence within " << d.steps << " steps\n";

    ordered_json out;
    out["overlaps"] = r.trace.overlaps;
    out["converged_at"] = r.trace.converged_at ? ordered_json(*r.trace.converged_at) : ordered_json();
    out["assembly"] = r.assembly.neurons;
    write_json(dir / "projection.json", out);
    finish_manifest(dir, m);
    return kExitOk;
}

std::size_t peak_rss_bytes() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return static_cast<std::size_t>(u.ru_maxrss) * 1024;
}

int cmd_bench(const CommonOptions& o, std::size_t steps) {
    auto cfg = load(o);
    auto dir = prepare_output(o.output);
    auto manifest = nemo::make_manifest("bench", cfg, o.threads);
    write_json(dir / "manifest.json", manifest.to_json());

    auto exp = cfg.experiment;
    if (o.threads > 1) {
        omp_set_num_threads(o.threads);
        exp.organ.kernels = nemo::KernelMode::Parallel;
    }
    auto organ_cfg = exp.organ;
    organ_cfg.seed = nemo::derive_seed(exp.seed, "organ");
    const auto build_start = std::chrono::steady_clock::now();
    nemo::Organ organ(organ_cfg, nemo::Lexicon(exp.l, organ_cfg.contexts,
                                               nemo::derive_seed(exp.seed, "lexicon")));
    const auto start = std::chrono::steady_clock::now();
    nemo::Rng rng = nemo::make_rng(exp.seed, "sentences");
    while (organ.steps_run() < steps)
        organ.feed(nemo::sample_sentence(organ.lexicon(), organ_cfg.order, rng));
    const auto end = std::chrono::steady_clock::now();
    const double build_s = std::chrono::duration<double>(start - build_start).count();
    const double run_s = std::chrono::duration<double>(end - start).count();

    double explicit_bytes = 0.0;
    const auto& net = organ.network();
    for (const auto& l : net.links()) {
        const auto& s = net.area(l.src);
        const auto& t = net.area(l.dst);
        double pairs = static_cast<double>(s.n) * static_cast<double>(t.n - (l.src == l.dst));
        explicit_bytes += pairs * t.p * static_cast<double>(sizeof(nemo::Neuron) + sizeof(double));
    }
    ordered_json report;
    report["backend"] = nemo::to_string(organ_cfg.backend);
    report["threads"] = o.threads;
    report["steps"] = organ.steps_run();
    report["build_seconds"] = build_s;
    report["run_seconds"] = run_s;
    report["steps_per_second"] = run_s > 0 ? static_cast<double>(organ.steps_run()) / run_s : 0.0;
    report["peak_rss_bytes"] = peak_rss_bytes();
    report["explicit_estimate_bytes"] = explicit_bytes;
    std::size_t synapses = 0;
    for (const auto& l : net.links()) synapses += l.connectome->synapse_count();
    report["synapses_materialized"] = synapses;
    write_json(dir / "bench.json", report);
    finish_manifest(dir, manifest);
    std::cout << report.dump(2) << "\n";
    return kExitOk;
}

int cmd_validate(const CommonOptions& o) {
    auto cfg = load(o);
    std::cout << nemo::to_json(cfg).dump(2) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Assembly-model simulator and noun/verb acquisition experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(nemo::tool_version()));

    CommonOptions run_opts, lex_opts, beta_opts, tut_opts, bench_opts, val_opts;
    std::string lex_values, beta_values, tut_values;
    std::size_t bench_steps = 100;
    DemoOptions demo;

    auto* run = app.add_subcommand("run", "train one organ until success or budget");
    add_run_options(run, run_opts);

    auto* lex = app.add_subcommand("sweep-lexicon", "sentences to success vs lexicon size");
    add_run_options(lex, lex_opts);
    lex->add_option("--values", lex_values, "comma-separated l values (default 2,3,4,5)");

    auto* beta = app.add_subcommand("sweep-beta", "sentences to success vs plasticity rate");
    add_run_options(beta, beta_opts);
    beta->add_option("--values", beta_values, "comma-separated beta values (default 0.03,0.06,0.1)");

    auto* tut = app.add_subcommand("sweep-tutoring", "sentences to success vs tutoring interval");
    add_run_options(tut, tut_opts);
    tut->add_option("--values", tut_values, "comma-separated intervals, none or 0 for no tutoring");

    auto* proj = app.add_subcommand("project-demo", "project a stimulus into a recurrent area");
    proj->add_option("--n", demo.n, "neurons per area");
    proj->add_option("--k", demo.k, "cap size");
    proj->add_option("--p", demo.p, "connection probability");
    proj->add_option("--beta", demo.beta, "plasticity rate");
    proj->add_option("--steps", demo.steps, "maximum steps");
    proj->add_option("--threshold", demo.threshold, "consecutive-cap overlap for convergence");
    proj->add_option("--seed", demo.seed, "seed");
    proj->add_option("--backend", demo.backend, "explicit or lazy");
    proj->add_option("--output", demo.output, "output directory");

    auto* bench = app.add_subcommand("bench", "training throughput and peak memory");
    add_config_options(bench, bench_opts);
    bench->add_option("--steps", bench_steps, "network steps to run");
    bench->add_option("--threads", bench_opts.threads, "kernel threads")->check(CLI::PositiveNumber);
    bench->add_option("--output", bench_opts.output, "output directory");

    auto* val = app.add_subcommand("validate-config", "parse a config and print it resolved");
    add_config_options(val, val_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run_opts);
        if (lex->parsed()) return cmd_sweep(lex_opts, nemo::SweepVariable::Lexicon, lex_values);
        if (beta->parsed()) return cmd_sweep(beta_opts, nemo::SweepVariable::Beta, beta_values);
        if (tut->parsed())
            return cmd_sweep(tut_opts, nemo::SweepVariable::TutoringInterval, tut_values);
        if (proj->parsed()) return cmd_project_demo(demo);
        if (bench->parsed()) return cmd_bench(bench_opts, bench_steps);
        if (val->parsed()) return cmd_validate(val_opts);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}
