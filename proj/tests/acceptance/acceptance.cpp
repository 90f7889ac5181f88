// Acceptance criteria. Prints one PASS/FAIL line per criterion; exit status
// is 0 only when every selected criterion passes.

#include "nemo/assembly.hpp"
#include "nemo/config.hpp"
#include "nemo/experiment.hpp"
#include "../oracle.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string cli_path;
std::string work_dir;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

std::string describe(const nemo::SweepResult& r) {
    std::string s;
    for (const auto& p : r.points) {
        if (!s.empty()) s += "; ";
        s += r.variable + "=" + fmt(p.value, 2) + " mean " + fmt(p.stats.mean, 1) + " (" +
             std::to_string(p.stats.failures) + "/" + std::to_string(p.trials.size()) +
             " failed)";
    }
    return s;
}

std::vector<double> means(const nemo::SweepResult& r) {
    std::vector<double> m;
    for (const auto& p : r.points) m.push_back(p.stats.mean);
    return m;
}

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

nemo::ExperimentConfig desk() { return nemo::preset("desk").experiment; }

Outcome dynamics_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t networks = 25;
    std::size_t agree = 0;
    std::string first;
    for (std::uint64_t seed = 1; seed <= networks; ++seed) {
        auto mismatch = oracle::compare_with_oracle(1000 + seed, 15);
        if (!mismatch)
            ++agree;
        else if (first.empty())
            first = *mismatch;
    }
    const double secs = seconds_since(t0);
    return {agree == networks && secs < 60.0,
            std::to_string(agree) + "/" + std::to_string(networks) +
                " networks match the brute-force equations over 15 steps in " + fmt(secs, 1) +
                " s" + (first.empty() ? "" : "; " + first)};
}

Outcome plasticity_exact() {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        worst = std::max(worst, oracle::plasticity_error_ulps(2000 + seed, 40));
    return {worst <= 1.0, "worst |w - (1+beta)^m| = " + fmt(worst, 3) + " ulp per multiplication"};
}

Outcome projection() {
    const nemo::AreaParams learning{"T", 10000, 100, 0.1, 0.01};
    nemo::AreaParams frozen = learning;
    frozen.beta = 0.0;
    std::size_t converged = 0, stayed_apart = 0;
    std::string steps;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto s = nemo::make_projection_setup(learning, nemo::Backend::Explicit, seed);
        auto r = nemo::project(s.net, s.stimulus, s.target, 30, 0.95);
        if (r.trace.converged_at) {
            ++converged;
            steps += (steps.empty() ? "" : ",") + std::to_string(*r.trace.converged_at);
        } else {
            steps += (steps.empty() ? "" : ",") + std::string("-");
        }
        auto f = nemo::make_projection_setup(frozen, nemo::Backend::Explicit, seed);
        auto q = nemo::project(f.net, f.stimulus, f.target, 50, 0.90);
        if (!q.trace.converged_at) ++stayed_apart;
    }
    return {converged >= 9 && stayed_apart >= 9,
            "beta=0.1 converged in " + std::to_string(converged) + "/10 (steps " + steps +
                "); beta=0 stayed below 0.90 in " + std::to_string(stayed_apart) + "/10"};
}

Outcome lazy_ks() {
    const nemo::AreaParams target{"T", 2000, 50, 0.1, 0.05};
    std::vector<double> sums[2];
    const nemo::Backend backends[] = {nemo::Backend::Explicit, nemo::Backend::Lazy};
    for (int b = 0; b < 2; ++b)
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            auto s = nemo::make_projection_setup(target, backends[b], seed);
            s.net.step({{s.stimulus.area, s.stimulus.neurons}}, true);
            sums[b].push_back(s.net.last_cap_input()[s.target]);
        }
    const auto ks = oracle::ks_two_sample(sums[0], sums[1]);
    return {ks.p_value >= 0.01,
            "KS D = " + fmt(ks.statistic, 3) + ", p = " + fmt(ks.p_value, 3) + " over 100 seeds"};
}

Outcome desk_acquisition() {
    bool pass = true;
    std::string detail;
    for (auto order : {nemo::WordOrder::SV, nemo::WordOrder::VS}) {
        auto cfg = desk();
        cfg.organ.order = order;
        const auto t0 = std::chrono::steady_clock::now();
        std::size_t ok = 0;
        std::string counts;
        std::size_t best_criteria = 0;
        for (std::size_t i = 0; i < 5; ++i) {
            auto r = nemo::train_until_success(cfg, nemo::trial_seed(cfg.seed, i));
            if (r.success()) ++ok;
            best_criteria = std::max(best_criteria, r.final_report.passing_criteria());
            counts += (counts.empty() ? "" : ",") +
                      (r.success() ? std::to_string(*r.sentences_to_success) : std::string("-"));
        }
        const double mins = seconds_since(t0) / 60.0;
        pass = pass && ok >= 4 && mins < 15.0;
        detail += std::string(detail.empty() ? "" : "; ") + std::string(nemo::to_string(order)) +
                  " " + std::to_string(ok) + "/5 within 500 sentences (" + counts +
                  "), best final trial passed " + std::to_string(best_criteria) + "/24 checks, " +
                  fmt(mins, 2) + " min";
    }
    return {pass, detail};
}

Outcome lexicon_trend() {
    auto cfg = desk();
    cfg.repeats = 5;
    auto r = nemo::sweep_lexicon(cfg, {2, 3, 4, 5});
    const auto m = means(r);
    bool monotone = all_finite(m);
    for (std::size_t i = 1; monotone && i < m.size(); ++i) monotone = m[i] >= m[i - 1];
    const double rho = oracle::spearman({2, 3, 4, 5}, m);
    return {monotone && rho == 1.0, describe(r) + "; Spearman " + fmt(rho, 3)};
}

Outcome beta_trend() {
    auto cfg = desk();
    cfg.organ.contexts = 0;
    cfg.l = 4;
    cfg.max_sentences.reset();
    cfg.repeats = 5;
    auto r = nemo::sweep_beta(cfg, {0.03, 0.06, 0.1});
    const auto m = means(r);
    bool decreasing = all_finite(m);
    for (std::size_t i = 1; decreasing && i < m.size(); ++i) decreasing = m[i] < m[i - 1];

    auto control = cfg;
    control.organ.set_beta(0.0);
    control.repeats = 1;
    auto zero = nemo::train_until_success(control, nemo::trial_seed(control.seed, 0));
    const bool exhausted = !zero.success() && zero.sentences_fed == control.budget();
    return {decreasing && exhausted,
            describe(r) + "; beta=0 " + (exhausted ? "exhausted" : "did not exhaust") +
                " the " + std::to_string(control.budget()) + "-sentence budget"};
}

Outcome tutoring() {
    auto cfg = desk();
    cfg.repeats = 5;
    auto r = nemo::sweep_tutoring(cfg, {0, 2, 5});
    const auto m = means(r);
    const double red2 = (m[0] - m[1]) / m[0];
    const double red5 = (m[0] - m[2]) / m[0];
    const bool pass = all_finite(m) && red2 >= 0.20 && red2 >= red5;
    return {pass, describe(r) + "; reduction interval 2 " + fmt(red2, 3) + ", interval 5 " +
                      fmt(red5, 3)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + cli_path + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

Outcome determinism() {
    if (cli_path.empty()) return {false, "no --cli given"};
    const fs::path root = fs::path(work_dir) / "determinism";
    fs::remove_all(root);
    struct Job {
        std::string name, args, file;
    };
    const std::vector<Job> jobs{
        {"run", "run --preset desk --seed 3 --max-sentences 40", "trial.csv"},
        {"sweep", "sweep-lexicon --preset desk --seed 3 --values 2,3 --repeats 2 --max-sentences 15",
         "trials.csv"},
    };
    bool pass = true;
    std::string detail;
    for (const auto& job : jobs) {
        std::string bytes[3];
        int i = 0;
        for (const char* threads : {"1", "8", "1"}) {
            const fs::path out = root / (job.name + "_" + std::to_string(i));
            if (run_cli(job.args + " --threads " + threads + " --output " + out.string()) != 0) {
                pass = false;
                detail += job.name + " failed to run; ";
            }
            bytes[i++] = slurp(out / job.file);
        }
        const bool same = !bytes[0].empty() && bytes[0] == bytes[1] && bytes[0] == bytes[2];
        pass = pass && same;
        detail += job.name + " " + job.file + " " + (same ? "identical" : "DIFFERS") +
                  " across threads 1/8/1 (" + std::to_string(bytes[0].size()) + " bytes); ";
    }
    return {pass, detail.substr(0, detail.size() - 2)};
}

Outcome evaluation_purity() {
    auto cfg = desk();
    auto oc = cfg.organ;
    oc.seed = 17;
    nemo::Organ organ(oc, nemo::Lexicon(cfg.l, oc.contexts, 17));
    nemo::Rng rng(17);
    std::size_t clean = 0;
    for (std::size_t s = 0; s < 100; ++s) {
        organ.feed(nemo::sample_sentence(organ.lexicon(), oc.order, rng));
        const auto before = organ.network().weight_checksum();
        const auto steps = organ.steps_run();
        const auto a = nemo::check_success(organ).to_json();
        const auto b = nemo::check_success(organ).to_json();
        if (organ.network().weight_checksum() == before && organ.steps_run() == steps && a == b)
            ++clean;
    }
    return {clean == 100, std::to_string(clean) + "/100 states unchanged by evaluation"};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

const std::vector<Criterion> criteria{
    {"dynamics_oracle", dynamics_oracle},
    {"plasticity_exact", plasticity_exact},
    {"projection", projection},
    {"lazy_ks", lazy_ks},
    {"desk_acquisition", desk_acquisition},
    {"lexicon_trend", lexicon_trend},
    {"beta_trend", beta_trend},
    {"tutoring", tutoring},
    {"determinism", determinism},
    {"evaluation_purity", evaluation_purity},
};

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> selected;
    CLI::App app{"acceptance criteria"};
    app.add_option("criteria", selected, "criteria to run (default: all)");
    app.add_option("--cli", cli_path, "path to the nemo executable");
    work_dir = (fs::temp_directory_path() / "nemo_acceptance").string();
    app.add_option("--work-dir", work_dir, "scratch directory");
    bool list = false;
    app.add_flag("--list", list, "print criterion names");
    CLI11_PARSE(app, argc, argv);

    if (list) {
        for (const auto& c : criteria) std::printf("%s\n", c.name);
        return 0;
    }
    if (selected.empty())
        for (const auto& c : criteria) selected.push_back(c.name);

    bool all = true;
    for (const auto& name : selected) {
        const Criterion* c = nullptr;
        for (const auto& x : criteria)
            if (name == x.name) c = &x;
        if (!c) {
            std::fprintf(stderr, "unknown criterion '%s'\n", name.c_str());
            return 2;
        }
        Outcome o;
        try {
            o = c->run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c->name, o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
