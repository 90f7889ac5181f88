#include "nemo/experiment.hpp"

#include <chrono>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>

namespace nemo {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string interval_name(std::size_t interval) {
    return interval == 0 ? "none" : std::to_string(interval);
}

} // namespace

void ExperimentConfig::validate() const {
    organ.validate();
    if (l == 0) throw Error("l must be at least 1");
    if (eval_every == 0) throw Error("eval_every must be at least 1");
    if (repeats == 0) throw Error("repeats must be at least 1");
}

Aggregate aggregate(const std::vector<double>& values, std::size_t failures) {
    if (values.empty() && failures == 0) throw Error("aggregate of an empty trial set");
    Aggregate a;
    a.successes = values.size();
    a.failures = failures;
    if (values.empty()) {
        a.mean = std::nan("");
        a.degenerate = true;
        return a;
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    a.mean = sum / static_cast<double>(values.size());
    if (values.size() < 2) {
        a.degenerate = true;
        return a;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return a;
}

Aggregate aggregate(const std::vector<TrialResult>& trials) {
    std::vector<double> values;
    std::size_t failures = 0;
    for (const auto& t : trials) {
        if (t.sentences_to_success)
            values.push_back(static_cast<double>(*t.sentences_to_success));
        else
            ++failures;
    }
    return aggregate(values, failures);
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) {
    return derive_seed(master, "trial", trial);
}

TrialResult train_until_success(const ExperimentConfig& config, std::uint64_t seed,
                                const ProgressFn& progress) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();

    TrialResult r;
    r.seed = seed;
    r.order = config.organ.order;
    r.l = config.l;
    r.contexts = config.organ.contexts;
    r.beta = config.organ.lex_n.beta;
    r.tau = config.organ.tau;
    r.backend = config.organ.backend;
    r.tutoring_interval = config.tutoring_interval;

    OrganConfig oc = config.organ;
    oc.seed = derive_seed(seed, "organ");
    Organ organ(oc, Lexicon(config.l, oc.contexts, derive_seed(seed, "lexicon")));
    Rng sentences = make_rng(seed, "sentences");
    Rng tutoring = make_rng(seed, "tutoring");
    std::uniform_int_distribution<std::size_t> any_word(0, organ.lexicon().size() - 1);

    const std::size_t budget = config.budget();
    for (std::size_t s = 1; s <= budget; ++s) {
        organ.feed(sample_sentence(organ.lexicon(), oc.order, sentences));
        r.sentences_fed = s;
        if (config.tutoring_interval > 0 && s % config.tutoring_interval == 0) {
            organ.tutor(organ.lexicon().word(any_word(tutoring)));
            ++r.tutoring_rounds;
        }
        if (s % config.eval_every != 0 && s != budget) continue;
        r.final_report = check_success(organ, config.thresholds);
        if (progress) progress(s, r.final_report);
        if (r.final_report.pass) {
            r.sentences_to_success = s;
            break;
        }
    }
    r.wallclock_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    return r;
}

SweepResult run_sweep(const ExperimentConfig& base, const std::string& variable,
                      const std::vector<double>& values,
                      const std::function<void(ExperimentConfig&, double)>& apply, int threads) {
    SweepResult out;
    out.variable = variable;
    std::vector<ExperimentConfig> configs;
    for (double v : values) {
        ExperimentConfig c = base;
        apply(c, v);
        c.validate();
        configs.push_back(std::move(c));
        out.points.push_back({v, {}, {}});
    }
    const std::size_t repeats = base.repeats;
    for (auto& p : out.points) p.trials.resize(repeats);

    const auto jobs = static_cast<std::int64_t>(values.size() * repeats);
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : 1)
    for (std::int64_t j = 0; j < jobs; ++j) {
        const auto point = static_cast<std::size_t>(j) / repeats;
        const auto trial = static_cast<std::size_t>(j) % repeats;
        try {
            auto r = train_until_success(configs[point], trial_seed(base.seed, trial));
            r.trial = trial;
            out.points[point].trials[trial] = std::move(r);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& p : out.points) p.stats = aggregate(p.trials);
    return out;
}

SweepResult sweep_lexicon(const ExperimentConfig& base, const std::vector<std::size_t>& ls,
                          int threads) {
    std::vector<double> values(ls.begin(), ls.end());
    return run_sweep(
        base, "l", values,
        [](ExperimentConfig& c, double v) { c.l = static_cast<std::size_t>(v); }, threads);
}

SweepResult sweep_beta(const ExperimentConfig& base, const std::vector<double>& betas,
                       int threads) {
    return run_sweep(
        base, "beta", betas, [](ExperimentConfig& c, double v) { c.organ.set_beta(v); }, threads);
}

SweepResult sweep_tutoring(const ExperimentConfig& base,
                           const std::vector<std::size_t>& intervals, int threads) {
    std::vector<double> values(intervals.begin(), intervals.end());
    return run_sweep(
        base, "tutoring_interval", values,
        [](ExperimentConfig& c, double v) { c.tutoring_interval = static_cast<std::size_t>(v); },
        threads);
}

SweepResult sweep_order(const ExperimentConfig& base, int threads) {
    return run_sweep(
        base, "order", {0.0, 1.0},
        [](ExperimentConfig& c, double v) {
            c.organ.order = v == 0.0 ? WordOrder::SV : WordOrder::VS;
        },
        threads);
}

std::string trials_csv_header() {
    return "trial,seed,order,l,C,beta,tau,backend,tutoring_interval,sentences_to_success,"
           "tutoring_rounds,wallclock_ms,success\n";
}

std::string trial_csv_row(const TrialResult& t, bool with_wallclock) {
    std::string row;
    row += std::to_string(t.trial) + ',';
    row += std::to_string(t.seed) + ',';
    row += std::string(to_string(t.order)) + ',';
    row += std::to_string(t.l) + ',';
    row += std::to_string(t.contexts) + ',';
    row += fmt_double(t.beta) + ',';
    row += std::to_string(t.tau) + ',';
    row += std::string(to_string(t.backend)) + ',';
    row += interval_name(t.tutoring_interval) + ',';
    row += (t.sentences_to_success ? std::to_string(*t.sentences_to_success) : "") + ',';
    row += std::to_string(t.tutoring_rounds) + ',';
    row += (with_wallclock ? fmt_double(std::round(t.wallclock_ms * 1000.0) / 1000.0) : "") + ',';
    row += t.success() ? "true" : "false";
    row += '\n';
    return row;
}

nlohmann::ordered_json trial_json(const TrialResult& t, bool with_wallclock) {
    nlohmann::ordered_json j;
    j["trial"] = t.trial;
    j["seed"] = t.seed;
    j["success"] = t.success();
    j["sentences_to_success"] =
        t.sentences_to_success ? nlohmann::ordered_json(*t.sentences_to_success) : nullptr;
    j["sentences_fed"] = t.sentences_fed;
    j["tutoring_rounds"] = t.tutoring_rounds;
    if (with_wallclock) j["wallclock_ms"] = t.wallclock_ms;
    return j;
}

nlohmann::ordered_json sweep_json(const SweepResult& s, bool with_wallclock) {
    nlohmann::ordered_json j;
    j["variable"] = s.variable;
    j["points"] = nlohmann::ordered_json::array();
    for (const auto& p : s.points) {
        nlohmann::ordered_json pj;
        pj["value"] = p.value;
        pj["trials"] = nlohmann::ordered_json::array();
        for (const auto& t : p.trials) pj["trials"].push_back(trial_json(t, with_wallclock));
        pj["mean"] = std::isfinite(p.stats.mean) ? nlohmann::ordered_json(p.stats.mean) : nullptr;
        pj["std"] = p.stats.std;
        pj["failures"] = p.stats.failures;
        j["points"].push_back(std::move(pj));
    }
    return j;
}

} // namespace nemo
