#pragma once

#include "nemo/criteria.hpp"
#include "nemo/organ.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nemo {

struct ExperimentConfig {
    OrganConfig organ;
    std::size_t l = 0;
    std::optional<std::size_t> max_sentences; // default 200 * l
    std::size_t eval_every = 1;
    std::size_t tutoring_interval = 0; // 0: no tutoring
    std::size_t repeats = 1;
    std::uint64_t seed = 0;
    CriterionThresholds thresholds;

    std::size_t budget() const { return max_sentences.value_or(200 * l); }
    void validate() const;
};

struct TrialResult {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> sentences_to_success;
    std::size_t sentences_fed = 0;
    std::size_t tutoring_rounds = 0;
    double wallclock_ms = 0.0;
    SuccessReport final_report;

    // Point parameters, echoed into the trial CSV.
    WordOrder order = WordOrder::SV;
    std::size_t l = 0;
    std::size_t contexts = 0;
    double beta = 0.0;
    std::size_t tau = 0;
    Backend backend = Backend::Lazy;
    std::size_t tutoring_interval = 0;

    bool success() const { return sentences_to_success.has_value(); }
};

struct Aggregate {
    double mean = 0.0;
    double std = 0.0;
    std::size_t successes = 0;
    std::size_t failures = 0;
    bool degenerate = false; // fewer than two successes: std reported as 0
};

// Sample mean and (n-1) standard deviation of sentences_to_success over
// successful trials; failures are counted, not averaged.
Aggregate aggregate(const std::vector<TrialResult>& trials);
Aggregate aggregate(const std::vector<double>& values, std::size_t failures = 0);

struct SweepPoint {
    double value = 0.0;
    std::vector<TrialResult> trials;
    Aggregate stats;
};

struct SweepResult {
    std::string variable;
    std::vector<SweepPoint> points;
};

// Called after each evaluation with (sentences fed, report).
using ProgressFn = std::function<void(std::size_t, const SuccessReport&)>;

// Trains a fresh organ on random sentences until every word passes P and
// Q1-Q3 or the sentence budget runs out. The organ and lexicon come from
// `trial_seed`; the experiment seed is not used.
TrialResult train_until_success(const ExperimentConfig& config, std::uint64_t trial_seed,
                                const ProgressFn& progress = {});

// Seed of trial i. Depends only on (master seed, i), so sweep points share
// their trial seeds and trials never depend on one another.
std::uint64_t trial_seed(std::uint64_t master, std::size_t trial);

// Runs config.repeats trials per value; `apply` rewrites the base config for
// one value. Trials run on up to `threads` threads; results do not depend on
// the thread count.
SweepResult run_sweep(const ExperimentConfig& base, const std::string& variable,
                      const std::vector<double>& values,
                      const std::function<void(ExperimentConfig&, double)>& apply,
                      int threads = 1);

SweepResult sweep_lexicon(const ExperimentConfig& base, const std::vector<std::size_t>& ls,
                          int threads = 1);
SweepResult sweep_beta(const ExperimentConfig& base, const std::vector<double>& betas,
                       int threads = 1);
// Interval 0 means no tutoring.
SweepResult sweep_tutoring(const ExperimentConfig& base,
                           const std::vector<std::size_t>& intervals, int threads = 1);
SweepResult sweep_order(const ExperimentConfig& base, int threads = 1);

// Trial rows in the fixed CSV schema; wallclock left empty unless asked for.
std::string trials_csv_header();
std::string trial_csv_row(const TrialResult& t, bool with_wallclock);

nlohmann::ordered_json trial_json(const TrialResult& t, bool with_wallclock);
nlohmann::ordered_json sweep_json(const SweepResult& s, bool with_wallclock);

} // namespace nemo
