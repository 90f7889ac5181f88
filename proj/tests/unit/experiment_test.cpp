#include "nemo/experiment.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using testing::small_experiment;

namespace {

nemo::TrialResult result(std::optional<std::size_t> s) {
    nemo::TrialResult t;
    t.sentences_to_success = s;
    return t;
}

std::string csv(const nemo::SweepResult& r) {
    std::ostringstream out;
    out << nemo::trials_csv_header();
    for (const auto& p : r.points)
        for (const auto& t : p.trials) out << nemo::trial_csv_row(t, false);
    return out.str();
}

} // namespace

TEST_SUITE("experiment") {

TEST_CASE("aggregate uses the sample standard deviation") {
    auto a = nemo::aggregate(std::vector<double>{10, 12, 14});
    CHECK(a.mean == 12.0);
    CHECK(a.std == 2.0);
    CHECK(a.successes == 3);
    CHECK(!a.degenerate);

    auto b = nemo::aggregate({result(7), result(std::nullopt), result(9)});
    CHECK(b.mean == 8.0);
    CHECK(b.failures == 1);

    auto single = nemo::aggregate({result(5)});
    CHECK(single.mean == 5.0);
    CHECK(single.std == 0.0);
    CHECK(single.degenerate);

    auto none = nemo::aggregate({result(std::nullopt)});
    CHECK(std::isnan(none.mean));
    CHECK(none.failures == 1);
    CHECK_THROWS_AS(nemo::aggregate(std::vector<double>{}), nemo::Error);
}

TEST_CASE("a trial reports a failure when the budget runs out") {
    auto e = small_experiment(2, 3);
    auto r = nemo::train_until_success(e, 1);
    CHECK(!r.success());
    CHECK(r.sentences_fed == 3);
    CHECK(r.final_report.words.size() == 4);
}

TEST_CASE("zero budget feeds nothing") {
    auto e = small_experiment(2, 0);
    auto r = nemo::train_until_success(e, 1);
    CHECK(r.sentences_fed == 0);
    CHECK(!r.success());
}

TEST_CASE("default budget is 200 l") {
    nemo::ExperimentConfig e;
    e.l = 3;
    CHECK(e.budget() == 600);
}

TEST_CASE("trials replay from their seed") {
    auto e = small_experiment(2, 8);
    auto a = nemo::train_until_success(e, 3);
    auto b = nemo::train_until_success(e, 3);
    CHECK(a.final_report.to_json() == b.final_report.to_json());
    CHECK(nemo::trial_csv_row(a, false) == nemo::trial_csv_row(b, false));
    CHECK(nemo::trial_seed(1, 0) != nemo::trial_seed(1, 1));
    CHECK(nemo::trial_seed(1, 0) != nemo::trial_seed(2, 0));
}

TEST_CASE("evaluation frequency does not change training") {
    auto every = small_experiment(2, 10);
    auto sparse = every;
    sparse.eval_every = 4;
    auto a = nemo::train_until_success(every, 2);
    auto b = nemo::train_until_success(sparse, 2);
    REQUIRE(!a.success());
    REQUIRE(!b.success());
    CHECK(a.final_report.to_json() == b.final_report.to_json());
}

TEST_CASE("tutoring interval 0 is plain training") {
    auto plain = small_experiment(2, 6);
    auto a = nemo::train_until_success(plain, 4);
    auto tutored = plain;
    tutored.tutoring_interval = 2;
    auto b = nemo::train_until_success(tutored, 4);
    CHECK(a.tutoring_rounds == 0);
    CHECK(b.tutoring_rounds == 3);
    auto none = nemo::sweep_tutoring(plain, {0}, 1);
    CHECK(none.points[0].trials[0].final_report.to_json() ==
          nemo::train_until_success(plain, nemo::trial_seed(plain.seed, 0)).final_report.to_json());
}

TEST_CASE("sweep output schema") {
    auto e = small_experiment(2, 2);
    e.repeats = 2;
    auto r = nemo::sweep_lexicon(e, {1, 2}, 1);
    CHECK(r.variable == "l");
    REQUIRE(r.points.size() == 2);
    CHECK(r.points[1].trials[0].l == 2);
    CHECK(r.points[0].trials[1].seed == r.points[1].trials[1].seed);

    CHECK(nemo::trials_csv_header() ==
          "trial,seed,order,l,C,beta,tau,backend,tutoring_interval,sentences_to_success,"
          "tutoring_rounds,wallclock_ms,success\n");
    const auto row = nemo::trial_csv_row(r.points[0].trials[0], false);
    CHECK(std::count(row.begin(), row.end(), ',') == 12);
    CHECK(row.find(",SV,1,2,0.1,2,lazy,none,,0,,false\n") != std::string::npos);

    const auto j = nemo::sweep_json(r, false);
    CHECK(j["variable"] == "l");
    REQUIRE(j["points"].size() == 2);
    for (const char* key : {"value", "trials", "mean", "std", "failures"})
        CHECK(j["points"][0].contains(key));
    CHECK(j["points"][0]["failures"] == 2);
    CHECK(j["points"][0]["trials"].size() == 2);
}

TEST_CASE("sweep results do not depend on the thread count") {
    auto e = small_experiment(2, 3);
    e.repeats = 3;
    const auto one = csv(nemo::sweep_beta(e, {0.05, 0.1}, 1));
    const auto four = csv(nemo::sweep_beta(e, {0.05, 0.1}, 4));
    CHECK(one == four);
}

TEST_CASE("a trial does not depend on the other trials") {
    auto e = small_experiment(2, 4);
    e.repeats = 3;
    auto sweep = nemo::sweep_lexicon(e, {2}, 1);
    auto alone = nemo::train_until_success(e, nemo::trial_seed(e.seed, 2));
    alone.trial = 2;
    CHECK(nemo::trial_csv_row(sweep.points[0].trials[2], false) ==
          nemo::trial_csv_row(alone, false));
}

}
