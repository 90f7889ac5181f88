#include "nemo/language.hpp"
#include "nemo/types.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

TEST_SUITE("language") {

TEST_CASE("lexicon layout") {
    nemo::Lexicon lex(3, 2, 1);
    CHECK(lex.size() == 6);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(lex.noun(i).is_noun());
        CHECK(lex.noun(i).id == i);
        CHECK(!lex.verb(i).is_noun());
        CHECK(lex.verb(i).id == 3 + i);
    }
    for (const auto& w : lex.words()) {
        REQUIRE(w.context.has_value());
        CHECK(*w.context < 2);
    }
    nemo::Lexicon bare(2, 0, 1);
    for (const auto& w : bare.words()) CHECK(!w.context.has_value());
}

TEST_CASE("sentences follow the word order") {
    nemo::Lexicon lex(2, 0, 1);
    nemo::Rng rng(4);
    for (auto order : {nemo::WordOrder::SV, nemo::WordOrder::VS}) {
        auto s = nemo::sample_sentence(lex, order, rng);
        CHECK(s.noun().is_noun());
        CHECK(!s.verb().is_noun());
        CHECK(s.first->is_noun() == (order == nemo::WordOrder::SV));
    }
    CHECK(nemo::word_order_from_string("VS") == nemo::WordOrder::VS);
    CHECK_THROWS_AS(nemo::word_order_from_string("SOV"), nemo::Error);
}

TEST_CASE("nouns and verbs are drawn uniformly") {
    const std::size_t l = 3, draws = 30000;
    nemo::Lexicon lex(l, 0, 1);
    nemo::Rng rng(8);
    std::vector<double> nouns(l, 0), verbs(l, 0);
    for (std::size_t i = 0; i < draws; ++i) {
        auto s = nemo::sample_sentence(lex, nemo::WordOrder::SV, rng);
        nouns[s.noun().id] += 1;
        verbs[s.verb().id - l] += 1;
    }
    auto chi2 = [&](const std::vector<double>& c) {
        const double e = static_cast<double>(draws) / static_cast<double>(l);
        double x = 0;
        for (double v : c) x += (v - e) * (v - e) / e;
        return x;
    };
    // 2 degrees of freedom, p = 0.001.
    CHECK(chi2(nouns) < 13.82);
    CHECK(chi2(verbs) < 13.82);
}

TEST_CASE("every noun-verb pair is equally frequent") {
    const std::size_t l = 5, draws = 10000;
    nemo::Lexicon lex(l, 0, 2);
    nemo::Rng rng(21);
    std::vector<double> pairs(l * l, 0.0);
    for (std::size_t i = 0; i < draws; ++i) {
        auto s = nemo::sample_sentence(lex, nemo::WordOrder::VS, rng);
        pairs[s.noun().id * l + (s.verb().id - l)] += 1.0;
    }
    for (double c : pairs) CHECK(std::abs(c / draws - 0.04) <= 0.01);
}

}
