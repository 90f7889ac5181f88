#pragma once

#include "nemo/organ.hpp"

#include <cstdint>
#include <vector>

#include <json.hpp>

namespace nemo {

struct CriterionThresholds {
    double activate = 0.75;   // P and positive clauses of Q2/Q3: overlap >= this
    double silent = 0.50;     // negative clauses of Q2/Q3: overlap < this
    double input_ratio = 2.0; // Q1: input(nu) >= ratio * input(mu)
};

struct PResult {
    bool pass = false;
    double overlap = 0.0;
};

struct Q1Result {
    bool pass = false;
    double ratio = 0.0; // +inf when mu receives no input
    double nu_input = 0.0;
    double mu_input = 0.0;
};

struct Q2Result {
    bool pass = false;
    double nu_phon = 0.0;      // overlap of nu's PHON cap with PHON[W]
    double nu_grounding = 0.0; // overlap of nu's grounding cap with VISUAL/MOTOR[W]
    double mu_phon_max = 0.0;  // max overlap of mu's PHON cap with any PHON[W']
    double mu_grounding_max = 0.0;
};

struct Q3Result {
    bool pass = false;
    double self_overlap = 0.0;  // nu -> next cap vs nu
    double cross_overlap = 0.0; // mu -> next cap vs mu
};

// nu / mu: caps formed in the word's own / other lexical area when PHON[W]
// fires once.
struct LexicalCaps {
    Cap nu;
    Cap mu;
};

struct CriterionReport {
    std::size_t word = 0;
    PartOfSpeech pos = PartOfSpeech::Noun;
    PResult p;
    Q1Result q1;
    Q2Result q2;
    Q3Result q3;

    bool pass() const { return p.pass && q1.pass && q2.pass && q3.pass; }
    nlohmann::ordered_json to_json() const;
};

struct SuccessReport {
    bool pass = false;
    std::vector<CriterionReport> words;

    std::size_t passing_criteria() const;
    nlohmann::ordered_json to_json() const;
};

// All checks are plasticity-frozen one-step readouts. `key` selects the
// candidate stream used for unmaterialized neurons (lazy backend), so equal
// keys on equal weights give equal results.
PResult check_P(const Organ& organ, const Word& w, std::uint64_t key,
                const CriterionThresholds& t = {});
LexicalCaps lexical_caps(const Organ& organ, const Word& w, std::uint64_t key);
Q1Result check_Q1(const LexicalCaps& caps, const CriterionThresholds& t = {});
Q2Result check_Q2(const Organ& organ, const Word& w, const LexicalCaps& caps, std::uint64_t key,
                  const CriterionThresholds& t = {});
Q3Result check_Q3(const Organ& organ, const Word& w, const LexicalCaps& caps, std::uint64_t key,
                  const CriterionThresholds& t = {});

CriterionReport check_word(const Organ& organ, const Word& w, std::uint64_t key,
                           const CriterionThresholds& t = {});
SuccessReport check_success(const Organ& organ, std::uint64_t key,
                            const CriterionThresholds& t = {});
// Key derived from the organ's seed and training progress.
SuccessReport check_success(const Organ& organ, const CriterionThresholds& t = {});

} // namespace nemo
