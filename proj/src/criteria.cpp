#include "nemo/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nemo {

namespace {

std::uint64_t sub_key(std::uint64_t key, std::string_view what, const Word& w) {
    return derive_seed(key, what, w.id);
}

Cap fire_into(const Organ& organ, const FiringMap& fire, AreaId target, std::uint64_t key) {
    return organ.network().readout(fire, target, key);
}

double best_overlap(const Winners& cap, const std::vector<const Assembly*>& stored, std::size_t k) {
    double best = 0.0;
    for (const auto* a : stored) best = std::max(best, overlap(cap, a->neurons, k));
    return best;
}

nlohmann::ordered_json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json();
}

} // namespace

PResult check_P(const Organ& organ, const Word& w, std::uint64_t key,
                const CriterionThresholds& t) {
    const auto& g = organ.grounding(w);
    FiringMap semantic{{g.area, &g.neurons}};
    if (const auto& c = organ.context(w)) semantic.push_back({c->area, &c->neurons});
    Cap lex = fire_into(organ, semantic, organ.lex_area(w), sub_key(key, "P.lex", w));

    FiringMap from_lex{{organ.lex_area(w), &lex.winners}};
    const auto phon_area = organ.areas().phon;
    Cap phon = fire_into(organ, from_lex, phon_area, sub_key(key, "P.phon", w));

    PResult r;
    r.overlap = overlap(phon.winners, organ.phon(w).neurons, organ.network().area(phon_area).k);
    r.pass = r.overlap >= t.activate;
    return r;
}

LexicalCaps lexical_caps(const Organ& organ, const Word& w, std::uint64_t key) {
    const auto& ph = organ.phon(w);
    FiringMap fire{{ph.area, &ph.neurons}};
    return {fire_into(organ, fire, organ.lex_area(w), sub_key(key, "nu", w)),
            fire_into(organ, fire, organ.other_lex_area(w), sub_key(key, "mu", w))};
}

Q1Result check_Q1(const LexicalCaps& caps, const CriterionThresholds& t) {
    Q1Result r;
    r.nu_input = caps.nu.total_input();
    r.mu_input = caps.mu.total_input();
    if (r.mu_input > 0.0)
        r.ratio = r.nu_input / r.mu_input;
    else
        r.ratio = r.nu_input > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    r.pass = r.nu_input > 0.0 && r.nu_input >= t.input_ratio * r.mu_input;
    return r;
}

Q2Result check_Q2(const Organ& organ, const Word& w, const LexicalCaps& caps, std::uint64_t key,
                  const CriterionThresholds& t) {
    const auto& net = organ.network();
    const AreaId phon = organ.areas().phon;
    const AreaId ground = organ.grounding(w).area;
    const AreaId other_ground = organ.other_grounding_area(w);
    const std::size_t k_phon = net.area(phon).k;

    Q2Result r;
    FiringMap nu{{organ.lex_area(w), &caps.nu.winners}};
    r.nu_phon = overlap(fire_into(organ, nu, phon, sub_key(key, "Q2.nu.phon", w)).winners,
                        organ.phon(w).neurons, k_phon);
    r.nu_grounding =
        overlap(fire_into(organ, nu, ground, sub_key(key, "Q2.nu.ground", w)).winners,
                organ.grounding(w).neurons, net.area(ground).k);

    FiringMap mu{{organ.other_lex_area(w), &caps.mu.winners}};
    r.mu_phon_max = best_overlap(fire_into(organ, mu, phon, sub_key(key, "Q2.mu.phon", w)).winners,
                                 organ.assemblies_in(phon), k_phon);
    r.mu_grounding_max = best_overlap(
        fire_into(organ, mu, other_ground, sub_key(key, "Q2.mu.ground", w)).winners,
        organ.assemblies_in(other_ground), net.area(other_ground).k);

    r.pass = r.nu_phon >= t.activate && r.nu_grounding >= t.activate &&
             r.mu_phon_max < t.silent && r.mu_grounding_max < t.silent;
    return r;
}

Q3Result check_Q3(const Organ& organ, const Word& w, const LexicalCaps& caps, std::uint64_t key,
                  const CriterionThresholds& t) {
    const auto& net = organ.network();
    const AreaId own = organ.lex_area(w);
    const AreaId other = organ.other_lex_area(w);

    Q3Result r;
    FiringMap nu{{own, &caps.nu.winners}};
    r.self_overlap = overlap(fire_into(organ, nu, own, sub_key(key, "Q3.nu", w)).winners,
                             caps.nu.winners, net.area(own).k);
    FiringMap mu{{other, &caps.mu.winners}};
    r.cross_overlap = overlap(fire_into(organ, mu, other, sub_key(key, "Q3.mu", w)).winners,
                              caps.mu.winners, net.area(other).k);
    r.pass = r.self_overlap >= t.activate && r.cross_overlap < t.silent;
    return r;
}

CriterionReport check_word(const Organ& organ, const Word& w, std::uint64_t key,
                           const CriterionThresholds& t) {
    CriterionReport r;
    r.word = w.id;
    r.pos = w.pos;
    r.p = check_P(organ, w, key, t);
    auto caps = lexical_caps(organ, w, key);
    r.q1 = check_Q1(caps, t);
    r.q2 = check_Q2(organ, w, caps, key, t);
    r.q3 = check_Q3(organ, w, caps, key, t);
    return r;
}

SuccessReport check_success(const Organ& organ, std::uint64_t key, const CriterionThresholds& t) {
    SuccessReport r;
    r.pass = true;
    for (const auto& w : organ.lexicon().words()) {
        r.words.push_back(check_word(organ, w, key, t));
        r.pass = r.pass && r.words.back().pass();
    }
    return r;
}

SuccessReport check_success(const Organ& organ, const CriterionThresholds& t) {
    return check_success(organ, derive_seed(organ.config().seed, "evaluation", organ.steps_run()),
                         t);
}

std::size_t SuccessReport::passing_criteria() const {
    std::size_t n = 0;
    for (const auto& w : words) n += w.p.pass + w.q1.pass + w.q2.pass + w.q3.pass;
    return n;
}

nlohmann::ordered_json CriterionReport::to_json() const {
    nlohmann::ordered_json j;
    j["word"] = word;
    j["pos"] = to_string(pos);
    j["pass"] = pass();
    j["P"] = {{"pass", p.pass}, {"overlap", p.overlap}};
    j["Q1"] = {{"pass", q1.pass},
               {"ratio", number_or_null(q1.ratio)},
               {"nu_input", q1.nu_input},
               {"mu_input", q1.mu_input}};
    j["Q2"] = {{"pass", q2.pass},
               {"nu_phon", q2.nu_phon},
               {"nu_grounding", q2.nu_grounding},
               {"mu_phon_max", q2.mu_phon_max},
               {"mu_grounding_max", q2.mu_grounding_max}};
    j["Q3"] = {{"pass", q3.pass},
               {"self_overlap", q3.self_overlap},
               {"cross_overlap", q3.cross_overlap}};
    return j;
}

nlohmann::ordered_json SuccessReport::to_json() const {
    nlohmann::ordered_json j;
    j["pass"] = pass;
    j["words"] = nlohmann::ordered_json::array();
    for (const auto& w : words) j["words"].push_back(w.to_json());
    return j;
}

} // namespace nemo
