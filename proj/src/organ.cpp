#include "nemo/organ.hpp"

#include <algorithm>
#include <iterator>

namespace nemo {

void OrganConfig::validate() const {
    for (const auto* a : {&phon, &lex_n, &lex_v, &visual, &motor}) a->validate();
    if (contexts > 0) context.validate();
    if (tau == 0) throw Error("tau must be at least 1");
}

void OrganConfig::set_beta(double beta) {
    for (auto* a : {&phon, &lex_n, &lex_v, &visual, &motor, &context}) a->beta = beta;
}

Organ::Organ(const OrganConfig& config, Lexicon lexicon)
    : config_(config), lexicon_(std::move(lexicon)),
      net_(config.backend, derive_seed(config.seed, "network"), config.kernels) {
    config_.validate();
    if (lexicon_.contexts() != config_.contexts)
        throw Error("lexicon uses " + std::to_string(lexicon_.contexts()) +
                    " context areas but organ has " + std::to_string(config_.contexts));

    areas_.phon = net_.add_area(config_.phon);
    areas_.lex_n = net_.add_area(config_.lex_n);
    areas_.lex_v = net_.add_area(config_.lex_v);
    areas_.visual = net_.add_area(config_.visual);
    areas_.motor = net_.add_area(config_.motor);
    for (std::size_t i = 0; i < config_.contexts; ++i) {
        AreaParams p = config_.context;
        p.name = "CONTEXT_" + std::to_string(i);
        areas_.context.push_back(net_.add_area(p));
    }
    unclamped_silent_.assign(net_.area_count(), true);
    unclamped_silent_[areas_.lex_n] = false;
    unclamped_silent_[areas_.lex_v] = false;

    auto two_way = [&](AreaId a, AreaId b) {
        net_.add_connectome(a, b);
        net_.add_connectome(b, a);
    };
    net_.add_connectome(areas_.lex_n, areas_.lex_n);
    net_.add_connectome(areas_.lex_v, areas_.lex_v);
    two_way(areas_.phon, areas_.lex_n);
    two_way(areas_.phon, areas_.lex_v);
    two_way(areas_.visual, areas_.lex_n);
    two_way(areas_.motor, areas_.lex_v);
    for (AreaId c : areas_.context) {
        two_way(c, areas_.lex_n);
        two_way(c, areas_.lex_v);
    }

    auto bind = [&](AreaId area, const Word& w, const std::string& tag) {
        const auto& p = net_.area(area);
        Rng rng = make_rng(config_.seed, "assembly", area, w.id);
        return Assembly{area, random_subset(p.n, p.k, rng),
                        tag + "[" + std::string(to_string(w.pos)) + std::to_string(w.id) + "]"};
    };
    for (const auto& w : lexicon_.words()) {
        phon_.push_back(bind(areas_.phon, w, "PHON"));
        grounding_.push_back(w.is_noun() ? bind(areas_.visual, w, "VISUAL")
                                         : bind(areas_.motor, w, "MOTOR"));
        if (w.context)
            context_.push_back(bind(areas_.context[*w.context], w, "CONTEXT_" +
                                                                      std::to_string(*w.context)));
        else
            context_.emplace_back();
    }
}

void Organ::check_word(const Word& w) const {
    if (w.id >= lexicon_.size() || lexicon_.word(w.id).pos != w.pos ||
        lexicon_.word(w.id).context != w.context)
        throw Error("word " + std::to_string(w.id) + " is not in the organ's lexicon");
}

const Assembly& Organ::phon(const Word& w) const {
    check_word(w);
    return phon_[w.id];
}

const Assembly& Organ::grounding(const Word& w) const {
    check_word(w);
    return grounding_[w.id];
}

const std::optional<Assembly>& Organ::context(const Word& w) const {
    check_word(w);
    return context_[w.id];
}

AreaId Organ::lex_area(const Word& w) const {
    return w.is_noun() ? areas_.lex_n : areas_.lex_v;
}

AreaId Organ::other_lex_area(const Word& w) const {
    return w.is_noun() ? areas_.lex_v : areas_.lex_n;
}

AreaId Organ::other_grounding_area(const Word& w) const {
    return w.is_noun() ? areas_.motor : areas_.visual;
}

std::vector<const Assembly*> Organ::assemblies_in(AreaId area) const {
    std::vector<const Assembly*> out;
    for (const auto* group : {&phon_, &grounding_})
        for (const auto& a : *group)
            if (a.area == area) out.push_back(&a);
    for (const auto& a : context_)
        if (a && a->area == area) out.push_back(&*a);
    return out;
}

namespace {

// Adds `a` to the clamp map, merging with an assembly already clamped in the
// same area (two words sharing a context area).
void add_clamp(ClampMap& clamps, const Assembly& a) {
    for (auto& c : clamps) {
        if (c.area != a.area) continue;
        Winners merged;
        std::set_union(c.neurons.begin(), c.neurons.end(), a.neurons.begin(), a.neurons.end(),
                       std::back_inserter(merged));
        c.merged = merged.size() != c.neurons.size() || c.merged;
        c.neurons = std::move(merged);
        return;
    }
    clamps.push_back({a.area, a.neurons});
}

} // namespace

ClampMap Organ::feed_clamps(const Sentence& s, std::size_t t) const {
    const Word& noun = s.noun();
    const Word& verb = s.verb();
    ClampMap clamps;
    add_clamp(clamps, t <= config_.tau ? phon(*s.first) : phon(*s.second));
    add_clamp(clamps, grounding(noun));
    add_clamp(clamps, grounding(verb));
    if (const auto& c = context(*s.first)) add_clamp(clamps, *c);
    if (const auto& c = context(*s.second)) add_clamp(clamps, *c);
    return clamps;
}

ClampMap Organ::tutor_clamps(const Word& w) const {
    ClampMap clamps;
    add_clamp(clamps, phon(w));
    add_clamp(clamps, grounding(w));
    if (const auto& c = context(w)) add_clamp(clamps, *c);
    return clamps;
}

void Organ::feed(const Sentence& s) {
    if (s.first->pos == s.second->pos) throw Error("sentence needs one noun and one verb");
    net_.clear_firing();
    for (std::size_t t = 1; t <= 2 * config_.tau; ++t) {
        net_.step(feed_clamps(s, t), true, unclamped_silent_);
        ++steps_;
    }
    net_.clear_firing();
}

void Organ::tutor(const Word& w) {
    const auto clamps = tutor_clamps(w);
    net_.clear_firing();
    for (std::size_t t = 0; t < config_.tau; ++t) {
        net_.step(clamps, true, unclamped_silent_);
        ++steps_;
    }
    net_.clear_firing();
}

nlohmann::ordered_json Organ::manifest() const {
    nlohmann::ordered_json areas = nlohmann::ordered_json::array();
    for (AreaId a = 0; a < net_.area_count(); ++a) {
        const auto& p = net_.area(a);
        areas.push_back({{"name", p.name}, {"n", p.n}, {"k", p.k}, {"p", p.p}, {"beta", p.beta}});
    }
    nlohmann::ordered_json assemblies = nlohmann::ordered_json::array();
    auto dump = [&](const Assembly& a, std::size_t word) {
        assemblies.push_back({{"area", net_.area(a.area).name},
                              {"word", word},
                              {"label", a.label},
                              {"neurons", a.neurons}});
    };
    for (const auto& w : lexicon_.words()) {
        dump(phon_[w.id], w.id);
        dump(grounding_[w.id], w.id);
        if (context_[w.id]) dump(*context_[w.id], w.id);
    }
    nlohmann::ordered_json out;
    out["backend"] = to_string(config_.backend);
    out["seed"] = config_.seed;
    out["tau"] = config_.tau;
    out["order"] = to_string(config_.order);
    out["areas"] = std::move(areas);
    out["lexicon"] = lexicon_.to_json();
    out["assemblies"] = std::move(assemblies);
    return out;
}

Organ build_organ(const OrganConfig& config, Lexicon lexicon) {
    return Organ(config, std::move(lexicon));
}

} // namespace nemo
