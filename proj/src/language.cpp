#include "nemo/language.hpp"

#include "nemo/types.hpp"

#include <string>

namespace nemo {

std::string_view to_string(PartOfSpeech p) {
    return p == PartOfSpeech::Noun ? "noun" : "verb";
}

std::string_view to_string(WordOrder o) {
    return o == WordOrder::SV ? "SV" : "VS";
}

WordOrder word_order_from_string(std::string_view s) {
    if (s == "SV" || s == "sv") return WordOrder::SV;
    if (s == "VS" || s == "vs") return WordOrder::VS;
    throw Error("unknown word order '" + std::string(s) + "' (expected SV|VS)");
}

Lexicon::Lexicon(std::size_t l, std::size_t contexts, std::uint64_t seed)
    : l_(l), contexts_(contexts) {
    if (l == 0) throw Error("lexicon needs at least one noun and one verb");
    Rng rng = make_rng(seed, "lexicon");
    words_.reserve(2 * l);
    for (std::size_t i = 0; i < 2 * l; ++i) {
        Word w;
        w.id = i;
        w.pos = i < l ? PartOfSpeech::Noun : PartOfSpeech::Verb;
        if (contexts > 0) {
            std::uniform_int_distribution<std::size_t> ctx(0, contexts - 1);
            w.context = ctx(rng);
        }
        words_.push_back(w);
    }
}

nlohmann::ordered_json Lexicon::to_json() const {
    nlohmann::ordered_json words = nlohmann::ordered_json::array();
    for (const auto& w : words_) {
        nlohmann::ordered_json j;
        j["id"] = w.id;
        j["pos"] = to_string(w.pos);
        j["context"] = w.context ? nlohmann::ordered_json(*w.context) : nlohmann::ordered_json();
        words.push_back(std::move(j));
    }
    nlohmann::ordered_json out;
    out["l"] = l_;
    out["C"] = contexts_;
    out["words"] = std::move(words);
    return out;
}

Lexicon build_lexicon(std::size_t l, std::size_t contexts, std::uint64_t seed) {
    return Lexicon(l, contexts, seed);
}

Sentence sample_sentence(const Lexicon& lex, WordOrder order, Rng& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, lex.l() - 1);
    const Word& n = lex.noun(pick(rng));
    const Word& v = lex.verb(pick(rng));
    if (order == WordOrder::SV) return {&n, &v, order};
    return {&v, &n, order};
}

} // namespace nemo
