#pragma once

#include "nemo/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nemo {

enum class PartOfSpeech { Noun, Verb };
enum class WordOrder { SV, VS };

std::string_view to_string(PartOfSpeech p);
std::string_view to_string(WordOrder o);
WordOrder word_order_from_string(std::string_view s);

struct Word {
    std::size_t id = 0;
    PartOfSpeech pos = PartOfSpeech::Noun;
    std::optional<std::size_t> context; // extra context area, none when C = 0

    bool is_noun() const { return pos == PartOfSpeech::Noun; }
};

// l nouns (ids 0..l-1) followed by l intransitive verbs (ids l..2l-1).
class Lexicon {
public:
    Lexicon(std::size_t l, std::size_t contexts, std::uint64_t seed);

    std::size_t l() const { return l_; }
    std::size_t contexts() const { return contexts_; }
    std::size_t size() const { return words_.size(); }

    const std::vector<Word>& words() const { return words_; }
    const Word& word(std::size_t id) const { return words_.at(id); }
    const Word& noun(std::size_t i) const { return words_.at(i); }
    const Word& verb(std::size_t i) const { return words_.at(l_ + i); }

    nlohmann::ordered_json to_json() const;

private:
    std::size_t l_;
    std::size_t contexts_;
    std::vector<Word> words_;
};

Lexicon build_lexicon(std::size_t l, std::size_t contexts, std::uint64_t seed);

struct Sentence {
    const Word* first;
    const Word* second;
    WordOrder order;

    const Word& noun() const { return order == WordOrder::SV ? *first : *second; }
    const Word& verb() const { return order == WordOrder::SV ? *second : *first; }
};

// Noun and verb drawn independently and uniformly.
Sentence sample_sentence(const Lexicon& lex, WordOrder order, Rng& rng);

} // namespace nemo
