#pragma once

#include "nemo/assembly.hpp"
#include "nemo/language.hpp"
#include "nemo/network.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

#include <json.hpp>

namespace nemo {

struct OrganConfig {
    AreaParams phon{"PHON", 0, 0, 0.0, 0.0};
    AreaParams lex_n{"LEX_N", 0, 0, 0.0, 0.0};
    AreaParams lex_v{"LEX_V", 0, 0, 0.0, 0.0};
    AreaParams visual{"VISUAL", 0, 0, 0.0, 0.0};
    AreaParams motor{"MOTOR", 0, 0, 0.0, 0.0};
    AreaParams context{"CONTEXT", 0, 0, 0.0, 0.0}; // template for CONTEXT_0..C-1
    std::size_t contexts = 0;                      // C
    std::size_t tau = 2;
    WordOrder order = WordOrder::SV;
    Backend backend = Backend::Lazy;
    KernelMode kernels = KernelMode::Serial; // results do not depend on it
    std::uint64_t seed = 0;

    void validate() const;
    // Sets beta on every area.
    void set_beta(double beta);
};

struct OrganAreas {
    AreaId phon, lex_n, lex_v, visual, motor;
    std::vector<AreaId> context;
};

// Areas PHON, LEX_N, LEX_V, VISUAL, MOTOR and CONTEXT_i joined by two-way
// fibers PHON-LEX_N, PHON-LEX_V, VISUAL-LEX_N, MOTOR-LEX_V and
// CONTEXT_i-LEX_{N,V}; only the two lexical areas are recurrent. Every
// non-lexical area holds a fixed random assembly per relevant word.
class Organ {
public:
    Organ(const OrganConfig& config, Lexicon lexicon);

    const OrganConfig& config() const { return config_; }
    const Lexicon& lexicon() const { return lexicon_; }
    const OrganAreas& areas() const { return areas_; }
    Network& network() { return net_; }
    const Network& network() const { return net_; }

    const Assembly& phon(const Word& w) const;
    // VISUAL[w] for nouns, MOTOR[w] for verbs.
    const Assembly& grounding(const Word& w) const;
    const std::optional<Assembly>& context(const Word& w) const;

    AreaId lex_area(const Word& w) const;
    AreaId other_lex_area(const Word& w) const;
    // Grounding area of the opposite part of speech.
    AreaId other_grounding_area(const Word& w) const;
    // Every bound assembly in `area`.
    std::vector<const Assembly*> assemblies_in(AreaId area) const;

    // 2*tau plasticity steps: grounding and context assemblies of both words
    // throughout, PHON of the first word for tau steps then the second.
    // Only the lexical areas evolve; unclamped non-lexical areas stay silent.
    // Firing is cleared afterwards.
    void feed(const Sentence& s);
    // tau plasticity steps firing PHON, grounding and context of one word.
    void tutor(const Word& w);

    std::uint64_t steps_run() const { return steps_; }

    // Clamp schedule Feed would apply at step t (1-based).
    ClampMap feed_clamps(const Sentence& s, std::size_t t) const;
    ClampMap tutor_clamps(const Word& w) const;

    nlohmann::ordered_json manifest() const;
    void write_checkpoint(std::ostream& snapshot) const { net_.write_snapshot(snapshot); }
    void read_checkpoint(std::istream& snapshot) { net_.read_snapshot(snapshot); }

private:
    void check_word(const Word& w) const;

    OrganConfig config_;
    Lexicon lexicon_;
    Network net_;
    OrganAreas areas_{};
    std::vector<Assembly> phon_;
    std::vector<Assembly> grounding_;
    std::vector<std::optional<Assembly>> context_;
    AreaMask unclamped_silent_; // every non-lexical area
    std::uint64_t steps_ = 0;
};

Organ build_organ(const OrganConfig& config, Lexicon lexicon);

} // namespace nemo
