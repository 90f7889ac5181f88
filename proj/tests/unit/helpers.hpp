#pragma once

#include "nemo/experiment.hpp"

namespace testing {

inline nemo::AreaParams area(const char* name, std::size_t n, std::size_t k, double p,
                             double beta) {
    return nemo::AreaParams{name, n, k, beta, p};
}

// Small organ that trains in milliseconds.
inline nemo::OrganConfig small_organ(std::size_t contexts = 2, double beta = 0.1,
                                     nemo::Backend backend = nemo::Backend::Lazy) {
    nemo::OrganConfig c;
    c.phon = area("PHON", 1000, 30, 0.1, beta);
    c.lex_n = area("LEX_N", 1000, 20, 0.1, beta);
    c.lex_v = area("LEX_V", 1000, 20, 0.1, beta);
    c.visual = area("VISUAL", 1000, 30, 0.1, beta);
    c.motor = area("MOTOR", 1000, 30, 0.1, beta);
    c.context = area("CONTEXT", 1000, 10, 0.1, beta);
    c.contexts = contexts;
    c.tau = 2;
    c.backend = backend;
    c.seed = 11;
    return c;
}

inline nemo::ExperimentConfig small_experiment(std::size_t l = 2, std::size_t max_sentences = 20) {
    nemo::ExperimentConfig e;
    e.organ = small_organ();
    e.l = l;
    e.max_sentences = max_sentences;
    e.seed = 5;
    return e;
}

} // namespace testing
