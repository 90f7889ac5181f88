#pragma once

#include "nemo/rng.hpp"
#include "nemo/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace nemo {

struct Candidate {
    Neuron neuron;
    double input;
};

struct DrawGroup {
    unsigned value;
    std::size_t count;
};

// Probability mass function of Binomial(trials, p) over 0..trials.
std::vector<double> binomial_pmf(unsigned trials, double p);

// Largest values among `pool` iid Binomial(trials, p) draws, descending,
// grouped by value, stopping once at least `quota` positive draws have been
// produced. The draws are generated from the top down with one conditional
// binomial per value, so the cost does not depend on `pool`.
std::vector<DrawGroup> top_binomial_draws(std::size_t pool, unsigned trials, double p,
                                          std::size_t quota, Rng& rng);

// Sampled inputs for the best `quota` neurons outside the support of an area
// of n neurons when `total_firing` presynaptic neurons fire into it with
// connection probability p. Each unmaterialized neuron's input is
// Binomial(total_firing, p); zero inputs are never returned. Neuron indices
// are a uniform random choice from the complement of the support.
std::vector<Candidate> lazy_candidates(std::size_t n, std::span<const char> supported,
                                       std::size_t support_count, unsigned total_firing,
                                       double p, std::size_t quota, Rng& rng);

} // namespace nemo
