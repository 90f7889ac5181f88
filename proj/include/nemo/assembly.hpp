#pragma once

#include "nemo/network.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nemo {

struct Assembly {
    AreaId area = 0;
    Winners neurons;
    std::string label;
};

// Uniformly random k-subset of an area, sorted.
Winners random_subset(std::size_t n, std::size_t k, Rng& rng);

// |a ∩ b| / k for sorted winner sets.
double overlap(const Winners& a, const Winners& b, std::size_t k);
// Assemblies must live in the same area; normalized by the larger size.
double overlap(const Assembly& a, const Assembly& b);

struct ConvergenceTrace {
    std::vector<double> overlaps; // overlaps[i] = overlap(b_{i+1}, b_{i+2})
    std::optional<std::size_t> converged_at; // step whose cap matched its predecessor
};

struct ProjectionResult {
    Assembly assembly;
    ConvergenceTrace trace;
    std::vector<Winners> caps;
};

// Fires `stimulus` into `target` every step with plasticity on until two
// consecutive caps overlap by at least `threshold` or `max_steps` caps have
// been formed. Starts from a cleared firing state and leaves the final state
// in the network.
ProjectionResult project(Network& net, const Assembly& stimulus, AreaId target,
                         std::size_t max_steps, double threshold = 0.95);

// A stimulus area holding one random assembly, wired into a recurrent
// target area. The stimulus area copies n and k from `target`.
struct ProjectionSetup {
    Network net;
    AreaId target;
    Assembly stimulus;
};

ProjectionSetup make_projection_setup(const AreaParams& target, Backend backend,
                                      std::uint64_t seed,
                                      KernelMode mode = KernelMode::Serial);

// One plasticity-frozen step in which only `fire` fires; returns the cap
// formed in `target` (empty when nothing fired reaches it).
Winners readout(const Network& net, const std::vector<Assembly>& fire, AreaId target,
                std::uint64_t key = 0);

} // namespace nemo
