#pragma once

#include "nemo/connectome.hpp"
#include "nemo/types.hpp"

#include <span>
#include <vector>

// Hot loops of a simulation step. Each kernel has a serial reference and an
// OpenMP variant; both produce bit-identical results for any thread count
// because every postsynaptic sum is accumulated in presynaptic index order.
namespace nemo::kernels {

// inputs[j] += sum of w(i, j) over firing i. `firing` must be sorted.
void accumulate_serial(const Connectome& c, std::span<const Neuron> firing,
                       std::span<double> inputs);
void accumulate_parallel(const Connectome& c, std::span<const Neuron> firing,
                         std::span<double> inputs);

// Multiplies w(i, j) by `factor` for every synapse with i in `pre` and
// post_mask[j] set.
void plasticity_serial(Connectome& c, std::span<const Neuron> pre,
                       std::span<const char> post_mask, double factor);
void plasticity_parallel(Connectome& c, std::span<const Neuron> pre,
                         std::span<const char> post_mask, double factor);

// Indices of the k largest strictly positive inputs, ties to the lower
// index. Result sorted ascending.
Winners k_cap_serial(std::span<const double> inputs, std::size_t k);
Winners k_cap_parallel(std::span<const double> inputs, std::size_t k);

inline void accumulate(KernelMode m, const Connectome& c, std::span<const Neuron> firing,
                       std::span<double> inputs) {
    m == KernelMode::Parallel ? accumulate_parallel(c, firing, inputs)
                              : accumulate_serial(c, firing, inputs);
}

inline void plasticity(KernelMode m, Connectome& c, std::span<const Neuron> pre,
                       std::span<const char> post_mask, double factor) {
    m == KernelMode::Parallel ? plasticity_parallel(c, pre, post_mask, factor)
                              : plasticity_serial(c, pre, post_mask, factor);
}

inline Winners k_cap(KernelMode m, std::span<const double> inputs, std::size_t k) {
    return m == KernelMode::Parallel ? k_cap_parallel(inputs, k) : k_cap_serial(inputs, k);
}

} // namespace nemo::kernels
