#pragma once

#include "nemo/rng.hpp"
#include "nemo/types.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace nemo {

// Outgoing synapses of one presynaptic neuron, sorted by postsynaptic index.
struct SynapseRow {
    std::vector<Neuron> dst;
    std::vector<double> weight;

    std::size_t size() const { return dst.size(); }
};

struct SynapseTriple {
    Neuron src;
    Neuron dst;
    double weight;

    bool operator==(const SynapseTriple&) const = default;
};

// Weighted directed synapses from one area into another (or into itself).
//
// Rows are indexed by presynaptic neuron. In the explicit backend every row
// is sampled at construction. In the lazy backend rows start empty and a
// postsynaptic neuron's whole incoming column is added by add_column() the
// first time that neuron fires; the column never changes shape afterwards.
class Connectome {
public:
    Connectome(std::size_t src_size, std::size_t dst_size, double p, bool recurrent,
               Backend backend, std::uint64_t seed, KernelMode mode = KernelMode::Serial);

    std::size_t src_size() const { return rows_.size(); }
    std::size_t dst_size() const { return dst_size_; }
    double p() const { return p_; }
    bool recurrent() const { return recurrent_; }
    Backend backend() const { return backend_; }
    std::uint64_t seed() const { return seed_; }

    const SynapseRow& row(Neuron src) const { return rows_[src]; }
    SynapseRow& row(Neuron src) { return rows_[src]; }

    std::size_t synapse_count() const;

    // Samples the incoming synapses of `dst`. `firing` lists presynaptic
    // neurons whose connection to dst was already observed: exactly those in
    // `connected` (a subset of `firing`) are present, the rest are absent.
    // Every other presynaptic neuron is connected with probability p.
    void add_column(Neuron dst, std::span<const Neuron> firing,
                    std::span<const Neuron> connected, Rng& rng);

    // Weight of src->dst, or 0 when absent.
    double weight(Neuron src, Neuron dst) const;

    std::vector<SynapseTriple> triples() const;
    void assign(std::span<const SynapseTriple> triples);

    // Order-dependent checksum over all (src, dst, weight bits).
    std::uint64_t checksum() const;

private:
    void sample_all(KernelMode mode);
    void insert(Neuron src, Neuron dst, double w);

    std::vector<SynapseRow> rows_;
    std::size_t dst_size_;
    double p_;
    bool recurrent_;
    Backend backend_;
    std::uint64_t seed_;
};

} // namespace nemo
