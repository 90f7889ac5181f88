#include "nemo/connectome.hpp"

#include <algorithm>
#include <bit>

namespace nemo {

namespace {

// Calls emit(i) for each i in [0, count) independently with probability p,
// in increasing order, by skipping geometrically distributed gaps.
template <class Emit>
void bernoulli_indices(std::size_t count, double p, Rng& rng, Emit&& emit) {
    if (p <= 0.0 || count == 0) return;
    if (p >= 1.0) {
        for (std::size_t i = 0; i < count; ++i) emit(i);
        return;
    }
    std::geometric_distribution<std::uint64_t> gap(p);
    std::uint64_t i = gap(rng);
    while (i < count) {
        emit(static_cast<std::size_t>(i));
        i += 1 + gap(rng);
    }
}

} // namespace

Connectome::Connectome(std::size_t src_size, std::size_t dst_size, double p, bool recurrent,
                       Backend backend, std::uint64_t seed, KernelMode mode)
    : rows_(src_size), dst_size_(dst_size), p_(p), recurrent_(recurrent), backend_(backend),
      seed_(seed) {
    if (src_size == 0 || dst_size == 0) throw Error("connectome between empty areas");
    if (!(p >= 0.0 && p <= 1.0)) throw Error("connection probability must lie in [0, 1]");
    if (recurrent && src_size != dst_size) throw Error("recurrent connectome must be square");
    if (backend == Backend::Explicit) sample_all(mode);
}

void Connectome::sample_all(KernelMode mode) {
    const auto n_src = static_cast<std::int64_t>(rows_.size());
    // One stream per row keeps the graph independent of thread count.
#pragma omp parallel for schedule(dynamic, 64) if (mode == KernelMode::Parallel)
    for (std::int64_t s = 0; s < n_src; ++s) {
        Rng rng = make_rng(seed_, "row", static_cast<std::uint64_t>(s));
        auto& row = rows_[static_cast<std::size_t>(s)];
        const auto self = static_cast<std::size_t>(s);
        if (recurrent_) {
            // Sample over the n-1 other neurons, then shift past self.
            bernoulli_indices(dst_size_ - 1, p_, rng, [&](std::size_t j) {
                row.dst.push_back(static_cast<Neuron>(j < self ? j : j + 1));
            });
        } else {
            bernoulli_indices(dst_size_, p_, rng,
                              [&](std::size_t j) { row.dst.push_back(static_cast<Neuron>(j)); });
        }
        row.weight.assign(row.dst.size(), 1.0);
    }
}

void Connectome::insert(Neuron src, Neuron dst, double w) {
    auto& row = rows_[src];
    auto it = std::lower_bound(row.dst.begin(), row.dst.end(), dst);
    auto pos = it - row.dst.begin();
    if (it != row.dst.end() && *it == dst) {
        row.weight[static_cast<std::size_t>(pos)] = w;
        return;
    }
    row.dst.insert(it, dst);
    row.weight.insert(row.weight.begin() + pos, w);
}

void Connectome::add_column(Neuron dst, std::span<const Neuron> firing,
                            std::span<const Neuron> connected, Rng& rng) {
    // firing and connected are sorted; a neuron in firing but not in
    // connected is known to be disconnected.
    auto observed = [&](std::size_t s) {
        return std::binary_search(firing.begin(), firing.end(), static_cast<Neuron>(s));
    };
    bernoulli_indices(rows_.size(), p_, rng, [&](std::size_t s) {
        if (recurrent_ && s == dst) return;
        if (observed(s)) return;
        insert(static_cast<Neuron>(s), dst, 1.0);
    });
    for (Neuron s : connected) {
        if (recurrent_ && s == dst) continue;
        insert(s, dst, 1.0);
    }
}

double Connectome::weight(Neuron src, Neuron dst) const {
    const auto& row = rows_[src];
    auto it = std::lower_bound(row.dst.begin(), row.dst.end(), dst);
    if (it == row.dst.end() || *it != dst) return 0.0;
    return row.weight[static_cast<std::size_t>(it - row.dst.begin())];
}

std::size_t Connectome::synapse_count() const {
    std::size_t total = 0;
    for (const auto& r : rows_) total += r.size();
    return total;
}

std::vector<SynapseTriple> Connectome::triples() const {
    std::vector<SynapseTriple> out;
    out.reserve(synapse_count());
    for (std::size_t s = 0; s < rows_.size(); ++s)
        for (std::size_t i = 0; i < rows_[s].size(); ++i)
            out.push_back({static_cast<Neuron>(s), rows_[s].dst[i], rows_[s].weight[i]});
    return out;
}

void Connectome::assign(std::span<const SynapseTriple> triples) {
    for (auto& r : rows_) {
        r.dst.clear();
        r.weight.clear();
    }
    for (const auto& t : triples) {
        if (t.src >= rows_.size() || t.dst >= dst_size_)
            throw Error("synapse index out of range for connectome");
        insert(t.src, t.dst, t.weight);
    }
}

std::uint64_t Connectome::checksum() const {
    std::uint64_t h = 0x6a09e667f3bcc908ULL;
    for (std::size_t s = 0; s < rows_.size(); ++s) {
        const auto& r = rows_[s];
        for (std::size_t i = 0; i < r.size(); ++i) {
            h = splitmix64(h ^ ((static_cast<std::uint64_t>(s) << 32) | r.dst[i]));
            h = splitmix64(h ^ std::bit_cast<std::uint64_t>(r.weight[i]));
        }
    }
    return h;
}

} // namespace nemo
