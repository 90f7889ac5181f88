#pragma once

#include "nemo/connectome.hpp"
#include "nemo/lazy.hpp"
#include "nemo/rng.hpp"
#include "nemo/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nemo {

struct FiringState {
    std::vector<Winners> winners; // indexed by AreaId
    std::uint64_t t = 0;
};

struct Clamp {
    AreaId area;
    Winners neurons;
    // Set when the stimulus is the union of several assemblies sharing an
    // area; lifts the exactly-k requirement.
    bool merged = false;
};
using ClampMap = std::vector<Clamp>;

// Areas that fire for a plasticity-frozen readout, with their winner sets.
struct Firing {
    AreaId area;
    const Winners* neurons;
};
using FiringMap = std::vector<Firing>;

// Indexed by AreaId; missing entries read as false.
using AreaMask = std::vector<bool>;

struct InputSource {
    const Connectome* connectome;
    std::span<const Neuron> firing;
};

// I_j = sum over sources, over firing presynaptic i, of w(i, j).
std::vector<double> synaptic_inputs(std::size_t dst_size, std::span<const InputSource> sources,
                                    KernelMode mode = KernelMode::Serial);

struct Cap {
    Winners winners;
    std::vector<double> inputs; // parallel to winners
    double total_input() const;
};

class Network {
public:
    struct Link {
        AreaId src;
        AreaId dst;
        std::unique_ptr<Connectome> connectome;
    };

    explicit Network(Backend backend, std::uint64_t seed, KernelMode mode = KernelMode::Serial);

    Network(Network&&) noexcept = default;
    Network& operator=(Network&&) noexcept = default;

    AreaId add_area(AreaParams params);
    // Connection probability is the destination area's p; src == dst makes a
    // recurrent connectome without self-synapses.
    const Connectome& add_connectome(AreaId src, AreaId dst);

    Backend backend() const { return backend_; }
    KernelMode kernel_mode() const { return mode_; }
    void set_kernel_mode(KernelMode m) { mode_ = m; }
    std::uint64_t seed() const { return seed_; }

    std::size_t area_count() const { return areas_.size(); }
    const AreaParams& area(AreaId a) const;
    AreaId area_id(std::string_view name) const;
    bool has_area(std::string_view name) const;

    const std::vector<Link>& links() const { return links_; }
    const Connectome* connectome(AreaId src, AreaId dst) const;
    Connectome* connectome(AreaId src, AreaId dst);

    // Lazy backend: neurons whose incoming synapses are materialized.
    std::size_t support_size(AreaId a) const { return areas_.at(a).support_count; }
    bool in_support(AreaId a, Neuron i) const;

    const FiringState& state() const { return state_; }
    void set_firing(AreaId a, Winners w);
    void clear_firing();

    // One synchronous update. Clamped assemblies fire now (replacing their
    // area's current winners) and stay the winners of their area; every other
    // area takes the k-cap of its summed input from everything firing now.
    // With plasticity on, every synapse from a firing neuron onto a new
    // winner is scaled by 1 + beta of the destination area. Areas flagged in
    // `silent` and not clamped select nothing and stay silent next step.
    const FiringState& step(const ClampMap& clamps, bool plasticity,
                            const AreaMask& silent = {});

    // Summed input of each area's winners at the last step (0 if clamped).
    const std::vector<double>& last_cap_input() const { return last_cap_input_; }

    // k-cap of `target` when exactly the areas in `fire` fire. Never mutates
    // the network; unmaterialized candidates are drawn from a stream keyed
    // by `key`.
    Cap readout(const FiringMap& fire, AreaId target, std::uint64_t key) const;

    std::uint64_t weight_checksum() const;

    void write_snapshot(std::ostream& out) const;
    // Requires a network with the same areas and connectomes.
    void read_snapshot(std::istream& in);

private:
    struct AreaState {
        AreaParams params;
        std::vector<char> supported;
        std::size_t support_count = 0;
        Rng candidate_rng;
        Rng column_rng;
    };

    Cap select(AreaId target, const FiringMap& fire, Rng& rng) const;
    void materialize(AreaId target, Neuron neuron, const FiringMap& fire, unsigned observed);
    void check_winners(AreaId a, const Winners& w, bool exact_k, bool capped = true) const;

    Backend backend_;
    std::uint64_t seed_;
    KernelMode mode_;
    std::vector<AreaState> areas_;
    std::vector<Link> links_;
    FiringState state_;
    std::vector<double> last_cap_input_;
};

} // namespace nemo
