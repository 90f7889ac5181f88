#include "nemo/network.hpp"

#include "nemo/kernels.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>

namespace nemo {

std::vector<double> synaptic_inputs(std::size_t dst_size, std::span<const InputSource> sources,
                                    KernelMode mode) {
    std::vector<double> inputs(dst_size, 0.0);
    for (const auto& s : sources) {
        if (s.connectome->dst_size() != dst_size)
            throw Error("connectome destination size does not match input area");
        for (Neuron i : s.firing)
            if (i >= s.connectome->src_size())
                throw Error("firing neuron outside connectome source area");
        kernels::accumulate(mode, *s.connectome, s.firing, inputs);
    }
    return inputs;
}

double Cap::total_input() const {
    return std::accumulate(inputs.begin(), inputs.end(), 0.0);
}

Network::Network(Backend backend, std::uint64_t seed, KernelMode mode)
    : backend_(backend), seed_(seed), mode_(mode) {}

AreaId Network::add_area(AreaParams params) {
    params.validate();
    if (has_area(params.name)) throw Error("duplicate area " + params.name);
    AreaId id = areas_.size();
    AreaState a;
    a.supported.assign(params.n, 0);
    a.candidate_rng = make_rng(seed_, "candidates", id);
    a.column_rng = make_rng(seed_, "columns", id);
    a.params = std::move(params);
    areas_.push_back(std::move(a));
    state_.winners.emplace_back();
    last_cap_input_.push_back(0.0);
    return id;
}

const Connectome& Network::add_connectome(AreaId src, AreaId dst) {
    const auto& s = area(src);
    const auto& d = area(dst);
    if (connectome(src, dst)) throw Error("duplicate connectome " + s.name + "->" + d.name);
    auto seed = derive_seed(seed_, "connectome", src, dst);
    links_.push_back({src, dst,
                      std::make_unique<Connectome>(s.n, d.n, d.p, src == dst, backend_, seed, mode_)});
    return *links_.back().connectome;
}

const AreaParams& Network::area(AreaId a) const {
    if (a >= areas_.size()) throw Error("unknown area id " + std::to_string(a));
    return areas_[a].params;
}

AreaId Network::area_id(std::string_view name) const {
    for (AreaId i = 0; i < areas_.size(); ++i)
        if (areas_[i].params.name == name) return i;
    throw Error("unknown area " + std::string(name));
}

bool Network::has_area(std::string_view name) const {
    return std::any_of(areas_.begin(), areas_.end(),
                       [&](const AreaState& a) { return a.params.name == name; });
}

const Connectome* Network::connectome(AreaId src, AreaId dst) const {
    for (const auto& l : links_)
        if (l.src == src && l.dst == dst) return l.connectome.get();
    return nullptr;
}

Connectome* Network::connectome(AreaId src, AreaId dst) {
    return const_cast<Connectome*>(std::as_const(*this).connectome(src, dst));
}

bool Network::in_support(AreaId a, Neuron i) const {
    if (backend_ == Backend::Explicit) return true;
    return areas_.at(a).supported.at(i) != 0;
}

void Network::check_winners(AreaId a, const Winners& w, bool exact_k, bool capped) const {
    const auto& p = area(a);
    if (exact_k && w.size() != p.k)
        throw Error("clamp on " + p.name + " must have exactly k=" + std::to_string(p.k) +
                    " neurons");
    if (capped && w.size() > p.k) throw Error("winner set on " + p.name + " exceeds k");
    if (!std::is_sorted(w.begin(), w.end()) ||
        std::adjacent_find(w.begin(), w.end()) != w.end())
        throw Error("winner set on " + p.name + " must be sorted and distinct");
    if (!w.empty() && w.back() >= p.n) throw Error("neuron index out of range in " + p.name);
}

void Network::set_firing(AreaId a, Winners w) {
    check_winners(a, w, false);
    state_.winners[a] = std::move(w);
}

void Network::clear_firing() {
    for (auto& w : state_.winners) w.clear();
}

Cap Network::select(AreaId target, const FiringMap& fire, Rng& rng) const {
    const auto& tp = areas_[target].params;
    std::vector<InputSource> sources;
    unsigned total_firing = 0;
    for (const auto& l : links_) {
        if (l.dst != target) continue;
        for (const auto& f : fire) {
            if (f.area == l.src && !f.neurons->empty()) {
                sources.push_back({l.connectome.get(), *f.neurons});
                total_firing += static_cast<unsigned>(f.neurons->size());
            }
        }
    }
    Cap cap;
    if (sources.empty()) return cap;

    auto inputs = synaptic_inputs(tp.n, sources, mode_);
    if (backend_ == Backend::Lazy) {
        const auto& a = areas_[target];
        for (const auto& c : lazy_candidates(tp.n, a.supported, a.support_count, total_firing,
                                             tp.p, tp.k, rng))
            inputs[c.neuron] = c.input;
    }
    cap.winners = kernels::k_cap(mode_, inputs, tp.k);
    cap.inputs.reserve(cap.winners.size());
    for (Neuron w : cap.winners) cap.inputs.push_back(inputs[w]);
    return cap;
}

void Network::materialize(AreaId target, Neuron neuron, const FiringMap& fire,
                          unsigned observed) {
    auto& a = areas_[target];
    // Incoming links whose source fires, in link order; `observed` of their
    // firing neurons (a uniform subset) are the ones connected to `neuron`.
    std::vector<std::pair<Connectome*, const Winners*>> firing_links;
    std::size_t total = 0;
    for (const auto& l : links_) {
        if (l.dst != target) continue;
        const Winners* w = nullptr;
        for (const auto& f : fire)
            if (f.area == l.src && !f.neurons->empty()) w = f.neurons;
        firing_links.emplace_back(l.connectome.get(), w);
        if (w) total += w->size();
    }
    std::vector<std::size_t> chosen(total);
    std::iota(chosen.begin(), chosen.end(), std::size_t{0});
    observed = static_cast<unsigned>(std::min<std::size_t>(observed, total));
    for (std::size_t i = 0; i < observed; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, total - 1);
        std::swap(chosen[i], chosen[pick(a.column_rng)]);
    }
    chosen.resize(observed);
    std::sort(chosen.begin(), chosen.end());

    std::size_t offset = 0;
    auto next = chosen.begin();
    for (auto& [c, w] : firing_links) {
        if (!w) {
            c->add_column(neuron, {}, {}, a.column_rng);
            continue;
        }
        std::vector<Neuron> connected;
        for (; next != chosen.end() && *next < offset + w->size(); ++next)
            connected.push_back((*w)[*next - offset]);
        c->add_column(neuron, *w, connected, a.column_rng);
        offset += w->size();
    }
    a.supported[neuron] = 1;
    ++a.support_count;
}

const FiringState& Network::step(const ClampMap& clamps, bool plasticity,
                                 const AreaMask& silent) {
    const std::size_t n_areas = areas_.size();
    std::vector<const Winners*> clamp_of(n_areas, nullptr);
    for (const auto& c : clamps) {
        if (c.merged) {
            if (c.neurons.size() < area(c.area).k)
                throw Error("merged clamp on " + area(c.area).name + " smaller than k");
            check_winners(c.area, c.neurons, false, false);
        } else {
            check_winners(c.area, c.neurons, true);
        }
        clamp_of[c.area] = &c.neurons;
    }
    // Clamped assemblies fire in this step and remain the area's winners.
    for (AreaId a = 0; a < n_areas; ++a)
        if (clamp_of[a]) state_.winners[a] = *clamp_of[a];

    FiringMap fire;
    for (AreaId a = 0; a < n_areas; ++a)
        if (!state_.winners[a].empty()) fire.push_back({a, &state_.winners[a]});

    std::vector<Winners> next(n_areas);
    std::vector<std::vector<double>> next_inputs(n_areas);
    for (AreaId a = 0; a < n_areas; ++a) {
        if (clamp_of[a]) {
            next[a] = *clamp_of[a];
            last_cap_input_[a] = 0.0;
            continue;
        }
        if (a < silent.size() && silent[a]) {
            last_cap_input_[a] = 0.0;
            continue;
        }
        Cap cap = select(a, fire, areas_[a].candidate_rng);
        last_cap_input_[a] = cap.total_input();
        next[a] = std::move(cap.winners);
        next_inputs[a] = std::move(cap.inputs);
    }

    if (backend_ == Backend::Lazy) {
        for (AreaId a = 0; a < n_areas; ++a) {
            const auto& w = next[a];
            for (std::size_t i = 0; i < w.size(); ++i) {
                if (areas_[a].supported[w[i]]) continue;
                // A clamped neuron's input was never observed.
                unsigned observed = clamp_of[a] ? 0u : static_cast<unsigned>(next_inputs[a][i]);
                materialize(a, w[i], fire, observed);
            }
        }
    }

    if (plasticity) {
        std::vector<char> mask;
        for (auto& l : links_) {
            const auto& pre = state_.winners[l.src];
            const auto& post = next[l.dst];
            const double beta = areas_[l.dst].params.beta;
            if (pre.empty() || post.empty() || beta == 0.0) continue;
            mask.assign(areas_[l.dst].params.n, 0);
            for (Neuron j : post) mask[j] = 1;
            kernels::plasticity(mode_, *l.connectome, pre, mask, 1.0 + beta);
        }
    }

    state_.winners = std::move(next);
    ++state_.t;
    return state_;
}

Cap Network::readout(const FiringMap& fire, AreaId target, std::uint64_t key) const {
    area(target);
    for (const auto& f : fire) check_winners(f.area, *f.neurons, false, false);
    Rng rng = make_rng(seed_, "readout", key, target);
    return select(target, fire, rng);
}

std::uint64_t Network::weight_checksum() const {
    std::uint64_t h = 0;
    for (const auto& l : links_)
        h = splitmix64(h ^ l.connectome->checksum() ^ (l.src << 16) ^ l.dst);
    return h;
}

// Snapshot layout (all integers and doubles little-endian):
//   "NEMOSNAP" u32 version u32 backend u32 area_count
//   per area:       u32 name_len, name, u64 n, u64 support_count, u32 support[...]
//   u32 link_count
//   per connectome: u32 src_area u32 dst_area u64 count, then count x
//                   (u32 src, u32 dst, f64 weight) sorted by (src, dst)
namespace {

constexpr std::array<char, 8> kMagic{'N', 'E', 'M', 'O', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T v) {
    std::uint64_t bits;
    if constexpr (std::is_same_v<T, double>) {
        bits = std::bit_cast<std::uint64_t>(v);
    } else {
        bits = static_cast<std::uint64_t>(v);
    }
    constexpr std::size_t width = std::is_same_v<T, double> ? 8 : sizeof(T);
    char buf[8];
    for (std::size_t i = 0; i < width; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(buf, static_cast<std::streamsize>(width));
}

template <class T>
T get(std::istream& in) {
    constexpr std::size_t width = std::is_same_v<T, double> ? 8 : sizeof(T);
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(width)))
        throw Error("truncated snapshot");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < width; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    if constexpr (std::is_same_v<T, double>) {
        return std::bit_cast<double>(bits);
    } else {
        return static_cast<T>(bits);
    }
}

} // namespace

void Network::write_snapshot(std::ostream& out) const {
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kVersion);
    put<std::uint32_t>(out, backend_ == Backend::Explicit ? 0 : 1);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(areas_.size()));
    for (const auto& a : areas_) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(a.params.name.size()));
        out.write(a.params.name.data(), static_cast<std::streamsize>(a.params.name.size()));
        put<std::uint64_t>(out, a.params.n);
        put<std::uint64_t>(out, a.support_count);
        for (std::size_t i = 0; i < a.supported.size(); ++i)
            if (a.supported[i]) put<std::uint32_t>(out, static_cast<std::uint32_t>(i));
    }
    put<std::uint32_t>(out, static_cast<std::uint32_t>(links_.size()));
    for (const auto& l : links_) {
        auto triples = l.connectome->triples(); // already in (src, dst) order
        put<std::uint32_t>(out, static_cast<std::uint32_t>(l.src));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(l.dst));
        put<std::uint64_t>(out, triples.size());
        for (const auto& t : triples) {
            put<std::uint32_t>(out, t.src);
            put<std::uint32_t>(out, t.dst);
            put<double>(out, t.weight);
        }
    }
    if (!out) throw Error("failed to write snapshot");
}

void Network::read_snapshot(std::istream& in) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic)
        throw Error("not a network snapshot");
    if (auto v = get<std::uint32_t>(in); v != kVersion)
        throw Error("unsupported snapshot version " + std::to_string(v));
    auto backend = get<std::uint32_t>(in) == 0 ? Backend::Explicit : Backend::Lazy;
    if (backend != backend_) throw Error("snapshot backend does not match network");
    if (get<std::uint32_t>(in) != areas_.size()) throw Error("snapshot area count mismatch");
    for (auto& a : areas_) {
        std::string name(get<std::uint32_t>(in), '\0');
        in.read(name.data(), static_cast<std::streamsize>(name.size()));
        if (name != a.params.name || get<std::uint64_t>(in) != a.params.n)
            throw Error("snapshot area mismatch at " + a.params.name);
        auto count = get<std::uint64_t>(in);
        std::fill(a.supported.begin(), a.supported.end(), 0);
        for (std::uint64_t i = 0; i < count; ++i) {
            auto idx = get<std::uint32_t>(in);
            if (idx >= a.params.n) throw Error("snapshot support index out of range");
            a.supported[idx] = 1;
        }
        a.support_count = count;
    }
    if (get<std::uint32_t>(in) != links_.size()) throw Error("snapshot connectome count mismatch");
    for (auto& l : links_) {
        auto src = get<std::uint32_t>(in);
        auto dst = get<std::uint32_t>(in);
        if (src != l.src || dst != l.dst) throw Error("snapshot connectome order mismatch");
        std::vector<SynapseTriple> triples(get<std::uint64_t>(in));
        for (auto& t : triples) {
            t.src = get<std::uint32_t>(in);
            t.dst = get<std::uint32_t>(in);
            t.weight = get<double>(in);
        }
        l.connectome->assign(triples);
    }
    clear_firing();
}

} // namespace nemo
