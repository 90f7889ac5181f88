#include "nemo/assembly.hpp"

#include <algorithm>
#include <iterator>
#include <unordered_set>

namespace nemo {

Winners random_subset(std::size_t n, std::size_t k, Rng& rng) {
    if (k > n) throw Error("subset larger than area");
    Winners out;
    out.reserve(k);
    std::unordered_set<Neuron> seen;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    if (k * 2 > n) {
        std::vector<Neuron> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Neuron>(i);
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> at(i, n - 1);
            std::swap(all[i], all[at(rng)]);
        }
        out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    } else {
        while (out.size() < k) {
            auto i = static_cast<Neuron>(pick(rng));
            if (seen.insert(i).second) out.push_back(i);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double overlap(const Winners& a, const Winners& b, std::size_t k) {
    if (k == 0) return 0.0;
    std::size_t common = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return static_cast<double>(common) / static_cast<double>(k);
}

double overlap(const Assembly& a, const Assembly& b) {
    if (a.area != b.area) throw Error("overlap of assemblies in different areas");
    return overlap(a.neurons, b.neurons, std::max(a.neurons.size(), b.neurons.size()));
}

ProjectionResult project(Network& net, const Assembly& stimulus, AreaId target,
                         std::size_t max_steps, double threshold) {
    if (!net.connectome(stimulus.area, target))
        throw Error("no fiber from " + net.area(stimulus.area).name + " to " +
                    net.area(target).name);
    const std::size_t k = net.area(target).k;
    ProjectionResult result;
    net.clear_firing();
    ClampMap clamp{{stimulus.area, stimulus.neurons}};
    for (std::size_t s = 0; s < max_steps; ++s) {
        const auto& state = net.step(clamp, true);
        result.caps.push_back(state.winners[target]);
        if (result.caps.size() < 2) continue;
        double o = overlap(result.caps[result.caps.size() - 2], result.caps.back(), k);
        result.trace.overlaps.push_back(o);
        if (o >= threshold) {
            result.trace.converged_at = result.caps.size();
            break;
        }
    }
    result.assembly = {target, result.caps.empty() ? Winners{} : result.caps.back(),
                       stimulus.label.empty() ? "" : "proj(" + stimulus.label + ")"};
    return result;
}

ProjectionSetup make_projection_setup(const AreaParams& target, Backend backend,
                                      std::uint64_t seed, KernelMode mode) {
    target.validate();
    Network net(backend, seed, mode);
    AreaParams stim = target;
    stim.name = "STIMULUS";
    const AreaId s = net.add_area(stim);
    const AreaId t = net.add_area(target);
    net.add_connectome(s, t);
    net.add_connectome(t, t);
    Rng rng = make_rng(seed, "stimulus");
    Assembly a{s, random_subset(stim.n, stim.k, rng), "STIMULUS"};
    return {std::move(net), t, std::move(a)};
}

Winners readout(const Network& net, const std::vector<Assembly>& fire, AreaId target,
                std::uint64_t key) {
    FiringMap map;
    for (const auto& a : fire) map.push_back({a.area, &a.neurons});
    return net.readout(map, target, key).winners;
}

} // namespace nemo
