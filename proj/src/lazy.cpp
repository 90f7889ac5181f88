#include "nemo/lazy.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace nemo {

std::vector<double> binomial_pmf(unsigned trials, double p) {
    std::vector<double> pmf(trials + 1, 0.0);
    if (p <= 0.0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (p >= 1.0) {
        pmf[trials] = 1.0;
        return pmf;
    }
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lg_n = std::lgamma(trials + 1.0);
    for (unsigned v = 0; v <= trials; ++v) {
        double lc = lg_n - std::lgamma(v + 1.0) - std::lgamma(trials - v + 1.0);
        pmf[v] = std::exp(lc + v * lp + (trials - v) * lq);
    }
    return pmf;
}

std::vector<DrawGroup> top_binomial_draws(std::size_t pool, unsigned trials, double p,
                                          std::size_t quota, Rng& rng) {
    std::vector<DrawGroup> groups;
    if (pool == 0 || quota == 0 || trials == 0 || p <= 0.0) return groups;

    const auto pmf = binomial_pmf(trials, p);
    std::vector<double> cdf(pmf.size());
    double acc = 0.0;
    for (std::size_t v = 0; v < pmf.size(); ++v) cdf[v] = (acc += pmf[v]);

    // Values whose tail mass is this small never show up among `pool` draws.
    std::vector<double> tail(pmf.size() + 1, 0.0);
    for (std::size_t v = pmf.size(); v-- > 0;) tail[v] = tail[v + 1] + pmf[v];
    unsigned top = trials;
    while (top > 0 && static_cast<double>(pool) * tail[top] < 1e-15) --top;

    std::size_t remaining = pool;
    std::size_t taken = 0;
    for (unsigned v = top; v >= 1 && remaining > 0 && taken < quota; --v) {
        // Remaining draws are iid conditioned on X <= v.
        double q = cdf[v] > 0.0 ? pmf[v] / cdf[v] : 0.0;
        q = std::clamp(q, 0.0, 1.0);
        std::size_t c = 0;
        if (q >= 1.0) {
            c = remaining;
        } else if (q > 0.0) {
            std::binomial_distribution<std::size_t> draw(remaining, q);
            c = draw(rng);
        }
        if (c > 0) {
            groups.push_back({v, c});
            remaining -= c;
            taken += c;
        }
    }
    return groups;
}

namespace {

std::vector<Neuron> distinct_unsupported(std::size_t n, std::span<const char> supported,
                                         std::size_t support_count, std::size_t m, Rng& rng) {
    std::vector<Neuron> out;
    out.reserve(m);
    const std::size_t free_count = n - support_count;
    if (m == 0 || free_count == 0) return out;
    if (m * 4 >= free_count) {
        std::vector<Neuron> pool;
        pool.reserve(free_count);
        for (std::size_t i = 0; i < n; ++i)
            if (!supported[i]) pool.push_back(static_cast<Neuron>(i));
        for (std::size_t i = 0; i < m; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
            std::swap(pool[i], pool[pick(rng)]);
            out.push_back(pool[i]);
        }
        return out;
    }
    std::unordered_set<Neuron> seen;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    while (out.size() < m) {
        auto i = static_cast<Neuron>(pick(rng));
        if (supported[i] || !seen.insert(i).second) continue;
        out.push_back(i);
    }
    return out;
}

} // namespace

std::vector<Candidate> lazy_candidates(std::size_t n, std::span<const char> supported,
                                       std::size_t support_count, unsigned total_firing,
                                       double p, std::size_t quota, Rng& rng) {
    std::vector<Candidate> out;
    const std::size_t pool = n - support_count;
    auto groups = top_binomial_draws(pool, total_firing, p, quota, rng);

    std::size_t wanted = 0;
    for (auto& g : groups) {
        g.count = std::min(g.count, quota - wanted);
        wanted += g.count;
    }
    auto neurons = distinct_unsupported(n, supported, support_count, wanted, rng);
    std::size_t next = 0;
    for (const auto& g : groups)
        for (std::size_t c = 0; c < g.count; ++c)
            out.push_back({neurons[next++], static_cast<double>(g.value)});
    return out;
}

} // namespace nemo
