#include "nemo/kernels.hpp"

#include <algorithm>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#else
#define omp_get_thread_num() 0
#define omp_get_num_threads() 1
#endif

namespace nemo::kernels {

namespace {

struct Ranked {
    double value;
    Neuron index;
};

inline bool ranks_before(const Ranked& a, const Ranked& b) {
    return a.value > b.value || (a.value == b.value && a.index < b.index);
}

// Keeps the top k of `pool` (by ranks_before) and drops the rest.
void keep_top(std::vector<Ranked>& pool, std::size_t k) {
    if (pool.size() <= k) return;
    std::nth_element(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k), pool.end(),
                     ranks_before);
    pool.resize(k);
}

void collect_positive(std::span<const double> inputs, std::size_t begin, std::size_t end,
                      std::vector<Ranked>& out) {
    for (std::size_t i = begin; i < end; ++i)
        if (inputs[i] > 0.0) out.push_back({inputs[i], static_cast<Neuron>(i)});
}

Winners to_winners(const std::vector<Ranked>& pool) {
    Winners w;
    w.reserve(pool.size());
    for (const auto& r : pool) w.push_back(r.index);
    std::sort(w.begin(), w.end());
    return w;
}

} // namespace

void accumulate_serial(const Connectome& c, std::span<const Neuron> firing,
                       std::span<double> inputs) {
    for (Neuron i : firing) {
        const auto& row = c.row(i);
        const std::size_t m = row.size();
        for (std::size_t s = 0; s < m; ++s) inputs[row.dst[s]] += row.weight[s];
    }
}

void accumulate_parallel(const Connectome& c, std::span<const Neuron> firing,
                         std::span<double> inputs) {
    const std::size_t n = inputs.size();
#pragma omp parallel
    {
        // Each thread owns a contiguous block of postsynaptic neurons and walks
        // the firing rows in order, so per-neuron summation order matches the
        // serial kernel.
        const auto threads = static_cast<std::size_t>(omp_get_num_threads());
        const auto tid = static_cast<std::size_t>(omp_get_thread_num());
        const std::size_t lo = n * tid / threads;
        const std::size_t hi = n * (tid + 1) / threads;
        for (Neuron i : firing) {
            const auto& row = c.row(i);
            auto first = std::lower_bound(row.dst.begin(), row.dst.end(), static_cast<Neuron>(lo));
            auto s = static_cast<std::size_t>(first - row.dst.begin());
            for (; s < row.size() && row.dst[s] < hi; ++s) inputs[row.dst[s]] += row.weight[s];
        }
    }
}

void plasticity_serial(Connectome& c, std::span<const Neuron> pre,
                       std::span<const char> post_mask, double factor) {
    for (Neuron i : pre) {
        auto& row = c.row(i);
        const std::size_t m = row.size();
        for (std::size_t s = 0; s < m; ++s)
            if (post_mask[row.dst[s]]) row.weight[s] *= factor;
    }
}

void plasticity_parallel(Connectome& c, std::span<const Neuron> pre,
                         std::span<const char> post_mask, double factor) {
    const auto count = static_cast<std::int64_t>(pre.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t x = 0; x < count; ++x) {
        auto& row = c.row(pre[static_cast<std::size_t>(x)]);
        const std::size_t m = row.size();
        for (std::size_t s = 0; s < m; ++s)
            if (post_mask[row.dst[s]]) row.weight[s] *= factor;
    }
}

Winners k_cap_serial(std::span<const double> inputs, std::size_t k) {
    std::vector<Ranked> pool;
    collect_positive(inputs, 0, inputs.size(), pool);
    keep_top(pool, k);
    return to_winners(pool);
}

Winners k_cap_parallel(std::span<const double> inputs, std::size_t k) {
    const std::size_t n = inputs.size();
    std::vector<std::vector<Ranked>> local;
#pragma omp parallel
    {
        const auto threads = static_cast<std::size_t>(omp_get_num_threads());
        const auto tid = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp single
        local.resize(threads);
        auto& mine = local[tid];
        collect_positive(inputs, n * tid / threads, n * (tid + 1) / threads, mine);
        keep_top(mine, k);
    }
    // ranks_before is a strict total order, so the merged top k is unique.
    std::vector<Ranked> pool;
    for (auto& l : local) pool.insert(pool.end(), l.begin(), l.end());
    keep_top(pool, k);
    return to_winners(pool);
}

} // namespace nemo::kernels
