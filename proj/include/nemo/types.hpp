#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nemo {

using Neuron = std::uint32_t;
using AreaId = std::size_t;

// Sorted ascending, no duplicates.
using Winners = std::vector<Neuron>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Backend { Explicit, Lazy };

enum class KernelMode { Serial, Parallel };

std::string_view to_string(Backend b);
Backend backend_from_string(std::string_view s);

struct AreaParams {
    std::string name;
    std::size_t n = 0;
    std::size_t k = 0;
    double beta = 0.0;
    double p = 0.0;

    void validate() const;
};

} // namespace nemo
