#include "nemo/types.hpp"

namespace nemo {

std::string_view to_string(Backend b) {
    return b == Backend::Explicit ? "explicit" : "lazy";
}

Backend backend_from_string(std::string_view s) {
    if (s == "explicit") return Backend::Explicit;
    if (s == "lazy") return Backend::Lazy;
    throw Error("unknown backend '" + std::string(s) + "' (expected explicit|lazy)");
}

void AreaParams::validate() const {
    if (n == 0) throw Error("area " + name + ": n must be positive");
    if (k == 0 || k > n) throw Error("area " + name + ": k must satisfy 1 <= k <= n");
    if (!(p >= 0.0 && p <= 1.0)) throw Error("area " + name + ": p must lie in [0, 1]");
    if (!(beta >= 0.0)) throw Error("area " + name + ": beta must be non-negative");
}

} // namespace nemo
