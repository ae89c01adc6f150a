#pragma once

#include <cstdint>

#include "rmrcpsp/instance.hpp"

namespace rmrcpsp {

/// Deterministic cross-platform generator (xorshift-based, seed-stable) for
/// synthetic instances. Every instance it returns passes validate().
class InstanceGen {
public:
    explicit InstanceGen(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    /// Tiny instance for oracle batteries: n activities, at most max_modes
    /// modes, 1-2 renewable plus one non-renewable resource.
    Instance tiny(int n, int max_modes);

    /// PSPLIB-shaped instance: 3 modes per activity, 2 renewable and 2
    /// non-renewable resources, layered precedence network.
    Instance psplib_style(int n);

    std::uint64_t raw();
    /// Uniform integer in [lo, hi].
    int range(int lo, int hi);

private:
    std::uint64_t state_;
};

} // namespace rmrcpsp
