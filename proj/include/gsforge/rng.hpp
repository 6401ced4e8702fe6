// Copyright Contributors to the GSForge Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace gsforge {

// splitmix64 finalizer. Integer-only, identical on every platform.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so parallel workers can own disjoint streams
// and reruns are bit-identical regardless of scheduling.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : base_(splitmix64(splitmix64(seed) ^ (0x6a09e667f3bcc909ull + splitmix64(stream)))) {}

    std::uint64_t next_u64() { return splitmix64(base_ + 0x9e3779b97f4a7c15ull * counter_++); }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    // [0, n); slight modulo-free bias of n/2^64, irrelevant at our scales.
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Box-Muller, consumes exactly two draws.
    double normal() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

} // namespace gsforge
