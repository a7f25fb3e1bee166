// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace rnnf {

/// Deterministic random source used everywhere weights or permutations are
/// drawn. The generator is mt19937_64 (fully specified by the C++ standard)
/// and the uniform mapping below is written out by hand, so identical seeds
/// give bit-identical draws on every platform; std::uniform_real_distribution
/// carries no such guarantee.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1): top 53 bits of one generator output.
    double next_unit() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double next_uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    /// Uniform integer in [0, n). Uses rejection sampling, no modulo bias.
    std::uint64_t next_index(std::uint64_t n) {
        const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace rnnf
