// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace ultrachat {

/// Seeded generator with platform-independent derived draws. The standard
/// distributions are implementation-defined, so bounded and real draws are
/// computed here directly from the engine output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). `bound` must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform real in [0, 1).
    double uniform();

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[below(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// Splits a root seed into an independent stream for (stream, key), so
/// per-record randomness does not depend on processing order.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::string_view key = {});

} // namespace ultrachat
