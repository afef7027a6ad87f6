// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/core/rng.hpp"

#include "ultrachat/core/hash.hpp"

#include <string>

namespace ultrachat {

std::uint64_t Rng::below(std::uint64_t bound)
{
    // Rejection sampling on the top of the range keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t value = engine_();
    while (value >= limit) {
        value = engine_();
    }
    return value % bound;
}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::string_view key)
{
    std::string material = std::to_string(root);
    material.push_back('\x1f');
    material.append(stream);
    material.push_back('\x1f');
    material.append(key);
    return hash64(material);
}

} // namespace ultrachat
