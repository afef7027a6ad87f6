// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/core/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace ultrachat {

namespace {

std::array<unsigned char, 32> sha256(std::string_view data)
{
    std::array<unsigned char, 32> digest{};
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1 || length != 32) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    return digest;
}

} // namespace

std::string sha256_hex(std::string_view data)
{
    static constexpr char kHex[] = "0123456789abcdef";
    const auto digest = sha256(data);
    std::string out;
    out.reserve(64);
    for (unsigned char byte : digest) {
        out.push_back(kHex[byte >> 4]);
        out.push_back(kHex[byte & 0x0f]);
    }
    return out;
}

std::uint64_t hash64(std::string_view data)
{
    const auto digest = sha256(data);
    std::uint64_t value = 0;
    for (int i = 0; i < 8; ++i) {
        value = (value << 8) | digest[static_cast<std::size_t>(i)];
    }
    return value;
}

std::string content_id(std::string_view prefix, std::initializer_list<std::string_view> parts)
{
    std::string joined;
    bool first = true;
    for (auto part : parts) {
        if (!first) {
            joined.push_back('\x1f');
        }
        first = false;
        joined.append(part);
    }
    return std::string(prefix) + sha256_hex(joined).substr(0, 16);
}

} // namespace ultrachat
