// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace ultrachat {

std::string sha256_hex(std::string_view data);

/// First 64 bits of the SHA-256 digest, big-endian.
std::uint64_t hash64(std::string_view data);

/// Content address: `prefix` followed by 16 hex digits of the SHA-256 of the
/// unit-separator-joined parts.
std::string content_id(std::string_view prefix, std::initializer_list<std::string_view> parts);

} // namespace ultrachat
