// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

namespace ultrachat {

/// Contents of a file from the repository's data/ directory, compiled in at build time.
std::optional<std::string_view> embedded_file(std::string_view name);

} // namespace ultrachat
