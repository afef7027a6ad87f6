// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat {

/// Flags simulated user turns that read like the assistant talking.
class RoleExchangeDetector {
public:
    /// One case-insensitive ECMAScript pattern per line; '#' lines and blanks
    /// are skipped. Throws ConfigError on an invalid pattern.
    static RoleExchangeDetector from_patterns(std::string_view text);
    static const RoleExchangeDetector& standard();

    bool matches(std::string_view text) const;
    std::size_t size() const { return patterns_.size(); }

private:
    std::vector<std::regex> patterns_;
};

/// Uses the shipped pattern list.
bool detect_role_exchange(std::string_view user_turn_text);

} // namespace ultrachat
