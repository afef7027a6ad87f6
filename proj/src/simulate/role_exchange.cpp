// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/simulate/role_exchange.hpp"

#include "ultrachat/core/embedded_data.hpp"
#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>

namespace ultrachat {

namespace {

/// Curly apostrophes become straight ones so "I’m" matches "i'm".
std::string straighten(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text.compare(i, 3, "\xE2\x80\x99") == 0) {
            out.push_back('\'');
            i += 2;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

} // namespace

RoleExchangeDetector RoleExchangeDetector::from_patterns(std::string_view text)
{
    RoleExchangeDetector detector;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        try {
            detector.patterns_.emplace_back(std::string(line), std::regex::ECMAScript | std::regex::icase);
        } catch (const std::regex_error& error) {
            throw ConfigError(fmt::format("invalid role-exchange pattern '{}': {}", line, error.what()));
        }
    }
    return detector;
}

const RoleExchangeDetector& RoleExchangeDetector::standard()
{
    static const RoleExchangeDetector detector = from_patterns(embedded_file("role_exchange_patterns.txt").value());
    return detector;
}

bool RoleExchangeDetector::matches(std::string_view text) const
{
    const auto subject = straighten(text);
    for (const auto& pattern : patterns_) {
        if (std::regex_search(subject, pattern)) {
            return true;
        }
    }
    return false;
}

bool detect_role_exchange(std::string_view user_turn_text)
{
    return RoleExchangeDetector::standard().matches(user_turn_text);
}

} // namespace ultrachat
