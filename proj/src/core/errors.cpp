// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/core/errors.hpp"

#include <fmt/format.h>

namespace ultrachat {

ParseError::ParseError(std::size_t line, std::string reason)
    : Error(fmt::format("parse error at line {}: {}", line, reason)), line_(line), reason_(std::move(reason))
{
}

BackendError::BackendError(const std::string& message, int attempts, bool retryable)
    : Error(message), attempts_(attempts), retryable_(retryable)
{
}

PartialResultError::PartialResultError(const std::string& what, std::size_t requested, std::vector<std::string> partial)
    : Error(fmt::format("{}: produced {} of {} requested items (shortfall {})", what, partial.size(), requested,
                        requested - partial.size())),
      requested_(requested), partial_(std::move(partial))
{
}

} // namespace ultrachat
