// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ultrachat {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation's documented precondition.
class PreconditionError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A required input file is missing or unreadable.
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string reason);

    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

/// A backend call failed. `attempts` counts transport attempts made before giving up.
class BackendError : public Error {
public:
    BackendError(const std::string& message, int attempts, bool retryable = false);

    int attempts() const noexcept { return attempts_; }
    bool retryable() const noexcept { return retryable_; }

private:
    int attempts_;
    bool retryable_;
};

/// Generation stopped short of the requested count after exhausting its retry cap.
class PartialResultError : public Error {
public:
    PartialResultError(const std::string& what, std::size_t requested, std::vector<std::string> partial);

    std::size_t requested() const noexcept { return requested_; }
    std::size_t shortfall() const noexcept { return requested_ - partial_.size(); }
    const std::vector<std::string>& partial() const noexcept { return partial_; }

private:
    std::size_t requested_;
    std::vector<std::string> partial_;
};

} // namespace ultrachat
