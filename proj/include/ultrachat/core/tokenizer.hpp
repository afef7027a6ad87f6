// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat {

class Tokenizer {
public:
    virtual ~Tokenizer() = default;

    virtual std::string_view name() const = 0;
    virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
    virtual std::size_t count(std::string_view text) const { return tokenize(text).size(); }
};

/// Splits on Unicode whitespace; every punctuation code point becomes its own token.
class UnicodeWordTokenizer final : public Tokenizer {
public:
    std::string_view name() const override { return "unicode-words"; }
    std::vector<std::string> tokenize(std::string_view text) const override;
};

/// Splits on Unicode whitespace only.
class WhitespaceTokenizer final : public Tokenizer {
public:
    std::string_view name() const override { return "whitespace"; }
    std::vector<std::string> tokenize(std::string_view text) const override;
};

const Tokenizer& default_tokenizer();

/// Looks up a tokenizer by name ("unicode-words" or "whitespace").
const Tokenizer& tokenizer_by_name(std::string_view name);

} // namespace ultrachat
