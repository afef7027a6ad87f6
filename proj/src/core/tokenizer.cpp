// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/core/tokenizer.hpp"

#include "ultrachat/core/errors.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <fmt/format.h>

namespace ultrachat {

namespace {

template <typename SplitPunctuation>
std::vector<std::string> split(std::string_view text, SplitPunctuation split_punctuation)
{
    std::vector<std::string> tokens;
    std::string current;
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < length) {
        const int32_t start = i;
        UChar32 c = 0;
        U8_NEXT(bytes, i, length, c);
        const auto piece = text.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(i - start));
        if (c >= 0 && u_isUWhiteSpace(c)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
        } else if (c >= 0 && split_punctuation(c)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
            tokens.emplace_back(piece);
        } else {
            current.append(piece);
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

} // namespace

std::vector<std::string> UnicodeWordTokenizer::tokenize(std::string_view text) const
{
    return split(text, [](UChar32 c) { return u_ispunct(c) != 0; });
}

std::vector<std::string> WhitespaceTokenizer::tokenize(std::string_view text) const
{
    return split(text, [](UChar32) { return false; });
}

const Tokenizer& default_tokenizer()
{
    static const UnicodeWordTokenizer tokenizer;
    return tokenizer;
}

const Tokenizer& tokenizer_by_name(std::string_view name)
{
    static const WhitespaceTokenizer whitespace;
    if (name == default_tokenizer().name()) {
        return default_tokenizer();
    }
    if (name == whitespace.name()) {
        return whitespace;
    }
    throw ConfigError(fmt::format("unknown tokenizer '{}' (expected unicode-words or whitespace)", name));
}

} // namespace ultrachat
