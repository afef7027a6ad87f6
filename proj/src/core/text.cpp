// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/core/text.hpp"

#include "ultrachat/core/tokenizer.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>
#include <stdexcept>

namespace ultrachat {

namespace {

icu::UnicodeString to_unicode(std::string_view text)
{
    return icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

std::string to_utf8(const icu::UnicodeString& text)
{
    std::string out;
    text.toUTF8String(out);
    return out;
}

// Stopwords used only for the content-word overlap test on generated questions.
constexpr std::array kStopwords = {
    "a",     "about", "an",    "and",   "are",  "as",    "at",    "be",    "by",    "can",  "could", "did",
    "do",    "does",  "for",   "from",  "has",  "have",  "how",   "in",    "is",    "it",   "its",   "of",
    "on",    "or",    "some",  "that",  "the",  "their", "them",  "there", "these", "they", "this",  "to",
    "was",   "were",  "what",  "when",  "where", "which", "who",  "whom",  "why",   "will", "with",  "would",
    "you",   "your",  "i",     "me",    "my",   "we",    "our",   "more",  "most",  "other", "into", "than",
};

bool is_stopword(std::string_view word)
{
    return std::find(kStopwords.begin(), kStopwords.end(), word) != kStopwords.end();
}

} // namespace

std::string_view trim(std::string_view text)
{
    // ASCII whitespace plus UTF-8 encoded NBSP; full Unicode trimming lives in collapse_whitespace.
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    while (!text.empty() && is_space(text.front())) {
        text.remove_prefix(1);
    }
    while (!text.empty() && is_space(text.back())) {
        text.remove_suffix(1);
    }
    return text;
}

std::string nfc(std::string_view text)
{
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
        throw std::runtime_error("ICU NFC normalizer unavailable");
    }
    icu::UnicodeString normalized = normalizer->normalize(to_unicode(text), status);
    if (U_FAILURE(status)) {
        throw std::runtime_error("NFC normalization failed");
    }
    return to_utf8(normalized);
}

std::string casefold(std::string_view text)
{
    icu::UnicodeString value = to_unicode(text);
    value.foldCase();
    return to_utf8(value);
}

std::string collapse_whitespace(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    int32_t i = 0;
    const auto length = static_cast<int32_t>(text.size());
    const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
    while (i < length) {
        const int32_t start = i;
        UChar32 c = 0;
        U8_NEXT(bytes, i, length, c);
        if (c >= 0 && u_isUWhiteSpace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.append(text.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(i - start)));
    }
    return out;
}

std::string normalize_for_dedup(std::string_view text)
{
    std::string value = collapse_whitespace(casefold(nfc(text)));
    // Strip trailing punctuation and any whitespace it exposes.
    while (!value.empty()) {
        int32_t end = static_cast<int32_t>(value.size());
        UChar32 c = 0;
        U8_PREV(reinterpret_cast<const uint8_t*>(value.data()), 0, end, c);
        if (c >= 0 && (u_ispunct(c) || u_isUWhiteSpace(c))) {
            value.resize(static_cast<std::size_t>(end));
        } else {
            break;
        }
    }
    return value;
}

std::vector<std::string> content_words(std::string_view text)
{
    std::vector<std::string> words;
    for (auto& token : default_tokenizer().tokenize(casefold(nfc(text)))) {
        int32_t i = 0;
        UChar32 c = 0;
        U8_NEXT(reinterpret_cast<const uint8_t*>(token.data()), i, static_cast<int32_t>(token.size()), c);
        const bool punctuation = c >= 0 && (u_ispunct(c) || u_hasBinaryProperty(c, UCHAR_S_TERM));
        if (punctuation || token.size() < 2 || is_stopword(token)) {
            continue;
        }
        words.push_back(std::move(token));
    }
    return words;
}

bool is_valid_utf8(std::string_view text)
{
    int32_t i = 0;
    const auto length = static_cast<int32_t>(text.size());
    while (i < length) {
        UChar32 c = 0;
        U8_NEXT(reinterpret_cast<const uint8_t*>(text.data()), i, length, c);
        if (c < 0) {
            return false;
        }
    }
    return true;
}

std::string ascii_lower(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    });
    return out;
}

} // namespace ultrachat
