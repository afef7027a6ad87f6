// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ultrachat {

std::string_view trim(std::string_view text);

/// Unicode NFC composition.
std::string nfc(std::string_view text);

/// Full Unicode case folding.
std::string casefold(std::string_view text);

/// Replaces every run of Unicode whitespace with one ASCII space and trims.
std::string collapse_whitespace(std::string_view text);

/// Dedup key: NFC, casefold, collapsed whitespace, trailing punctuation removed.
std::string normalize_for_dedup(std::string_view text);

/// Casefolded word tokens with stopwords, punctuation, and one-letter words removed.
std::vector<std::string> content_words(std::string_view text);

bool is_valid_utf8(std::string_view text);

/// Lowercases ASCII letters only; other bytes pass through.
std::string ascii_lower(std::string_view text);

} // namespace ultrachat
