// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/refine/politeness.hpp"

#include "ultrachat/core/embedded_data.hpp"
#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/text.hpp"
#include "ultrachat/core/tokenizer.hpp"

#include <fmt/format.h>

namespace ultrachat {

namespace {

std::string normalized(std::string_view text)
{
    std::string straight;
    straight.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text.compare(i, 3, "\xE2\x80\x99") == 0) {
            straight.push_back('\'');
            i += 2;
        } else {
            straight.push_back(text[i]);
        }
    }
    return normalize_for_dedup(straight);
}

bool is_terminal(char c)
{
    return c == '.' || c == '!' || c == '?';
}

bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_word_byte(unsigned char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

std::string join(const std::vector<std::string_view>& segments, std::size_t from = 0)
{
    std::string out;
    for (std::size_t i = from; i < segments.size(); ++i) {
        out.append(segments[i]);
    }
    return std::string(trim(out));
}

} // namespace

PolitenessList PolitenessList::from_text(std::string_view text)
{
    PolitenessList list;
    std::size_t start = 0;
    std::size_t line_no = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        const auto line = trim(text.substr(start, end - start));
        start = end + 1;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto colon = line.find(':');
        const auto kind = colon == std::string_view::npos ? std::string_view{} : trim(line.substr(0, colon));
        const auto phrase = colon == std::string_view::npos ? std::string{} : normalized(line.substr(colon + 1));
        if ((kind != "user" && kind != "reply") || phrase.empty()) {
            throw ConfigError(fmt::format("politeness list line {}: expected 'user: <phrase>' or 'reply: <phrase>'", line_no));
        }
        (kind == "user" ? list.user : list.reply).push_back(phrase);
    }
    return list;
}

const PolitenessList& PolitenessList::standard()
{
    static const PolitenessList list = from_text(embedded_file("politeness.txt").value());
    return list;
}

std::vector<std::string_view> split_sentences(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_terminal(text[i])) {
            ++i;
            continue;
        }
        auto j = i + 1;
        while (j < text.size() && (is_terminal(text[j]) || text[j] == '"' || text[j] == '\'' || text[j] == ')')) {
            ++j;
        }
        if (j < text.size() && is_space(text[j])) {
            while (j < text.size() && is_space(text[j])) {
                ++j;
            }
            out.push_back(text.substr(start, j - start));
            start = j;
        }
        i = j;
    }
    if (start < text.size()) {
        out.push_back(text.substr(start));
    }
    return out;
}

bool starts_with_phrase(std::string_view sentence, const std::vector<std::string>& phrases)
{
    const auto norm = normalized(sentence);
    for (const auto& phrase : phrases) {
        if (norm.compare(0, phrase.size(), phrase) == 0 &&
            (norm.size() == phrase.size() || !is_word_byte(static_cast<unsigned char>(norm[phrase.size()])))) {
            return true;
        }
    }
    return false;
}

PolitenessResult strip_politeness(const Dialogue& dialogue, const PolitenessList& list, const Tokenizer& tokenizer)
{
    PolitenessResult result;
    auto turns = dialogue.turns;
    std::vector<bool> edited(turns.size(), false);
    for (std::size_t i = 1; i < turns.size(); ++i) {
        auto& turn = turns[i];
        if (turn.role == Role::user) {
            const auto segments = split_sentences(turn.content);
            std::vector<std::string_view> kept;
            for (const auto segment : segments) {
                if (starts_with_phrase(segment, list.user)) {
                    ++result.sentences_removed;
                } else {
                    kept.push_back(segment);
                }
            }
            if (kept.size() != segments.size()) {
                turn.content = join(kept);
                edited[i] = true;
            }
        } else if (edited[i - 1] && turns[i - 1].role == Role::user) {
            const auto segments = split_sentences(turn.content);
            std::size_t skip = 0;
            while (skip < segments.size() && starts_with_phrase(segments[skip], list.reply)) {
                ++skip;
            }
            if (skip > 0) {
                result.sentences_removed += skip;
                turn.content = join(segments, skip);
                edited[i] = true;
            }
        }
    }

    result.dialogue = dialogue;
    if (result.sentences_removed == 0) {
        return result;
    }
    std::vector<Turn> rebuilt;
    for (std::size_t i = 0; i < turns.size(); i += 2) {
        const bool user_empty = trim(turns[i].content).empty();
        const bool reply_empty = i + 1 < turns.size() && trim(turns[i + 1].content).empty();
        if (user_empty || reply_empty) {
            ++result.rounds_removed;
            continue;
        }
        for (std::size_t j = i; j < std::min(i + 2, turns.size()); ++j) {
            rebuilt.push_back(edited[j] ? make_turn(turns[j].role, turns[j].content, tokenizer) : turns[j]);
        }
    }
    result.dialogue.turns = std::move(rebuilt);
    return result;
}

PolitenessResult strip_politeness(const Dialogue& dialogue)
{
    return strip_politeness(dialogue, PolitenessList::standard(), default_tokenizer());
}

} // namespace ultrachat
