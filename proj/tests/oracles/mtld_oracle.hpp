// SPDX-License-Identifier: Apache-2.0
// Brute-force MTLD from the factor definition: the distinct count of the
// current segment is recomputed from scratch at every token.
#pragma once

#include <set>
#include <string>
#include <vector>

namespace ultrachat::oracle {

inline double segment_ratio(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end)
{
    std::set<std::string> types(tokens.begin() + static_cast<std::ptrdiff_t>(begin),
                                tokens.begin() + static_cast<std::ptrdiff_t>(end));
    return static_cast<double>(types.size()) / static_cast<double>(end - begin);
}

inline double mtld_direction(const std::vector<std::string>& tokens, double threshold)
{
    double factors = 0.0;
    std::size_t begin = 0;
    for (std::size_t end = 1; end <= tokens.size(); ++end) {
        if (segment_ratio(tokens, begin, end) <= threshold) {
            factors += 1.0;
            begin = end;
        }
    }
    if (begin < tokens.size()) {
        factors += (1.0 - segment_ratio(tokens, begin, tokens.size())) / (1.0 - threshold);
    }
    if (factors == 0.0) {
        return static_cast<double>(tokens.size());
    }
    return static_cast<double>(tokens.size()) / factors;
}

/// Tokens must already be casefolded.
inline double mtld(const std::vector<std::string>& tokens, double threshold = 0.72)
{
    const std::vector<std::string> reversed(tokens.rbegin(), tokens.rend());
    return (mtld_direction(tokens, threshold) + mtld_direction(reversed, threshold)) / 2.0;
}

} // namespace ultrachat::oracle
