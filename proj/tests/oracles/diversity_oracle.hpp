// SPDX-License-Identifier: Apache-2.0
// Brute-force topic diversity: every unordered pair visited by a plain double
// loop, distances written out from the cosine formula.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace ultrachat::oracle {

inline double mean_cosine_distance(const std::vector<std::vector<double>>& vectors)
{
    double total = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < vectors.size(); ++j) {
            double dot = 0.0;
            double ii = 0.0;
            double jj = 0.0;
            for (std::size_t k = 0; k < vectors[i].size(); ++k) {
                dot += vectors[i][k] * vectors[j][k];
                ii += vectors[i][k] * vectors[i][k];
                jj += vectors[j][k] * vectors[j][k];
            }
            total += 1.0 - dot / std::sqrt(ii * jj);
            pairs += 1.0;
        }
    }
    return std::clamp(total / pairs, 0.0, 2.0);
}

} // namespace ultrachat::oracle
