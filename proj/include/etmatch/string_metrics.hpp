#pragma once

#include <cstddef>
#include <string_view>

namespace etmatch {

/// Unit-cost edit distance over bytes.
[[nodiscard]] std::size_t levenshtein_distance(std::string_view a, std::string_view b);

/// 1 - d(a,b) / max(|a|,|b|); 1 when both are empty.
[[nodiscard]] double levenshtein_sim(std::string_view a, std::string_view b);

[[nodiscard]] std::size_t lcs_length(std::string_view a, std::string_view b);

/// 2 |LCS(a,b)| / (|a| + |b|); 1 when both are empty.
[[nodiscard]] double lcs_sim(std::string_view a, std::string_view b);

/// Dice coefficient over the sets of character n-grams (no padding).
/// Equal strings score 1, including strings shorter than n; otherwise an
/// empty gram set on either side scores 0.
[[nodiscard]] double ngram_sim(std::string_view a, std::string_view b, int n = 2);

}  // namespace etmatch
