#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace etmatch {

/// Canonical label form used by every metric: camelCase and snake_case are
/// split into words, ASCII letters lowercased, any other ASCII punctuation
/// becomes a word break, and whitespace is collapsed to single spaces.
/// Non-ASCII bytes pass through unchanged.
[[nodiscard]] std::string normalize_label(std::string_view raw);

/// Space-separated tokens of an already normalized label.
[[nodiscard]] std::vector<std::string> tokens(std::string_view normalized);

}  // namespace etmatch
