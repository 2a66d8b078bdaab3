#pragma once

// Exponential-time reference implementations. They share no code with the
// library and exist only to check it.

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <vector>
#include <string_view>

namespace oracle {

// Textbook recursive edit distance.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  const std::size_t cost = a.back() == b.back() ? 0 : 1;
  const auto a1 = a.substr(0, a.size() - 1);
  const auto b1 = b.substr(0, b.size() - 1);
  return std::min({levenshtein(a1, b) + 1, levenshtein(a, b1) + 1, levenshtein(a1, b1) + cost});
}

inline std::set<std::string> subsequences(std::string_view s) {
  std::set<std::string> out;
  const std::size_t n = s.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::string sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) sub.push_back(s[i]);
    }
    out.insert(std::move(sub));
  }
  return out;
}

// Longest string that is a subsequence of both, by full enumeration.
inline std::size_t lcs(std::string_view a, std::string_view b) {
  const auto sa = subsequences(a);
  const auto sb = subsequences(b);
  std::size_t best = 0;
  for (const auto& s : sa) {
    if (s.size() > best && sb.count(s)) best = s.size();
  }
  return best;
}

// All strings over `alphabet` of length <= max_len.
inline std::vector<std::string> all_strings(std::string_view alphabet, std::size_t max_len) {
  std::vector<std::string> out{""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : alphabet) out.push_back(out[i] + c);
    }
    begin = end;
  }
  return out;
}

}  // namespace oracle
