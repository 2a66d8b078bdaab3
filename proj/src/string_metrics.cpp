#include "etmatch/string_metrics.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

namespace etmatch {

std::size_t levenshtein_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // single row over the shorter string
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t subst = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, subst});
      diag = up;
    }
  }
  return row[b.size()];
}

double levenshtein_sim(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(levenshtein_distance(a, b)) / static_cast<double>(longest);
}

std::size_t lcs_length(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = a[i - 1] == b[j - 1] ? diag + 1 : std::max(up, row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

double lcs_sim(std::string_view a, std::string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(lcs_length(a, b)) / static_cast<double>(total);
}

namespace {

std::set<std::string_view> grams(std::string_view s, std::size_t n) {
  std::set<std::string_view> out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) out.insert(s.substr(i, n));
  return out;
}

}  // namespace

double ngram_sim(std::string_view a, std::string_view b, int n) {
  if (n < 2) throw std::invalid_argument("ngram_sim: n must be at least 2");
  if (a == b) return 1.0;
  const auto ga = grams(a, static_cast<std::size_t>(n));
  const auto gb = grams(b, static_cast<std::size_t>(n));
  if (ga.empty() || gb.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& g : ga) shared += gb.count(g);
  return 2.0 * static_cast<double>(shared) / static_cast<double>(ga.size() + gb.size());
}

}  // namespace etmatch
