#include "etmatch/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "etmatch/error.hpp"
#include "etmatch/rng.hpp"

namespace etmatch {

std::vector<CandidatePair> generate_candidates(const EtypeGraph& source, const EtypeGraph& target) {
  std::vector<CandidatePair> out;
  out.reserve(source.etypes().size() * target.etypes().size());
  // etypes() is already id-sorted
  for (const auto& a : source.etypes()) {
    for (const auto& b : target.etypes()) out.push_back({a.id, b.id});
  }
  return out;
}

std::vector<LabeledExample> balance(std::span<const LabeledExample> examples, double neg_cap_ratio,
                                    std::uint64_t seed) {
  if (!(neg_cap_ratio > 0.0)) throw std::invalid_argument("balance: ratio must be positive");
  std::vector<const LabeledExample*> pos;
  std::vector<const LabeledExample*> neg;
  for (const auto& e : examples) (e.label == 1 ? pos : neg).push_back(&e);
  if (pos.empty() || neg.empty()) {
    throw Error(ErrorKind::training_data, "cannot balance: " + std::to_string(pos.size()) +
                                              " positive and " + std::to_string(neg.size()) +
                                              " negative examples");
  }

  Rng rng(seed, "balance");
  const auto cap = static_cast<std::size_t>(std::ceil(neg_cap_ratio * static_cast<double>(pos.size())));
  const std::size_t n_keep = std::min(neg.size(), cap);
  // partial Fisher-Yates: the first n_keep slots become the sample
  for (std::size_t i = 0; i < n_keep; ++i) {
    std::swap(neg[i], neg[i + rng.below(neg.size() - i)]);
  }
  rng.shuffle(std::span(pos));

  std::vector<LabeledExample> out;
  out.reserve(2 * n_keep);
  for (std::size_t i = 0; i < n_keep; ++i) out.push_back(*neg[i]);
  for (std::size_t i = 0; i < n_keep; ++i) out.push_back(*pos[i % pos.size()]);
  rng.shuffle(std::span(out));
  return out;
}

std::string_view policy_name(ExtractionPolicy policy) {
  return policy == ExtractionPolicy::all_positive ? "all_positive" : "greedy_one_to_one";
}

std::optional<ExtractionPolicy> parse_policy(std::string_view name) {
  if (name == "all" || name == "all_positive") return ExtractionPolicy::all_positive;
  if (name == "greedy-1to1" || name == "greedy_one_to_one") return ExtractionPolicy::greedy_one_to_one;
  return std::nullopt;
}

Alignment extract_alignment(std::span<const ScoredPair> predictions, ExtractionPolicy policy,
                            double threshold) {
  std::vector<ScoredPair> ranked;
  for (const auto& p : predictions) {
    if (p.score >= threshold) ranked.push_back({p.pair, p.score, 1});
  }
  std::sort(ranked.begin(), ranked.end(), [](const ScoredPair& a, const ScoredPair& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.pair < b.pair;
  });
  std::set<CandidatePair> seen;
  std::erase_if(ranked, [&seen](const ScoredPair& p) { return !seen.insert(p.pair).second; });

  Alignment out;
  if (policy == ExtractionPolicy::all_positive) {
    out.entries = std::move(ranked);
    return out;
  }
  std::set<std::string_view> used_left;
  std::set<std::string_view> used_right;
  for (const auto& p : ranked) {
    if (used_left.count(p.pair.left) || used_right.count(p.pair.right)) continue;
    used_left.insert(p.pair.left);
    used_right.insert(p.pair.right);
    out.entries.push_back(p);
  }
  return out;
}

}  // namespace etmatch
