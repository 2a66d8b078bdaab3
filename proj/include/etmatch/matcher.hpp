#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etmatch/classifier.hpp"
#include "etmatch/etype_graph.hpp"
#include "etmatch/features.hpp"

namespace etmatch {

/// Full Cartesian product source x target, lexicographic by (left, right).
[[nodiscard]] std::vector<CandidatePair> generate_candidates(const EtypeGraph& source,
                                                             const EtypeGraph& target);

inline constexpr double kDefaultNegCapRatio = 2.0;

/// Balances a training set to exactly 1:1. Negatives are sampled without
/// replacement down to N' = min(N, ceil(ratio * P)); positives (in a seeded
/// random order) are repeated cyclically up to N'. The result is shuffled.
/// Throws Error(training_data) if either class is absent.
[[nodiscard]] std::vector<LabeledExample> balance(std::span<const LabeledExample> examples,
                                                  double neg_cap_ratio, std::uint64_t seed);

struct ScoredPair {
  CandidatePair pair;
  double score = 0.0;
  int decision = 0;
};

struct Alignment {
  std::vector<ScoredPair> entries;
};

enum class ExtractionPolicy { all_positive, greedy_one_to_one };

[[nodiscard]] std::string_view policy_name(ExtractionPolicy policy);
/// Accepts "all", "all_positive", "greedy-1to1" and "greedy_one_to_one".
[[nodiscard]] std::optional<ExtractionPolicy> parse_policy(std::string_view name);

/// Keeps the pairs scoring at least `threshold`; the greedy policy also
/// walks pairs by descending score (ties by pair order) and drops any pair
/// whose left or right id is already taken. Entries come back sorted by
/// score descending, then pair.
[[nodiscard]] Alignment extract_alignment(std::span<const ScoredPair> predictions,
                                          ExtractionPolicy policy, double threshold);

}  // namespace etmatch
