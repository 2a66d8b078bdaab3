#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "etmatch/error.hpp"
#include "etmatch/matcher.hpp"
#include "helpers.hpp"

using namespace etmatch;
using testing::make_graph;

namespace {

std::vector<LabeledExample> counts(std::size_t p, std::size_t n) {
  std::vector<LabeledExample> out;
  for (std::size_t i = 0; i < p + n; ++i) {
    LabeledExample e;
    e.features.pair = {"s" + std::to_string(i), "t"};
    e.features.values[0] = static_cast<double>(i);
    e.label = i < p ? 1 : 0;
    out.push_back(e);
  }
  return out;
}

std::multiset<std::string> ids(std::span<const LabeledExample> xs) {
  std::multiset<std::string> out;
  for (const auto& e : xs) out.insert(e.features.pair.left);
  return out;
}

}  // namespace

TEST_CASE("generate_candidates is the lexicographic product") {
  const auto a = make_graph("A", {}, {{"c", {}, {}}, {"a", {}, {}}, {"b", {}, {}}});
  const auto b = make_graph("B", {}, {{"a", {}, {}}, {"w", {}, {}}, {"x", {}, {}}, {"y", {}, {}}});
  const auto pairs = generate_candidates(a, b);
  CHECK(pairs.size() == 12);
  CHECK(std::is_sorted(pairs.begin(), pairs.end()));
  CHECK(std::count(pairs.begin(), pairs.end(), CandidatePair{"a", "a"}) == 1);
  CHECK(generate_candidates(make_graph("E", {}, {}), b).empty());
}

TEST_CASE("balance 10/90 gives 20/20, reproducibly") {
  const auto data = counts(10, 90);
  const auto out = balance(data, 2.0, 7);
  CHECK(out.size() == 40);
  CHECK(std::count_if(out.begin(), out.end(), [](const auto& e) { return e.label == 1; }) == 20);
  const auto again = balance(data, 2.0, 7);
  REQUIRE(again.size() == out.size());
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(again[i].features.pair == out[i].features.pair);
  // every positive appears exactly twice; negatives are distinct
  std::map<std::string, int> seen;
  for (const auto& e : out) ++seen[e.features.pair.left];
  for (const auto& [id, c] : seen) CHECK(c == (std::stoi(id.substr(1)) < 10 ? 2 : 1));
  CHECK(ids(balance(data, 2.0, 8)) != ids(out));
}

TEST_CASE("balance leaves a balanced set's counts unchanged") {
  const auto out = balance(counts(50, 50), 2.0, 1);
  CHECK(out.size() == 100);
  CHECK(ids(out) == ids(counts(50, 50)));
}

TEST_CASE("balance with more positives than the cap") {
  // P = 30, N = 10: N' = 10, positives cycle up to 10
  const auto out = balance(counts(30, 10), 2.0, 1);
  CHECK(out.size() == 20);
  CHECK(std::count_if(out.begin(), out.end(), [](const auto& e) { return e.label == 1; }) == 10);
}

TEST_CASE("balance rejects single-class input") {
  try {
    (void)balance(counts(0, 5), 2.0, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::training_data);
  }
}

TEST_CASE("greedy extraction example") {
  const std::vector<ScoredPair> scored{{{"a", "x"}, 0.9, 1}, {{"a", "y"}, 0.8, 1}, {{"b", "y"}, 0.7, 1}};
  const auto greedy = extract_alignment(scored, ExtractionPolicy::greedy_one_to_one, 0.5);
  REQUIRE(greedy.entries.size() == 2);
  CHECK(greedy.entries[0].pair == CandidatePair{"a", "x"});
  CHECK(greedy.entries[1].pair == CandidatePair{"b", "y"});
  CHECK(extract_alignment(scored, ExtractionPolicy::all_positive, 0.5).entries.size() == 3);
  CHECK(extract_alignment(scored, ExtractionPolicy::all_positive, 0.95).entries.empty());
}

TEST_CASE("greedy extraction yields a partial matching") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ScoredPair> scored;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        const double s = std::round(rng.uniform() * 10.0) / 10.0;
        scored.push_back({{"a" + std::to_string(i), "b" + std::to_string(j)}, s, s >= 0.5 ? 1 : 0});
      }
    }
    const auto al = extract_alignment(scored, ExtractionPolicy::greedy_one_to_one, 0.5);
    std::set<std::string> left, right;
    for (const auto& e : al.entries) {
      CHECK(left.insert(e.pair.left).second);
      CHECK(right.insert(e.pair.right).second);
      CHECK(e.score >= 0.5);
    }
    const auto all = extract_alignment(scored, ExtractionPolicy::all_positive, 0.5);
    CHECK(all.entries.size() ==
          static_cast<std::size_t>(std::count_if(scored.begin(), scored.end(), [](auto& s) { return s.decision; })));
  }
}

TEST_CASE("policy names") {
  CHECK(parse_policy("all") == ExtractionPolicy::all_positive);
  CHECK(parse_policy("greedy-1to1") == ExtractionPolicy::greedy_one_to_one);
  CHECK(!parse_policy("best"));
}
