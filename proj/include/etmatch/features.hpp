#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etmatch/etype_graph.hpp"
#include "etmatch/language_metrics.hpp"
#include "etmatch/property_metrics.hpp"

namespace etmatch {

/// Position of each similarity in a FeatureVector. The order is part of the
/// model file contract.
enum class Feature : std::size_t { ngram, lcs, levenshtein, wupalmer, embedding, es_h, es_v };

inline constexpr std::size_t kFeatureCount = 7;

[[nodiscard]] std::string_view feature_name(Feature f);
[[nodiscard]] std::optional<Feature> parse_feature(std::string_view name);
/// The canonical names, in vector order.
[[nodiscard]] std::vector<std::string> feature_order();

/// Subset of features a model is trained on. Masked features stay in the
/// vector as 0 and are dropped from the trained dimensionality.
class FeatureMask {
 public:
  FeatureMask() = default;
  explicit FeatureMask(std::initializer_list<Feature> features);

  [[nodiscard]] static FeatureMask all();
  /// String- and language-based features only.
  [[nodiscard]] static FeatureMask backbone();
  /// Comma-separated feature names; "all" and "backbone" are accepted too.
  /// Throws std::invalid_argument on unknown names.
  [[nodiscard]] static FeatureMask parse(std::string_view spec);

  [[nodiscard]] bool contains(Feature f) const { return on_[static_cast<std::size_t>(f)]; }
  [[nodiscard]] bool empty() const;
  [[nodiscard]] std::vector<std::size_t> active_indices() const;
  [[nodiscard]] std::vector<std::string> names() const;
  FeatureMask& add(Feature f);

  friend bool operator==(const FeatureMask&, const FeatureMask&) = default;

 private:
  std::array<bool, kFeatureCount> on_{};
};

struct CandidatePair {
  std::string left;   // etype id in the source graph
  std::string right;  // etype id in the target graph

  friend auto operator<=>(const CandidatePair&, const CandidatePair&) = default;
};

struct FeatureVector {
  CandidatePair pair;
  std::array<double, kFeatureCount> values{};

  [[nodiscard]] double operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }
};

struct FeatureConfig {
  int ngram_n = 2;
  double lambda = 0.1;
  double property_match_threshold = kDefaultPropertyMatchThreshold;
  bool include_inherited = true;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

/// A graph and its statistics, built once per matching task.
class GraphContext {
 public:
  GraphContext(EtypeGraph graph, bool include_inherited);

  [[nodiscard]] const EtypeGraph& graph() const noexcept { return graph_; }
  [[nodiscard]] const GraphStats& stats() const noexcept { return stats_; }
  [[nodiscard]] PropertyScope scope() const noexcept { return {graph_, stats_}; }

 private:
  EtypeGraph graph_;
  GraphStats stats_;
};

/// Optional language resources; absent ones fall back to the out-of-vocabulary
/// values (Wu-Palmer 0, embedding 0.5).
struct Resources {
  const Taxonomy* taxonomy = nullptr;
  const EmbeddingTable* embeddings = nullptr;
};

struct EsNormalization {
  NormalizationStats es_h;
  NormalizationStats es_v;

  friend bool operator==(const EsNormalization&, const EsNormalization&) = default;
};

/// All seven similarities with ES_h / ES_v still raw.
[[nodiscard]] FeatureVector featurize_raw(const CandidatePair& pair, const GraphContext& source,
                                          const GraphContext& target, const Resources& resources,
                                          const FeatureConfig& config);

/// Batch version; `workers` > 1 splits the pairs over threads. Output order
/// follows `pairs` regardless of the worker count.
[[nodiscard]] std::vector<FeatureVector> featurize_raw(std::span<const CandidatePair> pairs,
                                                       const GraphContext& source,
                                                       const GraphContext& target,
                                                       const Resources& resources,
                                                       const FeatureConfig& config, int workers = 1);

/// Fits ES_h and ES_v normalization separately over a raw population.
[[nodiscard]] EsNormalization fit_es_normalization(std::span<const FeatureVector> raw,
                                                   const std::string& scope);

void apply_es_normalization(std::span<FeatureVector> vectors, const EsNormalization& norm);

/// Sets masked-out positions to 0.
void apply_mask(std::span<FeatureVector> vectors, const FeatureMask& mask);

/// Fully normalized feature vector for one pair.
[[nodiscard]] FeatureVector featurize(const CandidatePair& pair, const GraphContext& source,
                                      const GraphContext& target, const Resources& resources,
                                      const FeatureConfig& config, const EsNormalization& norm,
                                      const FeatureMask& mask = FeatureMask::all());

}  // namespace etmatch
