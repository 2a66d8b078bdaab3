#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "etmatch/classifier.hpp"
#include "etmatch/evaluation.hpp"
#include "etmatch/features.hpp"
#include "etmatch/language_metrics.hpp"
#include "etmatch/matcher.hpp"

namespace etmatch {

/// One source/target graph pair with its reference alignment.
struct GraphPair {
  std::string name;
  EtypeGraph source;
  EtypeGraph target;
  ReferenceAlignment reference;
};

struct MatchingTask {
  std::vector<GraphPair> train;
  std::vector<GraphPair> test;
  std::optional<Taxonomy> taxonomy;
  std::optional<EmbeddingTable> embeddings;

  [[nodiscard]] Resources resources() const {
    return {taxonomy ? &*taxonomy : nullptr, embeddings ? &*embeddings : nullptr};
  }
};

/// Task description file:
///   {"train": [{"name"?, "source", "target", "reference"}, ...],
///    "test":  [...], "taxonomy"?: path, "embeddings"?: path}
/// Relative paths resolve against the task file's directory.
[[nodiscard]] MatchingTask load_task(const std::string& path, const GraphOptions& options = {});

struct PipelineConfig {
  FeatureConfig features;
  double neg_cap_ratio = kDefaultNegCapRatio;
  std::uint64_t seed = 42;
  double threshold = kDefaultThreshold;
  ModelType model_type = ModelType::logistic_regression;
  ExtractionPolicy policy = ExtractionPolicy::all_positive;
  Hyperparams hyperparams;
  int workers = 1;
};

struct TrainingSummary {
  std::size_t candidates = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t balanced = 0;  // examples after balancing
};

/// Featurizes every candidate of every pair, labels them from the
/// references, fits ES normalization on the pooled population, balances,
/// and trains. Throws Error(training_data) when no positive (or no negative)
/// candidate exists.
[[nodiscard]] ClassifierModel train_on_pairs(std::span<const GraphPair> pairs, const Resources& resources,
                                             const PipelineConfig& config,
                                             const FeatureMask& mask = FeatureMask::all(),
                                             TrainingSummary* summary = nullptr);

/// Scores the full candidate product with the model's stored featurization
/// settings and normalization. Output follows candidate order.
[[nodiscard]] std::vector<ScoredPair> score_candidates(const ClassifierModel& model,
                                                       const EtypeGraph& source,
                                                       const EtypeGraph& target,
                                                       const Resources& resources, double threshold,
                                                       int workers = 1);

/// Alignment TSV: every candidate as `idA<TAB>idB<TAB>score<TAB>decision`,
/// score with 6 decimals, rows by score descending then pair; decision is 1
/// exactly for pairs kept by the alignment.
[[nodiscard]] std::string format_alignment_tsv(std::span<const ScoredPair> scored,
                                               const Alignment& alignment);

struct AblationVariant {
  std::string name;
  FeatureMask mask;
};

/// B, B+ES_v, B+ES_h, B+ES_v+ES_h.
[[nodiscard]] std::vector<AblationVariant> standard_ablation_variants();

/// Trains and evaluates one model per variant with identical seed and
/// hyperparameters. Each row's report is micro-averaged over the test pairs;
/// the macro average is attached as well. Throws std::invalid_argument for an
/// empty mask.
[[nodiscard]] std::vector<NamedReport> run_ablation(const MatchingTask& task,
                                                    std::span<const AblationVariant> variants,
                                                    const PipelineConfig& config);

/// Train on task.train, evaluate on task.test with one mask.
[[nodiscard]] NamedReport train_and_evaluate(const MatchingTask& task, const AblationVariant& variant,
                                             const PipelineConfig& config);

}  // namespace etmatch
