#pragma once

#include <cstdint>
#include <string>

#include "etmatch/pipeline.hpp"

namespace etmatch {

/// Generator for self-contained matching tasks: a random base graph, two
/// perturbed copies of it, a taxonomy and an embedding table over the base
/// vocabulary. The task trains on (base, copy 1) and tests on (base, copy 2).
struct SyntheticOptions {
  int etypes = 30;
  /// Fraction of etype labels replaced in each copy. Half of the replaced
  /// labels become taxonomy synonyms, the rest unrelated out-of-vocabulary
  /// words.
  double label_noise = 0.2;
  /// Fraction of unperturbed labels that receive a one-character typo.
  double typo_rate = 0.3;
  /// Drop, rename and add properties in the copies.
  bool structure_noise = false;
  double structure_noise_rate = 0.15;
  int min_own_properties = 2;
  int max_own_properties = 4;
  int embedding_dim = 16;
  std::uint64_t seed = 7;
};

struct SyntheticBundle {
  EtypeGraph base;
  EtypeGraph train_copy;
  EtypeGraph test_copy;
  ReferenceAlignment train_reference;
  ReferenceAlignment test_reference;
  std::string taxonomy_tsv;
  std::string embeddings_txt;

  /// Parses the resources and assembles the task in memory.
  [[nodiscard]] MatchingTask task() const;
};

[[nodiscard]] SyntheticBundle generate_synthetic(const SyntheticOptions& options);

/// Writes base.json, copy1.json, copy2.json, train_ref.tsv, test_ref.tsv,
/// taxonomy.tsv, embeddings.txt and task.json into `dir` (created if needed).
void write_synthetic(const SyntheticBundle& bundle, const std::string& dir);

}  // namespace etmatch
