#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace etmatch {

/// Concept hierarchy for Wu-Palmer similarity. Concept ids and synonym terms
/// are stored in normalized label form.
class Taxonomy {
 public:
  Taxonomy() = default;

  /// edges: (child, parent); synonyms: (term, concept). Concepts mentioned
  /// only by a synonym must also appear in an edge or in `isolated`.
  /// Throws Error(validation) on cycles or synonyms to unknown concepts.
  Taxonomy(const std::vector<std::pair<std::string, std::string>>& edges,
           const std::vector<std::pair<std::string, std::string>>& synonyms = {},
           const std::vector<std::string>& isolated = {});

  [[nodiscard]] bool contains(std::string_view concept_id) const;
  /// Shortest-path depth, root = 1. Throws std::out_of_range.
  [[nodiscard]] int depth(std::string_view concept_id) const;
  /// The concept itself and every ancestor.
  [[nodiscard]] const std::set<std::string>& ancestors(std::string_view concept_id) const;
  [[nodiscard]] std::size_t size() const noexcept { return depth_.size(); }
  [[nodiscard]] const std::map<std::string, std::string>& synonyms() const noexcept {
    return synonyms_;
  }

 private:
  std::map<std::string, int, std::less<>> depth_;
  std::map<std::string, std::set<std::string>, std::less<>> ancestors_;
  std::map<std::string, std::string> synonyms_;

  friend std::optional<std::string> map_label_to_concept(const Taxonomy&, std::string_view);
};

/// Reads `child<TAB>parent` lines and `synonym<TAB>term<TAB>concept` lines.
/// Blank lines and lines starting with '#' are skipped; a single-field line
/// declares a stand-alone concept.
[[nodiscard]] Taxonomy load_taxonomy(const std::string& path);
[[nodiscard]] Taxonomy parse_taxonomy(std::string_view text, std::string_view source_name = "<memory>");

/// Exact lookup of a normalized label against concept ids, then synonyms.
[[nodiscard]] std::optional<std::string> map_label_to_concept(const Taxonomy& tax,
                                                              std::string_view label);

/// 2 depth(lcs) / (depth(c1) + depth(c2)), lcs being the deepest common
/// ancestor. 0 when either concept is unknown or no ancestor is shared.
[[nodiscard]] double wu_palmer_sim(const Taxonomy& tax, std::string_view c1, std::string_view c2);

/// Wu-Palmer on two labels: each label is resolved in full, falling back to
/// its last token; 0 when either side stays unresolved.
[[nodiscard]] double wu_palmer_label_sim(const Taxonomy& tax, std::string_view label_a,
                                         std::string_view label_b);

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  /// Throws Error(validation) on dimension mismatches or non-finite values.
  EmbeddingTable(std::size_t dimension, std::vector<std::pair<std::string, std::vector<double>>> rows);

  [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
  [[nodiscard]] std::size_t size() const noexcept { return vectors_.size(); }
  [[nodiscard]] const std::vector<double>* find(std::string_view token) const;

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

/// word2vec text format; the `count dim` header line is optional. Tokens
/// are lowercased, keeping the first occurrence of each.
[[nodiscard]] EmbeddingTable load_embeddings(const std::string& path);
[[nodiscard]] EmbeddingTable parse_embeddings(std::string_view text,
                                              std::string_view source_name = "<memory>");

/// Score returned when either label has no in-vocabulary token.
inline constexpr double kEmbeddingNoEvidence = 0.5;

/// Cosine of the mean in-vocabulary token vectors, mapped to [0,1] as
/// (cos + 1) / 2.
[[nodiscard]] double embedding_sim(const EmbeddingTable& table, std::string_view a,
                                   std::string_view b);

}  // namespace etmatch
