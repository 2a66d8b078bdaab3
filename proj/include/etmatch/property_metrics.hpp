#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "etmatch/etype_graph.hpp"

namespace etmatch {

/// Shareability-based specificity: weight * exp(lambda * (1 - n_p)).
/// Throws std::domain_error when n_p < 1 or lambda <= 0.
[[nodiscard]] double sp(double weight, int n_p, double lambda);

/// Layer-based specificity: weight * theta * min_layer.
/// Throws std::domain_error when min_layer < 1 or theta <= 0.
[[nodiscard]] double l_spec(double weight, int min_layer, double theta);

/// theta for a graph: 1 / max_depth, so the deepest layer maps to weight.
[[nodiscard]] inline double inverse_max_depth(const EtypeGraph& graph) {
  return 1.0 / static_cast<double>(graph.max_depth());
}

struct PairPropertyMatch {
  /// (property id in A, property id in B), one-to-one.
  std::vector<std::pair<std::string, std::string>> pairs;

  [[nodiscard]] std::size_t k() const noexcept { return pairs.size(); }
};

inline constexpr double kDefaultPropertyMatchThreshold = 0.9;

/// Greedy one-to-one pairing by normalized label: highest Levenshtein
/// similarity first (exact matches score 1), candidates below `threshold`
/// dropped, ties broken by id order.
[[nodiscard]] PairPropertyMatch match_properties(std::span<const Property> props_a,
                                                 std::span<const Property> props_b,
                                                 double threshold = kDefaultPropertyMatchThreshold);

/// A graph together with its derived statistics.
struct PropertyScope {
  const EtypeGraph& graph;
  const GraphStats& stats;

  /// prop(E) as full Property records, in id order.
  [[nodiscard]] std::vector<Property> properties_of(std::string_view etype_id) const;
};

/// Horizontal etype similarity before normalization. Matched pair i
/// contributes (SP_A(p_i)/|prop(E_a)| + SP_B(p_i)/|prop(E_b)|) / 2; an etype
/// without properties yields 0.
[[nodiscard]] double es_h_raw(const PropertyScope& a, std::string_view etype_a,
                              const PropertyScope& b, std::string_view etype_b,
                              const PairPropertyMatch& match, double lambda);

/// Vertical etype similarity before normalization; same shape as es_h_raw
/// with the layer-based specificity at each property's smallest layer.
[[nodiscard]] double es_v_raw(const PropertyScope& a, std::string_view etype_a,
                              const PropertyScope& b, std::string_view etype_b,
                              const PairPropertyMatch& match, double theta_a, double theta_b);

/// z-score parameters plus the min/max of the fitted z-values, which rescale
/// z into [0,1].
struct NormalizationStats {
  double mean = 0.0;
  double std_dev = 0.0;
  double min_z = 0.0;
  double max_z = 0.0;
  std::string scope;

  [[nodiscard]] bool degenerate() const noexcept { return std_dev == 0.0 || min_z == max_z; }
  /// Maps one raw score; values outside the fitted range are clamped, and
  /// degenerate stats give 0.5.
  [[nodiscard]] double apply(double raw) const;

  friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

/// Fits on the whole population (population standard deviation).
/// Throws std::invalid_argument on an empty input.
[[nodiscard]] NormalizationStats fit_normalization(std::span<const double> raw, std::string scope = {});

/// Fits on `raw` unless `stats` is given, then maps every value.
[[nodiscard]] std::pair<std::vector<double>, NormalizationStats> normalize_scores(
    std::span<const double> raw, const std::optional<NormalizationStats>& stats = std::nullopt);

}  // namespace etmatch
