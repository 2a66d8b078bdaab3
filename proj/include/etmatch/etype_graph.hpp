#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace etmatch {

struct Property {
  std::string id;
  std::string label;  // normalized
  double weight = 1.0;
};

struct Etype {
  std::string id;
  std::string label;  // normalized
  std::set<std::string> direct_property_ids;
  std::set<std::string> parent_ids;
};

struct GraphOptions {
  /// Reject unknown JSON fields instead of warning about them.
  bool strict = true;
  /// Receives non-fatal diagnostics; defaults to standard error.
  std::function<void(std::string_view)> warn;
};

/// Rooted (possibly multi-rooted) inheritance hierarchy of etypes with their
/// property associations. Validated on construction and immutable after.
class EtypeGraph {
 public:
  /// Validates and takes ownership. Labels are normalized here; throws
  /// Error(validation) on duplicate ids, dangling references, self-parents,
  /// empty labels, out-of-range weights or cycles.
  EtypeGraph(std::string graph_id, std::vector<Property> properties, std::vector<Etype> etypes);

  [[nodiscard]] const std::string& id() const noexcept { return id_; }
  /// Sorted by id.
  [[nodiscard]] const std::vector<Etype>& etypes() const noexcept { return etypes_; }
  /// Sorted by id.
  [[nodiscard]] const std::vector<Property>& properties() const noexcept { return properties_; }

  [[nodiscard]] const Etype* find_etype(std::string_view id) const;
  [[nodiscard]] const Property* find_property(std::string_view id) const;
  [[nodiscard]] const Etype& etype(std::string_view id) const;
  [[nodiscard]] const Property& property(std::string_view id) const;

  /// Largest shortest-path layer over all etypes (roots are layer 1); 1 for an
  /// empty graph.
  [[nodiscard]] int max_depth() const noexcept { return max_depth_; }

 private:
  std::string id_;
  std::vector<Property> properties_;
  std::vector<Etype> etypes_;
  int max_depth_ = 1;
};

/// Derived statistics consumed by the property-based metrics.
struct GraphStats {
  /// Number of etypes whose property set contains p. Only properties carried
  /// by at least one etype appear.
  std::map<std::string, int> n_of;
  /// Smallest layer among the etypes carrying p.
  std::map<std::string, int> min_layer_of;
  /// Direct properties, plus those of every ancestor when inheritance is on.
  std::map<std::string, std::set<std::string>> prop_closure;
  std::map<std::string, int> layer_of;
  bool include_inherited = true;
};

[[nodiscard]] EtypeGraph load_graph(const std::string& path, const GraphOptions& options = {});
[[nodiscard]] EtypeGraph parse_graph(std::string_view json_text, const GraphOptions& options = {},
                                     std::string_view source_name = "<memory>");

/// Canonical JSON form: ids sorted, arrays sorted, two-space indentation.
[[nodiscard]] std::string serialize_graph(const EtypeGraph& graph);

[[nodiscard]] GraphStats compute_stats(const EtypeGraph& graph, bool include_inherited = true);

/// Shortest-path depth of an etype, roots = 1. Throws std::out_of_range for
/// unknown ids.
[[nodiscard]] int layer(const GraphStats& stats, std::string_view etype_id);

}  // namespace etmatch
