#pragma once

#include <string>
#include <vector>

#include "etmatch/etype_graph.hpp"
#include "etmatch/rng.hpp"

namespace testing {

struct EtypeSpec {
  std::string id;
  std::vector<std::string> properties;
  std::vector<std::string> parents;
  std::string label = {};
};

inline etmatch::EtypeGraph make_graph(const std::string& id, const std::vector<std::string>& property_labels,
                                      const std::vector<EtypeSpec>& etypes) {
  std::vector<etmatch::Property> props;
  for (const auto& p : property_labels) props.push_back({p, p, 1.0});
  std::vector<etmatch::Etype> ets;
  for (const auto& e : etypes) {
    ets.push_back({e.id, e.label.empty() ? e.id : e.label, {e.properties.begin(), e.properties.end()},
                   {e.parents.begin(), e.parents.end()}});
  }
  return etmatch::EtypeGraph(id, std::move(props), std::move(ets));
}

// Random DAG with up to `max_etypes` etypes; properties drawn from a small
// pool of labels so that cross-graph matches occur.
inline etmatch::EtypeGraph random_graph(etmatch::Rng& rng, const std::string& id, std::size_t max_etypes = 10,
                                        std::size_t property_pool = 8) {
  static const char* kLabels[] = {"name", "age", "title", "date", "place", "author", "colour", "color",
                                  "weight", "height", "email", "phone"};
  const std::size_t n = 1 + rng.below(max_etypes);
  std::vector<etmatch::Property> props;
  for (std::size_t j = 0; j < property_pool; ++j) {
    props.push_back({"p" + std::to_string(j), kLabels[j % 12], rng.below(2) ? 1.0 : 0.25 + 0.5 * rng.uniform()});
  }
  std::vector<etmatch::Etype> ets;
  for (std::size_t i = 0; i < n; ++i) {
    etmatch::Etype e;
    e.id = "e" + std::to_string(i);
    e.label = "Etype" + std::to_string(i);
    const std::size_t k = rng.below(4);
    for (std::size_t t = 0; t < k; ++t) e.direct_property_ids.insert("p" + std::to_string(rng.below(property_pool)));
    if (i > 0 && rng.below(4) != 0) {
      e.parent_ids.insert("e" + std::to_string(rng.below(i)));
      if (i > 1 && rng.below(3) == 0) e.parent_ids.insert("e" + std::to_string(rng.below(i)));
    }
    ets.push_back(std::move(e));
  }
  return etmatch::EtypeGraph(id, std::move(props), std::move(ets));
}

}  // namespace testing
