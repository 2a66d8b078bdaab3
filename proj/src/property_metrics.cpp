#include "etmatch/property_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

#include "etmatch/string_metrics.hpp"

namespace etmatch {

double sp(double weight, int n_p, double lambda) {
  if (n_p < 1) throw std::domain_error("sp: n(p) must be at least 1");
  if (!(lambda > 0.0)) throw std::domain_error("sp: lambda must be positive");
  return weight * std::exp(lambda * (1.0 - static_cast<double>(n_p)));
}

double l_spec(double weight, int min_layer, double theta) {
  if (min_layer < 1) throw std::domain_error("l_spec: layer must be at least 1");
  if (!(theta > 0.0)) throw std::domain_error("l_spec: theta must be positive");
  return weight * theta * static_cast<double>(min_layer);
}

PairPropertyMatch match_properties(std::span<const Property> props_a,
                                   std::span<const Property> props_b, double threshold) {
  struct Candidate {
    double sim;
    const Property* a;
    const Property* b;
  };
  std::vector<Candidate> candidates;
  for (const auto& pa : props_a) {
    for (const auto& pb : props_b) {
      const double sim = pa.label == pb.label ? 1.0 : levenshtein_sim(pa.label, pb.label);
      if (sim >= threshold) candidates.push_back({sim, &pa, &pb});
    }
  }
  // The tie-break key is symmetric in the two sides so that swapping the
  // arguments selects the same pairs.
  auto key = [](const Candidate& c) {
    const auto& lo = std::min(c.a->id, c.b->id);
    const auto& hi = std::max(c.a->id, c.b->id);
    return std::tie(lo, hi);
  };
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    if (key(x) != key(y)) return key(x) < key(y);
    return x.a->id < y.a->id;
  });

  PairPropertyMatch match;
  std::set<std::string_view> used_a;
  std::set<std::string_view> used_b;
  for (const auto& c : candidates) {
    if (used_a.count(c.a->id) || used_b.count(c.b->id)) continue;
    used_a.insert(c.a->id);
    used_b.insert(c.b->id);
    match.pairs.emplace_back(c.a->id, c.b->id);
  }
  return match;
}

std::vector<Property> PropertyScope::properties_of(std::string_view etype_id) const {
  std::vector<Property> out;
  auto it = stats.prop_closure.find(std::string(etype_id));
  if (it == stats.prop_closure.end()) {
    throw std::out_of_range("unknown etype id '" + std::string(etype_id) + "'");
  }
  out.reserve(it->second.size());
  for (const auto& pid : it->second) out.push_back(graph.property(pid));
  return out;
}

namespace {

std::size_t closure_size(const PropertyScope& scope, std::string_view etype_id) {
  auto it = scope.stats.prop_closure.find(std::string(etype_id));
  if (it == scope.stats.prop_closure.end()) {
    throw std::out_of_range("unknown etype id '" + std::string(etype_id) + "'");
  }
  return it->second.size();
}

// Per-pair terms are summed in ascending order so the result does not
// depend on the order of the match list (or on which side is "A").
template <typename SpecA, typename SpecB>
double es_sum(const PropertyScope& a, std::string_view etype_a, const PropertyScope& b,
              std::string_view etype_b, const PairPropertyMatch& match, SpecA spec_a, SpecB spec_b) {
  const std::size_t na = closure_size(a, etype_a);
  const std::size_t nb = closure_size(b, etype_b);
  if (na == 0 || nb == 0 || match.pairs.empty()) return 0.0;
  std::vector<double> terms;
  terms.reserve(match.pairs.size());
  for (const auto& [pa, pb] : match.pairs) {
    terms.push_back(spec_a(pa) / static_cast<double>(na) + spec_b(pb) / static_cast<double>(nb));
  }
  std::sort(terms.begin(), terms.end());
  double total = 0.0;
  for (double t : terms) total += t;
  return 0.5 * total;
}

}  // namespace

double es_h_raw(const PropertyScope& a, std::string_view etype_a, const PropertyScope& b,
                std::string_view etype_b, const PairPropertyMatch& match, double lambda) {
  auto spec = [lambda](const PropertyScope& s) {
    return [&s, lambda](const std::string& pid) {
      return sp(s.graph.property(pid).weight, s.stats.n_of.at(pid), lambda);
    };
  };
  return es_sum(a, etype_a, b, etype_b, match, spec(a), spec(b));
}

double es_v_raw(const PropertyScope& a, std::string_view etype_a, const PropertyScope& b,
                std::string_view etype_b, const PairPropertyMatch& match, double theta_a,
                double theta_b) {
  auto spec = [](const PropertyScope& s, double theta) {
    return [&s, theta](const std::string& pid) {
      return l_spec(s.graph.property(pid).weight, s.stats.min_layer_of.at(pid), theta);
    };
  };
  return es_sum(a, etype_a, b, etype_b, match, spec(a, theta_a), spec(b, theta_b));
}

double NormalizationStats::apply(double raw) const {
  if (degenerate()) return 0.5;
  const double z = (raw - mean) / std_dev;
  return std::clamp((z - min_z) / (max_z - min_z), 0.0, 1.0);
}

NormalizationStats fit_normalization(std::span<const double> raw, std::string scope) {
  if (raw.empty()) throw std::invalid_argument("fit_normalization: empty score list");
  NormalizationStats stats;
  stats.scope = std::move(scope);
  double sum = 0.0;
  for (double x : raw) sum += x;
  stats.mean = sum / static_cast<double>(raw.size());
  double sq = 0.0;
  for (double x : raw) sq += (x - stats.mean) * (x - stats.mean);
  stats.std_dev = std::sqrt(sq / static_cast<double>(raw.size()));
  if (stats.std_dev == 0.0) return stats;
  stats.min_z = stats.max_z = (raw[0] - stats.mean) / stats.std_dev;
  for (double x : raw) {
    const double z = (x - stats.mean) / stats.std_dev;
    stats.min_z = std::min(stats.min_z, z);
    stats.max_z = std::max(stats.max_z, z);
  }
  return stats;
}

std::pair<std::vector<double>, NormalizationStats> normalize_scores(
    std::span<const double> raw, const std::optional<NormalizationStats>& stats) {
  NormalizationStats fitted = stats ? *stats : fit_normalization(raw);
  std::vector<double> out;
  out.reserve(raw.size());
  for (double x : raw) out.push_back(fitted.apply(x));
  return {std::move(out), std::move(fitted)};
}

}  // namespace etmatch
