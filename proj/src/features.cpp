#include "etmatch/features.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <thread>

#include "etmatch/string_metrics.hpp"

namespace etmatch {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kNames = {
    "ngram", "lcs", "levenshtein", "wupalmer", "embedding", "es_h", "es_v"};

}  // namespace

std::string_view feature_name(Feature f) { return kNames.at(static_cast<std::size_t>(f)); }

std::optional<Feature> parse_feature(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == lower) return static_cast<Feature>(i);
  }
  return std::nullopt;
}

std::vector<std::string> feature_order() { return {kNames.begin(), kNames.end()}; }

FeatureMask::FeatureMask(std::initializer_list<Feature> features) {
  for (auto f : features) add(f);
}

FeatureMask FeatureMask::all() {
  FeatureMask m;
  m.on_.fill(true);
  return m;
}

FeatureMask FeatureMask::backbone() {
  return FeatureMask{Feature::ngram, Feature::lcs, Feature::levenshtein, Feature::wupalmer,
                     Feature::embedding};
}

FeatureMask FeatureMask::parse(std::string_view spec) {
  FeatureMask m;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t end = spec.find_first_of(",+", start);
    if (end == std::string_view::npos) end = spec.size();
    auto name = spec.substr(start, end - start);
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    if (name == "all") {
      m.on_.fill(true);
    } else if (name == "backbone" || name == "B") {
      for (auto i : backbone().active_indices()) m.on_[i] = true;
    } else if (!name.empty()) {
      auto f = parse_feature(name);
      if (!f) throw std::invalid_argument("unknown feature '" + std::string(name) + "'");
      m.add(*f);
    }
    if (end == spec.size()) break;
    start = end + 1;
  }
  return m;
}

bool FeatureMask::empty() const {
  return std::none_of(on_.begin(), on_.end(), [](bool b) { return b; });
}

std::vector<std::size_t> FeatureMask::active_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < on_.size(); ++i) {
    if (on_[i]) out.push_back(i);
  }
  return out;
}

std::vector<std::string> FeatureMask::names() const {
  std::vector<std::string> out;
  for (auto i : active_indices()) out.emplace_back(kNames[i]);
  return out;
}

FeatureMask& FeatureMask::add(Feature f) {
  on_[static_cast<std::size_t>(f)] = true;
  return *this;
}

GraphContext::GraphContext(EtypeGraph graph, bool include_inherited)
    : graph_(std::move(graph)), stats_(compute_stats(graph_, include_inherited)) {}

FeatureVector featurize_raw(const CandidatePair& pair, const GraphContext& source,
                            const GraphContext& target, const Resources& resources,
                            const FeatureConfig& config) {
  const auto& ea = source.graph().etype(pair.left);
  const auto& eb = target.graph().etype(pair.right);
  FeatureVector fv;
  fv.pair = pair;
  auto set = [&fv](Feature f, double v) { fv.values[static_cast<std::size_t>(f)] = v; };

  set(Feature::ngram, ngram_sim(ea.label, eb.label, config.ngram_n));
  set(Feature::lcs, lcs_sim(ea.label, eb.label));
  set(Feature::levenshtein, levenshtein_sim(ea.label, eb.label));
  set(Feature::wupalmer,
      resources.taxonomy ? wu_palmer_label_sim(*resources.taxonomy, ea.label, eb.label) : 0.0);
  set(Feature::embedding, resources.embeddings
                              ? embedding_sim(*resources.embeddings, ea.label, eb.label)
                              : kEmbeddingNoEvidence);

  const auto sa = source.scope();
  const auto sb = target.scope();
  const auto props_a = sa.properties_of(ea.id);
  const auto props_b = sb.properties_of(eb.id);
  const auto match = match_properties(props_a, props_b, config.property_match_threshold);
  set(Feature::es_h, es_h_raw(sa, ea.id, sb, eb.id, match, config.lambda));
  set(Feature::es_v, es_v_raw(sa, ea.id, sb, eb.id, match, inverse_max_depth(source.graph()),
                              inverse_max_depth(target.graph())));
  return fv;
}

std::vector<FeatureVector> featurize_raw(std::span<const CandidatePair> pairs,
                                         const GraphContext& source, const GraphContext& target,
                                         const Resources& resources, const FeatureConfig& config,
                                         int workers) {
  std::vector<FeatureVector> out(pairs.size());
  auto run = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = featurize_raw(pairs[i], source, target, resources, config);
    }
  };
  const std::size_t n_workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, pairs.size() / 64 + 1);
  if (n_workers == 1) {
    run(0, pairs.size());
    return out;
  }
  {
    std::vector<std::jthread> threads;
    const std::size_t chunk = (pairs.size() + n_workers - 1) / n_workers;
    for (std::size_t begin = 0; begin < pairs.size(); begin += chunk) {
      threads.emplace_back(run, begin, std::min(pairs.size(), begin + chunk));
    }
  }
  return out;
}

EsNormalization fit_es_normalization(std::span<const FeatureVector> raw, const std::string& scope) {
  std::vector<double> h;
  std::vector<double> v;
  h.reserve(raw.size());
  v.reserve(raw.size());
  for (const auto& fv : raw) {
    h.push_back(fv[Feature::es_h]);
    v.push_back(fv[Feature::es_v]);
  }
  return {fit_normalization(h, scope), fit_normalization(v, scope)};
}

void apply_es_normalization(std::span<FeatureVector> vectors, const EsNormalization& norm) {
  constexpr auto h = static_cast<std::size_t>(Feature::es_h);
  constexpr auto v = static_cast<std::size_t>(Feature::es_v);
  for (auto& fv : vectors) {
    fv.values[h] = norm.es_h.apply(fv.values[h]);
    fv.values[v] = norm.es_v.apply(fv.values[v]);
  }
}

void apply_mask(std::span<FeatureVector> vectors, const FeatureMask& mask) {
  for (auto& fv : vectors) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (!mask.contains(static_cast<Feature>(i))) fv.values[i] = 0.0;
    }
  }
}

FeatureVector featurize(const CandidatePair& pair, const GraphContext& source,
                        const GraphContext& target, const Resources& resources,
                        const FeatureConfig& config, const EsNormalization& norm,
                        const FeatureMask& mask) {
  auto fv = featurize_raw(pair, source, target, resources, config);
  std::span<FeatureVector> one(&fv, 1);
  apply_es_normalization(one, norm);
  apply_mask(one, mask);
  return fv;
}

}  // namespace etmatch
