#include "etmatch/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "etmatch/error.hpp"

namespace etmatch {

namespace fs = std::filesystem;
using nlohmann::json;

MatchingTask load_task(const std::string& path, const GraphOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open task file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, path + ": " + e.what());
  }
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    fs::path fp(p);
    return (fp.is_absolute() ? fp : base / fp).string();
  };

  MatchingTask task;
  auto read_pairs = [&](const char* key, std::vector<GraphPair>& out) {
    if (!doc.contains(key)) return;
    const auto& arr = doc.at(key);
    if (!arr.is_array()) throw Error(ErrorKind::parse, path + ": '" + key + "' must be an array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& item = arr[i];
      const std::string locus = path + ": " + key + "[" + std::to_string(i) + "]";
      if (!item.is_object() || !item.contains("source") || !item.contains("target") ||
          !item.contains("reference")) {
        throw Error(ErrorKind::parse, locus + ": expected {source, target, reference}");
      }
      GraphPair gp{
          item.value("name", std::string(key) + std::to_string(i)),
          load_graph(resolve(item.at("source").get<std::string>()), options),
          load_graph(resolve(item.at("target").get<std::string>()), options),
          load_alignment(resolve(item.at("reference").get<std::string>()), options.warn),
      };
      check_resolvable(gp.reference, gp.source, gp.target, options.warn);
      out.push_back(std::move(gp));
    }
  };
  try {
    read_pairs("train", task.train);
    read_pairs("test", task.test);
    if (doc.contains("taxonomy")) task.taxonomy = load_taxonomy(resolve(doc.at("taxonomy").get<std::string>()));
    if (doc.contains("embeddings")) {
      task.embeddings = load_embeddings(resolve(doc.at("embeddings").get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, path + ": " + e.what());
  }
  return task;
}

namespace {

struct FeaturizedPair {
  std::vector<FeatureVector> vectors;  // raw ES values
  std::vector<int> labels;
};

bool in_reference(const ReferenceAlignment& ref, const CandidatePair& p) {
  return ref.pairs.count(p) || ref.pairs.count(CandidatePair{p.right, p.left});
}

FeaturizedPair featurize_pair(const GraphPair& gp, const Resources& resources,
                              const PipelineConfig& config) {
  const GraphContext source(gp.source, config.features.include_inherited);
  const GraphContext target(gp.target, config.features.include_inherited);
  const auto candidates = generate_candidates(gp.source, gp.target);
  FeaturizedPair out;
  out.vectors = featurize_raw(candidates, source, target, resources, config.features, config.workers);
  out.labels.reserve(candidates.size());
  for (const auto& c : candidates) out.labels.push_back(in_reference(gp.reference, c) ? 1 : 0);
  return out;
}

std::string scope_name(std::span<const GraphPair> pairs) {
  std::string s = "train";
  for (const auto& p : pairs) s += ":" + p.name;
  return s;
}

ClassifierModel train_featurized(std::span<const FeaturizedPair> featurized, const std::string& scope,
                                 const PipelineConfig& config, const FeatureMask& mask,
                                 TrainingSummary* summary) {
  if (mask.empty()) throw std::invalid_argument("empty feature set");
  std::vector<FeatureVector> pooled;
  for (const auto& f : featurized) pooled.insert(pooled.end(), f.vectors.begin(), f.vectors.end());
  if (pooled.empty()) throw Error(ErrorKind::training_data, "training pairs produce no candidates");
  const auto norm = fit_es_normalization(pooled, scope);

  std::vector<LabeledExample> examples;
  examples.reserve(pooled.size());
  std::size_t positives = 0;
  for (const auto& f : featurized) {
    for (std::size_t i = 0; i < f.vectors.size(); ++i) {
      examples.push_back({f.vectors[i], f.labels[i]});
      positives += static_cast<std::size_t>(f.labels[i]);
    }
  }
  for (auto& e : examples) {
    std::span<FeatureVector> one(&e.features, 1);
    apply_es_normalization(one, norm);
    apply_mask(one, mask);
  }

  const auto balanced = balance(examples, config.neg_cap_ratio, config.seed);
  auto model = train(balanced, config.model_type, config.hyperparams, config.seed, mask);
  model.norm = norm;
  model.feature_config = config.features;
  if (summary) {
    summary->candidates = examples.size();
    summary->positives = positives;
    summary->negatives = examples.size() - positives;
    summary->balanced = balanced.size();
  }
  return model;
}

std::vector<ScoredPair> score_featurized(const ClassifierModel& model, std::vector<FeatureVector> vectors,
                                         double threshold) {
  apply_es_normalization(vectors, model.norm);
  apply_mask(vectors, model.mask);
  std::vector<ScoredPair> out;
  out.reserve(vectors.size());
  for (const auto& fv : vectors) {
    const auto pred = predict(model, fv, threshold);
    out.push_back({fv.pair, pred.score, pred.decision});
  }
  return out;
}

}  // namespace

ClassifierModel train_on_pairs(std::span<const GraphPair> pairs, const Resources& resources,
                               const PipelineConfig& config, const FeatureMask& mask,
                               TrainingSummary* summary) {
  std::vector<FeaturizedPair> featurized;
  for (const auto& gp : pairs) featurized.push_back(featurize_pair(gp, resources, config));
  return train_featurized(featurized, scope_name(pairs), config, mask, summary);
}

std::vector<ScoredPair> score_candidates(const ClassifierModel& model, const EtypeGraph& source,
                                         const EtypeGraph& target, const Resources& resources,
                                         double threshold, int workers) {
  if (model.feature_order != feature_order()) {
    throw Error(ErrorKind::model_mismatch, "model feature order does not match the pipeline");
  }
  const GraphContext src(source, model.feature_config.include_inherited);
  const GraphContext tgt(target, model.feature_config.include_inherited);
  const auto candidates = generate_candidates(source, target);
  return score_featurized(model,
                          featurize_raw(candidates, src, tgt, resources, model.feature_config, workers),
                          threshold);
}

std::string format_alignment_tsv(std::span<const ScoredPair> scored, const Alignment& alignment) {
  std::set<CandidatePair> kept;
  for (const auto& e : alignment.entries) kept.insert(e.pair);
  std::vector<const ScoredPair*> rows;
  rows.reserve(scored.size());
  for (const auto& s : scored) rows.push_back(&s);
  std::sort(rows.begin(), rows.end(), [](const ScoredPair* a, const ScoredPair* b) {
    if (a->score != b->score) return a->score > b->score;
    return a->pair < b->pair;
  });
  std::string out;
  char buf[32];
  for (const auto* r : rows) {
    std::snprintf(buf, sizeof buf, "%.6f", r->score);
    out += r->pair.left + '\t' + r->pair.right + '\t' + buf + '\t' +
           (kept.count(r->pair) ? "1" : "0") + '\n';
  }
  return out;
}

std::vector<AblationVariant> standard_ablation_variants() {
  return {
      {"B", FeatureMask::backbone()},
      {"B+ES_v", FeatureMask::backbone().add(Feature::es_v)},
      {"B+ES_h", FeatureMask::backbone().add(Feature::es_h)},
      {"B+ES_v+ES_h", FeatureMask::all()},
  };
}

std::vector<NamedReport> run_ablation(const MatchingTask& task, std::span<const AblationVariant> variants,
                                      const PipelineConfig& config) {
  for (const auto& v : variants) {
    if (v.mask.empty()) throw std::invalid_argument("empty feature set in variant '" + v.name + "'");
  }
  if (task.test.empty()) throw Error(ErrorKind::eval_input, "task has no test pairs");
  const auto resources = task.resources();
  std::vector<FeaturizedPair> train_features;
  for (const auto& gp : task.train) train_features.push_back(featurize_pair(gp, resources, config));
  std::vector<FeaturizedPair> test_features;
  for (const auto& gp : task.test) test_features.push_back(featurize_pair(gp, resources, config));

  std::vector<NamedReport> rows;
  for (const auto& variant : variants) {
    const auto model =
        train_featurized(train_features, scope_name(task.train), config, variant.mask, nullptr);
    std::vector<EvalReport> per_pair;
    for (std::size_t i = 0; i < task.test.size(); ++i) {
      const auto scored = score_featurized(model, test_features[i].vectors, config.threshold);
      const auto alignment = extract_alignment(scored, config.policy, config.threshold);
      per_pair.push_back(score(alignment, task.test[i].reference));
    }
    const auto agg = aggregate(per_pair);
    rows.push_back({variant.name, agg.micro, agg.macro});
  }
  return rows;
}

NamedReport train_and_evaluate(const MatchingTask& task, const AblationVariant& variant,
                               const PipelineConfig& config) {
  return run_ablation(task, std::span(&variant, 1), config).front();
}

}  // namespace etmatch
