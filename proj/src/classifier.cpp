#include "etmatch/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "etmatch/error.hpp"
#include "etmatch/rng.hpp"

namespace etmatch {

using nlohmann::json;

std::string_view model_type_name(ModelType type) {
  switch (type) {
    case ModelType::random_forest:
      return "random_forest";
    case ModelType::sgd_linear:
      return "sgd_linear";
    case ModelType::decision_tree:
      return "decision_tree";
    case ModelType::logistic_regression:
      return "logistic_regression";
  }
  return "unknown";
}

std::optional<ModelType> parse_model_type(std::string_view name) {
  if (name == "rf" || name == "random_forest") return ModelType::random_forest;
  if (name == "sgd" || name == "sgd_linear") return ModelType::sgd_linear;
  if (name == "dt" || name == "decision_tree") return ModelType::decision_tree;
  if (name == "lr" || name == "logistic_regression") return ModelType::logistic_regression;
  return std::nullopt;
}

namespace {

// Dense training matrix restricted to the active features.
struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<int> y;

  [[nodiscard]] std::size_t size() const { return y.size(); }
  [[nodiscard]] std::size_t dims() const { return x.empty() ? 0 : x.front().size(); }
};

Dataset make_dataset(std::span<const LabeledExample> examples, const FeatureMask& mask) {
  const auto active = mask.active_indices();
  std::vector<const LabeledExample*> order;
  order.reserve(examples.size());
  for (const auto& e : examples) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const LabeledExample* a, const LabeledExample* b) {
    if (a->label != b->label) return a->label < b->label;
    if (a->features.values != b->features.values) return a->features.values < b->features.values;
    return a->features.pair < b->features.pair;
  });
  Dataset d;
  d.x.reserve(order.size());
  d.y.reserve(order.size());
  for (const auto* e : order) {
    std::vector<double> row;
    row.reserve(active.size());
    for (auto i : active) row.push_back(e->features.values[i]);
    d.x.push_back(std::move(row));
    d.y.push_back(e->label);
  }
  return d;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double dot(const std::vector<double>& w, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * x[j];
  return s;
}

LinearParams fit_logistic(const Dataset& d, const Hyperparams& hp) {
  LinearParams p;
  p.weights.assign(d.dims(), 0.0);
  const double n = static_cast<double>(d.size());
  std::vector<double> grad(d.dims());
  for (int epoch = 0; epoch < hp.lr_epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double err = sigmoid(dot(p.weights, d.x[i]) + p.bias) - d.y[i];
      for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += err * d.x[i][j];
      grad_b += err;
    }
    for (std::size_t j = 0; j < grad.size(); ++j) {
      p.weights[j] -= hp.lr_learning_rate * (grad[j] / n + hp.lr_l2 * p.weights[j]);
    }
    p.bias -= hp.lr_learning_rate * grad_b / n;
  }
  return p;
}

LinearParams fit_sgd_hinge(const Dataset& d, const Hyperparams& hp, std::uint64_t seed) {
  LinearParams p;
  p.weights.assign(d.dims(), 0.0);
  Rng rng(seed, "sgd");
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  const double lr = hp.sgd_learning_rate;
  for (int epoch = 0; epoch < hp.sgd_epochs; ++epoch) {
    rng.shuffle(std::span(order));
    for (auto i : order) {
      const double y = d.y[i] == 1 ? 1.0 : -1.0;
      const double margin = y * (dot(p.weights, d.x[i]) + p.bias);
      for (auto& w : p.weights) w *= 1.0 - lr * hp.sgd_l2;
      if (margin < 1.0) {
        for (std::size_t j = 0; j < p.weights.size(); ++j) p.weights[j] += lr * y * d.x[i][j];
        p.bias += lr * y;
      }
    }
  }
  return p;
}

double gini(double pos, double total) {
  if (total == 0.0) return 0.0;
  const double q = pos / total;
  return 2.0 * q * (1.0 - q);
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& d, const Hyperparams& hp, std::vector<std::size_t> features)
      : d_(d), hp_(hp) {
    tree_.features = std::move(features);
  }

  TreeParams build(std::vector<std::size_t> samples) {
    grow(std::move(samples), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t> samples, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double pos = 0;
    for (auto i : samples) pos += d_.y[i];
    const double total = static_cast<double>(samples.size());
    tree_.nodes[id].value = pos / total;

    const auto min_leaf = static_cast<std::size_t>(std::max(hp_.tree_min_leaf, 1));
    if (depth >= hp_.tree_max_depth || pos == 0 || pos == total || samples.size() < 2 * min_leaf) {
      return id;
    }

    const double parent = gini(pos, total);
    double best_impurity = parent;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<std::size_t> sorted = samples;
    for (auto f : tree_.features) {
      std::stable_sort(sorted.begin(), sorted.end(),
                       [&](std::size_t a, std::size_t b) { return d_.x[a][f] < d_.x[b][f]; });
      double left_pos = 0;
      for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        left_pos += d_.y[sorted[k]];
        const double lo = d_.x[sorted[k]][f];
        const double hi = d_.x[sorted[k + 1]][f];
        const std::size_t n_left = k + 1;
        if (lo == hi || n_left < min_leaf || sorted.size() - n_left < min_leaf) continue;
        const double nl = static_cast<double>(n_left);
        const double nr = total - nl;
        const double impurity =
            (nl * gini(left_pos, nl) + nr * gini(pos - left_pos, nr)) / total;
        if (impurity < best_impurity - 1e-12) {
          best_impurity = impurity;
          best_feature = static_cast<int>(f);
          best_threshold = lo + (hi - lo) / 2.0;
          if (!(best_threshold < hi)) best_threshold = lo;
        }
      }
    }
    if (best_feature < 0) return id;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto i : samples) {
      (d_.x[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right).push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();
    tree_.nodes[id].feature = best_feature;
    tree_.nodes[id].threshold = best_threshold;
    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  const Dataset& d_;
  const Hyperparams& hp_;
  TreeParams tree_;
};

TreeParams fit_tree(const Dataset& d, const Hyperparams& hp) {
  std::vector<std::size_t> features(d.dims());
  std::iota(features.begin(), features.end(), 0);
  std::vector<std::size_t> samples(d.size());
  std::iota(samples.begin(), samples.end(), 0);
  return TreeBuilder(d, hp, std::move(features)).build(std::move(samples));
}

ForestParams fit_forest(const Dataset& d, const Hyperparams& hp, std::uint64_t seed) {
  ForestParams forest;
  const auto n_trees = static_cast<std::size_t>(std::max(hp.forest_trees, 1));
  forest.trees.resize(n_trees);
  const std::size_t dims = d.dims();
  const std::size_t per_tree =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(dims)))), 1, dims);

  auto fit_one = [&](std::size_t t) {
    Rng rng(seed, "tree:" + std::to_string(t));
    std::vector<std::size_t> features(dims);
    std::iota(features.begin(), features.end(), 0);
    rng.shuffle(std::span(features));
    features.resize(per_tree);
    std::sort(features.begin(), features.end());
    std::vector<std::size_t> bootstrap(d.size());
    for (auto& s : bootstrap) s = rng.below(d.size());
    forest.trees[t] = TreeBuilder(d, hp, std::move(features)).build(std::move(bootstrap));
  };

  // Trees own independent streams, so the thread layout cannot change them.
  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::min<std::size_t>(8, n_trees));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < n_trees; t += n_threads) fit_one(t);
      });
    }
  }
  return forest;
}

double tree_score(const TreeParams& tree, std::span<const double> x) {
  std::size_t node = 0;
  while (tree.nodes[node].feature >= 0) {
    const auto& n = tree.nodes[node];
    node = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return tree.nodes[node].value;
}

}  // namespace

ClassifierModel train(std::span<const LabeledExample> examples, ModelType type,
                      const Hyperparams& hyperparams, std::uint64_t seed, const FeatureMask& mask) {
  if (mask.empty()) throw std::invalid_argument("empty feature set");
  std::size_t positives = 0;
  for (const auto& e : examples) {
    if (e.label != 0 && e.label != 1) {
      throw Error(ErrorKind::training_data, "labels must be 0 or 1");
    }
    positives += static_cast<std::size_t>(e.label);
  }
  if (examples.size() < 2 || positives == 0 || positives == examples.size()) {
    throw Error(ErrorKind::training_data,
                "training data must contain both classes (" + std::to_string(positives) +
                    " positive of " + std::to_string(examples.size()) + ")");
  }

  ClassifierModel model;
  model.type = type;
  model.hyperparams = hyperparams;
  model.seed = seed;
  model.mask = mask;
  const Dataset d = make_dataset(examples, mask);
  switch (type) {
    case ModelType::logistic_regression:
      model.parameters = fit_logistic(d, hyperparams);
      break;
    case ModelType::sgd_linear:
      model.parameters = fit_sgd_hinge(d, hyperparams, seed);
      break;
    case ModelType::decision_tree:
      model.parameters = fit_tree(d, hyperparams);
      break;
    case ModelType::random_forest:
      model.parameters = fit_forest(d, hyperparams, seed);
      break;
  }
  return model;
}

Prediction predict(const ClassifierModel& model, const FeatureVector& features, double threshold) {
  if (model.feature_order != feature_order()) {
    throw Error(ErrorKind::model_mismatch, "model feature order does not match the pipeline");
  }
  std::vector<double> x;
  for (auto i : model.mask.active_indices()) x.push_back(features.values[i]);

  double score = 0.0;
  if (const auto* lin = std::get_if<LinearParams>(&model.parameters)) {
    if (lin->weights.size() != x.size()) {
      throw Error(ErrorKind::model_mismatch, "model dimensionality does not match its feature mask");
    }
    score = sigmoid(dot(lin->weights, x) + lin->bias);
  } else if (const auto* tree = std::get_if<TreeParams>(&model.parameters)) {
    score = tree_score(*tree, x);
  } else {
    const auto& forest = std::get<ForestParams>(model.parameters);
    double sum = 0.0;
    for (const auto& t : forest.trees) sum += tree_score(t, x);
    score = forest.trees.empty() ? 0.0 : sum / static_cast<double>(forest.trees.size());
  }
  score = std::clamp(score, 0.0, 1.0);
  return {score, score >= threshold ? 1 : 0};
}

namespace {

json tree_to_json(const TreeParams& tree) {
  json feature = json::array();
  json threshold = json::array();
  json left = json::array();
  json right = json::array();
  json value = json::array();
  for (const auto& n : tree.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
  }
  return {{"features", tree.features}, {"feature", feature}, {"threshold", threshold},
          {"left", left},             {"right", right},     {"value", value}};
}

TreeParams tree_from_json(const json& j) {
  TreeParams tree;
  tree.features = j.at("features").get<std::vector<std::size_t>>();
  const auto& feature = j.at("feature");
  const std::size_t n = feature.size();
  const auto& threshold = j.at("threshold");
  const auto& left = j.at("left");
  const auto& right = j.at("right");
  const auto& value = j.at("value");
  if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n || n == 0) {
    throw Error(ErrorKind::parse, "model: inconsistent tree arrays");
  }
  tree.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = tree.nodes[i];
    node.feature = feature[i].get<int>();
    node.threshold = threshold[i].get<double>();
    node.left = left[i].get<int>();
    node.right = right[i].get<int>();
    node.value = value[i].get<double>();
    if (node.feature >= 0) {
      const auto in_range = [&](int c) { return c > static_cast<int>(i) && c < static_cast<int>(n); };
      if (!in_range(node.left) || !in_range(node.right)) {
        throw Error(ErrorKind::parse, "model: tree child index out of range");
      }
    }
  }
  return tree;
}

json stats_to_json(const NormalizationStats& s) {
  return {{"mean", s.mean}, {"std_dev", s.std_dev}, {"min_z", s.min_z}, {"max_z", s.max_z},
          {"scope", s.scope}};
}

NormalizationStats stats_from_json(const json& j) {
  NormalizationStats s;
  s.mean = j.at("mean").get<double>();
  s.std_dev = j.at("std_dev").get<double>();
  s.min_z = j.at("min_z").get<double>();
  s.max_z = j.at("max_z").get<double>();
  s.scope = j.at("scope").get<std::string>();
  return s;
}

}  // namespace

std::string serialize_model(const ClassifierModel& model) {
  json doc;
  doc["format"] = "etmatch-model";
  doc["version"] = 1;
  doc["model_type"] = model_type_name(model.type);
  doc["seed"] = model.seed;
  const auto& hp = model.hyperparams;
  doc["hyperparams"] = {{"lr_learning_rate", hp.lr_learning_rate},
                        {"lr_epochs", hp.lr_epochs},
                        {"lr_l2", hp.lr_l2},
                        {"sgd_learning_rate", hp.sgd_learning_rate},
                        {"sgd_epochs", hp.sgd_epochs},
                        {"sgd_l2", hp.sgd_l2},
                        {"tree_max_depth", hp.tree_max_depth},
                        {"tree_min_leaf", hp.tree_min_leaf},
                        {"forest_trees", hp.forest_trees}};
  doc["feature_order"] = model.feature_order;
  doc["active_features"] = model.mask.names();
  const auto& fc = model.feature_config;
  doc["feature_config"] = {{"ngram_n", fc.ngram_n},
                           {"lambda", fc.lambda},
                           {"property_match_threshold", fc.property_match_threshold},
                           {"include_inherited", fc.include_inherited},
                           {"theta_mode", "inverse_max_depth"}};
  doc["norm_stats"] = {{"es_h", stats_to_json(model.norm.es_h)},
                       {"es_v", stats_to_json(model.norm.es_v)}};
  json params;
  if (const auto* lin = std::get_if<LinearParams>(&model.parameters)) {
    params = {{"weights", lin->weights}, {"bias", lin->bias}};
  } else if (const auto* tree = std::get_if<TreeParams>(&model.parameters)) {
    params = tree_to_json(*tree);
  } else {
    json trees = json::array();
    for (const auto& t : std::get<ForestParams>(model.parameters).trees) trees.push_back(tree_to_json(t));
    params = {{"trees", trees}};
  }
  doc["parameters"] = std::move(params);
  return doc.dump(1) + "\n";
}

ClassifierModel parse_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, std::string("model: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "etmatch-model") {
      throw Error(ErrorKind::parse, "model: not an etmatch model document");
    }
    ClassifierModel model;
    const auto type_name = doc.at("model_type").get<std::string>();
    auto type = parse_model_type(type_name);
    if (!type) throw Error(ErrorKind::parse, "model: unknown model_type '" + type_name + "'");
    model.type = *type;
    model.seed = doc.at("seed").get<std::uint64_t>();
    const auto& hp = doc.at("hyperparams");
    auto& h = model.hyperparams;
    h.lr_learning_rate = hp.at("lr_learning_rate").get<double>();
    h.lr_epochs = hp.at("lr_epochs").get<int>();
    h.lr_l2 = hp.at("lr_l2").get<double>();
    h.sgd_learning_rate = hp.at("sgd_learning_rate").get<double>();
    h.sgd_epochs = hp.at("sgd_epochs").get<int>();
    h.sgd_l2 = hp.at("sgd_l2").get<double>();
    h.tree_max_depth = hp.at("tree_max_depth").get<int>();
    h.tree_min_leaf = hp.at("tree_min_leaf").get<int>();
    h.forest_trees = hp.at("forest_trees").get<int>();

    model.feature_order = doc.at("feature_order").get<std::vector<std::string>>();
    if (model.feature_order.size() != kFeatureCount) {
      throw Error(ErrorKind::model_mismatch, "model: feature_order must list 7 features");
    }
    model.mask = FeatureMask{};
    for (const auto& name : doc.at("active_features").get<std::vector<std::string>>()) {
      auto f = parse_feature(name);
      if (!f) throw Error(ErrorKind::model_mismatch, "model: unknown feature '" + name + "'");
      model.mask.add(*f);
    }
    const auto& fc = doc.at("feature_config");
    model.feature_config.ngram_n = fc.at("ngram_n").get<int>();
    model.feature_config.lambda = fc.at("lambda").get<double>();
    model.feature_config.property_match_threshold = fc.at("property_match_threshold").get<double>();
    model.feature_config.include_inherited = fc.at("include_inherited").get<bool>();
    model.norm.es_h = stats_from_json(doc.at("norm_stats").at("es_h"));
    model.norm.es_v = stats_from_json(doc.at("norm_stats").at("es_v"));

    const auto& params = doc.at("parameters");
    switch (model.type) {
      case ModelType::logistic_regression:
      case ModelType::sgd_linear: {
        LinearParams lin;
        lin.weights = params.at("weights").get<std::vector<double>>();
        lin.bias = params.at("bias").get<double>();
        model.parameters = std::move(lin);
        break;
      }
      case ModelType::decision_tree:
        model.parameters = tree_from_json(params);
        break;
      case ModelType::random_forest: {
        ForestParams forest;
        for (const auto& t : params.at("trees")) forest.trees.push_back(tree_from_json(t));
        model.parameters = std::move(forest);
        break;
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("model: ") + e.what());
  }
}

void save_model(const ClassifierModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::parse, "cannot write model file '" + path + "'");
  out << serialize_model(model);
}

ClassifierModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

}  // namespace etmatch
