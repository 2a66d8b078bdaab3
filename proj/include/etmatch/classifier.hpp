#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "etmatch/features.hpp"

namespace etmatch {

enum class ModelType { random_forest, sgd_linear, decision_tree, logistic_regression };

[[nodiscard]] std::string_view model_type_name(ModelType type);
/// Accepts the full names and the short forms rf, sgd, dt, lr.
[[nodiscard]] std::optional<ModelType> parse_model_type(std::string_view name);

struct Hyperparams {
  // logistic regression, full-batch gradient descent on log-loss
  double lr_learning_rate = 0.1;
  int lr_epochs = 500;
  double lr_l2 = 1e-4;
  // linear model, hinge loss, per-example updates
  double sgd_learning_rate = 0.01;
  int sgd_epochs = 20;
  double sgd_l2 = 1e-4;
  // CART
  int tree_max_depth = 8;
  int tree_min_leaf = 2;
  // bagging
  int forest_trees = 100;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

struct LabeledExample {
  FeatureVector features;
  int label = 0;  // 1 = matching pair
};

struct LinearParams {
  std::vector<double> weights;  // one per active feature
  double bias = 0.0;
};

struct TreeNode {
  int feature = -1;  // index into the active features; -1 marks a leaf
  double threshold = 0.0;
  int left = -1;   // taken when x[feature] <= threshold
  int right = -1;
  double value = 0.0;  // fraction of class-1 training samples reaching the node
};

struct TreeParams {
  std::vector<std::size_t> features;  // active-feature indices the tree may split on
  std::vector<TreeNode> nodes;        // nodes[0] is the root
};

struct ForestParams {
  std::vector<TreeParams> trees;
};

using ModelParameters = std::variant<LinearParams, TreeParams, ForestParams>;

/// A fitted classifier plus everything needed to featurize consistently at
/// inference time.
struct ClassifierModel {
  ModelType type = ModelType::logistic_regression;
  Hyperparams hyperparams;
  std::uint64_t seed = 0;
  std::vector<std::string> feature_order = etmatch::feature_order();
  FeatureMask mask = FeatureMask::all();
  FeatureConfig feature_config;
  EsNormalization norm;
  ModelParameters parameters;
};

/// Fits one model. Examples are put in a canonical order first, so the
/// result depends only on the example multiset and the seed.
/// Throws Error(training_data) unless both classes are present, and
/// std::invalid_argument on an empty mask.
[[nodiscard]] ClassifierModel train(std::span<const LabeledExample> examples, ModelType type,
                                    const Hyperparams& hyperparams, std::uint64_t seed,
                                    const FeatureMask& mask = FeatureMask::all());

struct Prediction {
  double score = 0.0;  // class-1 probability estimate in [0,1]
  int decision = 0;
};

inline constexpr double kDefaultThreshold = 0.5;

/// Throws Error(model_mismatch) if the model's feature order differs from
/// the pipeline's.
[[nodiscard]] Prediction predict(const ClassifierModel& model, const FeatureVector& features,
                                 double threshold = kDefaultThreshold);

[[nodiscard]] std::string serialize_model(const ClassifierModel& model);
/// Throws Error(parse) on malformed documents.
[[nodiscard]] ClassifierModel parse_model(std::string_view text);
void save_model(const ClassifierModel& model, const std::string& path);
[[nodiscard]] ClassifierModel load_model(const std::string& path);

}  // namespace etmatch
