#include <doctest.h>

#include <algorithm>

#include "etmatch/classifier.hpp"
#include "etmatch/error.hpp"
#include "etmatch/rng.hpp"

using namespace etmatch;

namespace {

LabeledExample example(std::string id, std::initializer_list<double> xs, int label) {
  LabeledExample e;
  e.features.pair = {std::move(id), "t"};
  std::size_t i = 0;
  for (double x : xs) e.features.values[i++] = x;
  e.label = label;
  return e;
}

// 200 points in [0,1]^2 on either side of x0 + x1 = 1 with margin 0.2.
std::vector<LabeledExample> separable(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledExample> out;
  while (out.size() < 200) {
    const double x = rng.uniform(), y = rng.uniform();
    const double side = x + y - 1.0;
    if (std::abs(side) < 0.2) continue;
    out.push_back(example("p" + std::to_string(out.size()), {x, y}, side > 0 ? 1 : 0));
  }
  return out;
}

const FeatureMask kTwo{Feature::ngram, Feature::lcs};

double accuracy(const ClassifierModel& m, std::span<const LabeledExample> data) {
  std::size_t ok = 0;
  for (const auto& e : data) ok += predict(m, e.features).decision == e.label ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(data.size());
}

}  // namespace

TEST_CASE("model type names") {
  for (auto t : {ModelType::random_forest, ModelType::sgd_linear, ModelType::decision_tree,
                 ModelType::logistic_regression}) {
    CHECK(parse_model_type(model_type_name(t)) == t);
  }
  CHECK(parse_model_type("rf") == ModelType::random_forest);
  CHECK(parse_model_type("sgd") == ModelType::sgd_linear);
  CHECK(parse_model_type("dt") == ModelType::decision_tree);
  CHECK(parse_model_type("lr") == ModelType::logistic_regression);
  CHECK(!parse_model_type("svm"));
}

TEST_CASE("logistic regression separates a margin-0.2 set") {
  const auto data = separable(1);
  // the true separator x0 + x1 = 1 classifies everything: the set is separable
  for (const auto& e : data) CHECK(((e.features.values[0] + e.features.values[1] > 1.0) ? 1 : 0) == e.label);
  const auto m = train(data, ModelType::logistic_regression, {}, 3, kTwo);
  CHECK(accuracy(m, data) == 1.0);
}

TEST_CASE("every family fits the separable set well") {
  const auto data = separable(2);
  for (auto t : {ModelType::random_forest, ModelType::sgd_linear, ModelType::decision_tree}) {
    const auto m = train(data, t, {}, 3, kTwo);
    CHECK(accuracy(m, data) >= 0.95);
  }
}

TEST_CASE("decision tree on a 1-feature split at 0.5") {
  std::vector<LabeledExample> data;
  for (double x : {0.1, 0.2, 0.3, 0.45}) data.push_back(example("l" + std::to_string(x), {x}, 0));
  for (double x : {0.55, 0.7, 0.8, 0.9}) data.push_back(example("r" + std::to_string(x), {x}, 1));
  const auto m = train(data, ModelType::decision_tree, {}, 1, FeatureMask{Feature::ngram});
  const auto& tree = std::get<TreeParams>(m.parameters);
  REQUIRE(tree.nodes.size() == 3);
  CHECK(tree.nodes[0].feature == 0);
  CHECK(tree.nodes[0].threshold > 0.45);
  CHECK(tree.nodes[0].threshold < 0.55);
  const auto& left = tree.nodes[static_cast<std::size_t>(tree.nodes[0].left)];
  CHECK(left.feature == -1);
  CHECK(left.value == 0.0);
  CHECK(predict(m, example("q", {0.2}, 0).features).score == left.value);
  CHECK(predict(m, example("q", {0.6}, 0).features).score == 1.0);
}

TEST_CASE("zero-weight logistic model scores 0.5") {
  ClassifierModel m;
  m.mask = FeatureMask::all();
  m.parameters = LinearParams{std::vector<double>(kFeatureCount, 0.0), 0.0};
  FeatureVector fv;
  fv.values = {0.3, 0.9, 0.1, 0.0, 1.0, 0.5, 0.2};
  const auto p = predict(m, fv);
  CHECK(p.score == 0.5);
  CHECK(p.decision == 1);
  CHECK(predict(m, fv, 0.6).decision == 0);
}

TEST_CASE("forest of identical trees scores like one tree") {
  const auto data = separable(4);
  const auto single = train(data, ModelType::decision_tree, {}, 1, kTwo);
  ClassifierModel forest = single;
  forest.type = ModelType::random_forest;
  const auto& tree = std::get<TreeParams>(single.parameters);
  forest.parameters = ForestParams{{tree, tree, tree}};
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    FeatureVector fv;
    fv.values[0] = rng.uniform();
    fv.values[1] = rng.uniform();
    CHECK(predict(forest, fv).score == doctest::Approx(predict(single, fv).score).epsilon(1e-15));
  }
}

TEST_CASE("training errors") {
  std::vector<LabeledExample> one_class{example("a", {0.1}, 1), example("b", {0.2}, 1)};
  try {
    (void)train(one_class, ModelType::logistic_regression, {}, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::training_data);
  }
  const auto data = separable(1);
  CHECK_THROWS_AS((void)train(data, ModelType::logistic_regression, {}, 1, FeatureMask{}), std::invalid_argument);
}

TEST_CASE("feature order mismatch is rejected at prediction") {
  auto m = train(separable(1), ModelType::logistic_regression, {}, 1, kTwo);
  std::swap(m.feature_order[0], m.feature_order[1]);
  try {
    (void)predict(m, FeatureVector{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::model_mismatch);
  }
}

TEST_CASE("training is deterministic, order independent and round-trips through JSON") {
  auto data = separable(5);
  for (auto t : {ModelType::random_forest, ModelType::sgd_linear, ModelType::decision_tree,
                 ModelType::logistic_regression}) {
    const auto m1 = train(data, t, {}, 42, kTwo);
    const auto m2 = train(data, t, {}, 42, kTwo);
    const auto text = serialize_model(m1);
    CHECK(serialize_model(m2) == text);

    auto shuffled = data;
    Rng rng(t == ModelType::sgd_linear ? 1 : 2);
    rng.shuffle(std::span(shuffled));
    CHECK(serialize_model(train(shuffled, t, {}, 42, kTwo)) == text);

    const auto reloaded = parse_model(text);
    CHECK(serialize_model(reloaded) == text);
    for (const auto& e : data) CHECK(predict(reloaded, e.features).score == predict(m1, e.features).score);
  }
}

TEST_CASE("different seeds give different forests") {
  const auto data = separable(6);
  CHECK(serialize_model(train(data, ModelType::random_forest, {}, 1, kTwo)) !=
        serialize_model(train(data, ModelType::random_forest, {}, 2, kTwo)));
}

TEST_CASE("parse_model rejects malformed documents") {
  for (const char* bad : {"", "{}", R"({"format": "etmatch-model", "version": 99})", "[1,2]"}) {
    try {
      (void)parse_model(bad);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::parse);
    }
  }
}
