#include <doctest.h>

#include <stdexcept>

#include "etmatch/classifier.hpp"
#include "etmatch/features.hpp"
#include "etmatch/matcher.hpp"
#include "helpers.hpp"

using namespace etmatch;
using testing::make_graph;

TEST_CASE("feature names and order") {
  CHECK(feature_order() ==
        std::vector<std::string>{"ngram", "lcs", "levenshtein", "wupalmer", "embedding", "es_h", "es_v"});
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const auto f = static_cast<Feature>(i);
    CHECK(parse_feature(feature_name(f)) == f);
  }
  CHECK(parse_feature("ES_h") == Feature::es_h);
  CHECK(!parse_feature("colour"));
}

TEST_CASE("FeatureMask parsing") {
  CHECK(FeatureMask::parse("all") == FeatureMask::all());
  CHECK(FeatureMask::parse("B") == FeatureMask::backbone());
  CHECK(FeatureMask::parse("B+ES_v+ES_h") == FeatureMask::all());
  CHECK(FeatureMask::parse("ngram, lcs").active_indices() == std::vector<std::size_t>{0, 1});
  CHECK(FeatureMask::parse("").empty());
  CHECK_THROWS_AS((void)FeatureMask::parse("ngram,bogus"), std::invalid_argument);
  CHECK(FeatureMask::backbone().names().size() == 5);
}

TEST_CASE("identical labels and properties give string features of 1") {
  const auto g = make_graph("g", {"name", "age"}, {{"Person", {"name", "age"}, {}}, {"Thing", {"name"}, {}}});
  const GraphContext a(g, true), b(g, true);
  const auto fv = featurize_raw({"Person", "Person"}, a, b, {}, {});
  CHECK(fv[Feature::ngram] == 1.0);
  CHECK(fv[Feature::lcs] == 1.0);
  CHECK(fv[Feature::levenshtein] == 1.0);
  CHECK(fv[Feature::wupalmer] == 0.0);
  CHECK(fv[Feature::embedding] == kEmbeddingNoEvidence);
}

TEST_CASE("es_h feature of the toy pair equals the normalized raw value") {
  const auto ga = make_graph("A", {"name", "age"}, {{"Ea", {"name", "age"}, {}}, {"Ex", {"name"}, {}}});
  const auto gb = make_graph("B", {"name", "birthdate"}, {{"Eb", {"name", "birthdate"}, {}}, {"Ey", {}, {}}});
  const GraphContext a(ga, true), b(gb, true);
  const auto pairs = generate_candidates(ga, gb);
  const auto raw = featurize_raw(pairs, a, b, {}, {});
  const auto norm = fit_es_normalization(raw, "toy");
  const auto fv = featurize({"Ea", "Eb"}, a, b, {}, {}, norm);
  double raw_h = 0.0;
  for (const auto& r : raw) {
    if (r.pair == CandidatePair{"Ea", "Eb"}) raw_h = r[Feature::es_h];
  }
  CHECK(raw_h == doctest::Approx(0.4762).epsilon(1e-4));
  CHECK(fv[Feature::es_h] == norm.es_h.apply(raw_h));
}

TEST_CASE("masking zeroes features and shrinks the trained dimensionality") {
  const FeatureMask mask = FeatureMask::backbone();
  std::vector<LabeledExample> examples;
  for (int i = 0; i < 20; ++i) {
    FeatureVector fv;
    fv.pair = {"a" + std::to_string(i), "b"};
    fv.values.fill(i < 10 ? 0.1 : 0.9);
    examples.push_back({fv, i < 10 ? 0 : 1});
  }
  std::vector<FeatureVector> vs;
  for (const auto& e : examples) vs.push_back(e.features);
  apply_mask(vs, mask);
  CHECK(vs[3][Feature::es_h] == 0.0);
  CHECK(vs[3][Feature::es_v] == 0.0);
  CHECK(vs[3][Feature::ngram] == 0.1);
  const auto model = train(examples, ModelType::logistic_regression, {}, 1, mask);
  CHECK(std::get<LinearParams>(model.parameters).weights.size() == 5);
}

TEST_CASE("all seven features are symmetric and in range on random graphs") {
  Rng rng(404);
  const auto tax = parse_taxonomy("etype1\tetype0\netype2\tetype0\netype3\tetype1\n");
  const auto emb = parse_embeddings("etype0 1 0\netype1 0.5 0.5\netype2 -1 0.2\n");
  const Resources res{&tax, &emb};
  for (int trial = 0; trial < 40; ++trial) {
    const auto ga = testing::random_graph(rng, "A"), gb = testing::random_graph(rng, "B");
    const GraphContext a(ga, true), b(gb, true);
    const auto ab = featurize_raw(generate_candidates(ga, gb), a, b, res, {});
    const auto ba = featurize_raw(generate_candidates(gb, ga), b, a, res, {});
    const auto norm = fit_es_normalization(ab, "r");
    for (const auto& fv : ab) {
      const auto rev = featurize_raw({fv.pair.right, fv.pair.left}, b, a, res, {});
      for (std::size_t i = 0; i < kFeatureCount; ++i) {
        CHECK(fv.values[i] == rev.values[i]);
        CHECK(fv.values[i] >= 0.0);
        CHECK(fv.values[i] <= 1.0);
      }
      const auto full = featurize(fv.pair, a, b, res, {}, norm);
      for (double v : full.values) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
    }
    CHECK(ab.size() == ba.size());
  }
}

TEST_CASE("parallel featurization matches serial output") {
  Rng rng(12);
  const auto ga = testing::random_graph(rng, "A", 10), gb = testing::random_graph(rng, "B", 10);
  const GraphContext a(ga, true), b(gb, true);
  const auto pairs = generate_candidates(ga, gb);
  const auto serial = featurize_raw(pairs, a, b, {}, {}, 1);
  const auto parallel = featurize_raw(pairs, a, b, {}, {}, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].pair == parallel[i].pair);
    CHECK(serial[i].values == parallel[i].values);
  }
}
