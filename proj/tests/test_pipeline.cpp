#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "etmatch/error.hpp"
#include "etmatch/pipeline.hpp"
#include "etmatch/synthetic.hpp"

using namespace etmatch;

namespace {

SyntheticBundle small_bundle(bool structure_noise = false) {
  SyntheticOptions opts;
  opts.etypes = 12;
  opts.structure_noise = structure_noise;
  return generate_synthetic(opts);
}

}  // namespace

TEST_CASE("synthetic generator is deterministic and self-consistent") {
  const auto a = small_bundle(), b = small_bundle();
  CHECK(serialize_graph(a.base) == serialize_graph(b.base));
  CHECK(serialize_graph(a.test_copy) == serialize_graph(b.test_copy));
  CHECK(a.taxonomy_tsv == b.taxonomy_tsv);
  CHECK(a.embeddings_txt == b.embeddings_txt);
  CHECK(a.base.etypes().size() == 12);
  CHECK(a.train_reference.pairs.size() == 12);
  CHECK(a.test_reference.pairs.size() == 12);
  CHECK(check_resolvable(a.test_reference, a.base, a.test_copy) == 0);
  SyntheticOptions other;
  other.etypes = 12;
  other.seed = 8;
  CHECK(serialize_graph(generate_synthetic(other).base) != serialize_graph(a.base));
}

TEST_CASE("train_on_pairs and score_candidates") {
  const auto task = small_bundle().task();
  PipelineConfig config;
  TrainingSummary summary;
  const auto model = train_on_pairs(task.train, task.resources(), config, FeatureMask::all(), &summary);
  CHECK(summary.candidates == 144);
  CHECK(summary.positives == 12);
  CHECK(summary.negatives == 132);
  CHECK(summary.balanced == 48);
  CHECK(model.norm.es_h.scope == "train:" + task.train[0].name);

  const auto& test = task.test[0];
  const auto scored = score_candidates(model, test.source, test.target, task.resources(), 0.5);
  CHECK(scored.size() == 144);
  const auto al = extract_alignment(scored, ExtractionPolicy::all_positive, 0.5);
  const auto tsv = format_alignment_tsv(scored, al);
  CHECK(std::count(tsv.begin(), tsv.end(), '\n') == 144);
  const auto back = parse_alignment(tsv);
  CHECK(back.pairs.size() == al.entries.size());

  auto broken = model;
  broken.feature_order.pop_back();
  CHECK_THROWS_AS((void)score_candidates(broken, test.source, test.target, task.resources(), 0.5), Error);
}

TEST_CASE("training without positives is a training-data error") {
  auto task = small_bundle().task();
  task.train[0].reference.pairs = {{"nope", "nada"}};
  try {
    (void)train_on_pairs(task.train, task.resources(), PipelineConfig{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::training_data);
  }
}

TEST_CASE("ablation rows, order and determinism") {
  const auto task = small_bundle(true).task();
  const auto variants = standard_ablation_variants();
  PipelineConfig config;
  const auto rows = run_ablation(task, variants, config);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].name == "B");
  CHECK(rows[1].name == "B+ES_v");
  CHECK(rows[2].name == "B+ES_h");
  CHECK(rows[3].name == "B+ES_v+ES_h");
  const auto again = run_ablation(task, variants, config);
  CHECK(emit_report(rows, ReportFormat::machine_json) == emit_report(again, ReportFormat::machine_json));

  const std::vector<AblationVariant> bad{{"none", FeatureMask{}}};
  try {
    (void)run_ablation(task, bad, config);
    FAIL("expected an error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("empty feature set") != std::string::npos);
  }
}

TEST_CASE("ablation with every model family") {
  const auto task = small_bundle().task();
  const auto variants = standard_ablation_variants();
  for (auto t : {ModelType::random_forest, ModelType::sgd_linear, ModelType::decision_tree}) {
    PipelineConfig config;
    config.model_type = t;
    config.hyperparams.forest_trees = 10;
    const auto rows = run_ablation(task, std::span(variants).first(1), config);
    CHECK(rows[0].report.f1 > 0.5);
  }
}

TEST_CASE("written task files load back") {
  const auto bundle = small_bundle();
  const auto dir = std::filesystem::temp_directory_path() / "etmatch_pipeline_task";
  std::filesystem::remove_all(dir);
  write_synthetic(bundle, dir.string());
  const auto task = load_task((dir / "task.json").string());
  REQUIRE(task.train.size() == 1);
  REQUIRE(task.test.size() == 1);
  CHECK(task.taxonomy.has_value());
  CHECK(task.embeddings.has_value());
  CHECK(serialize_graph(task.test[0].target) == serialize_graph(bundle.test_copy));
  CHECK(task.test[0].reference.pairs == bundle.test_reference.pairs);
  std::filesystem::remove_all(dir);
}
