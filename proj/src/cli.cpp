#include "etmatch/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "etmatch/error.hpp"
#include "etmatch/run_config.hpp"
#include "etmatch/synthetic.hpp"

namespace etmatch {

namespace {

namespace fs = std::filesystem;

struct CommonFlags {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::optional<std::uint64_t> seed;
  std::string model_type;
  std::string policy;
  std::optional<double> threshold;
  std::string taxonomy;
  std::string embeddings;
  bool lenient = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "Flat key = value configuration file");
  cmd->add_option("--set", f.overrides, "Override one config key (key=value); repeatable");
  cmd->add_option("--seed", f.seed, "Master random seed");
  cmd->add_option("--taxonomy", f.taxonomy, "Taxonomy TSV for Wu-Palmer similarity");
  cmd->add_option("--embeddings", f.embeddings, "Word-vector text file");
  cmd->add_flag("--lenient", f.lenient, "Ignore unknown graph fields with a warning");
}

RunConfig resolve_config(const CommonFlags& f) {
  RunConfig config;
  if (!f.config_path.empty()) {
    config = load_run_config(f.config_path);
    const auto base = fs::path(f.config_path).parent_path();
    for (auto* path : {&config.taxonomy, &config.embeddings}) {
      if (!path->empty() && fs::path(*path).is_relative()) *path = (base / *path).string();
    }
  }
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::validation, "--set expects key=value, got '" + kv + "'");
    set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) config.pipeline.seed = *f.seed;
  if (!f.model_type.empty()) set_config_value(config, "model_type", f.model_type);
  if (!f.policy.empty()) set_config_value(config, "extraction_policy", f.policy);
  if (f.threshold) config.pipeline.threshold = *f.threshold;
  if (!f.taxonomy.empty()) config.taxonomy = f.taxonomy;
  if (!f.embeddings.empty()) config.embeddings = f.embeddings;
  if (f.lenient) config.strict = false;
  validate(config);
  return config;
}

GraphOptions graph_options(const RunConfig& config, std::ostream& err) {
  GraphOptions opts;
  opts.strict = config.strict;
  opts.warn = [&err](std::string_view msg) { err << "warning: " << msg << '\n'; };
  return opts;
}

struct LoadedResources {
  std::optional<Taxonomy> taxonomy;
  std::optional<EmbeddingTable> embeddings;

  [[nodiscard]] Resources view() const {
    return {taxonomy ? &*taxonomy : nullptr, embeddings ? &*embeddings : nullptr};
  }
};

LoadedResources load_resources(const RunConfig& config) {
  LoadedResources r;
  if (!config.taxonomy.empty()) r.taxonomy = load_taxonomy(config.taxonomy);
  if (!config.embeddings.empty()) r.embeddings = load_embeddings(config.embeddings);
  return r;
}

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::parse, "cannot write '" + path + "'");
  file << content;
}

ReportFormat parse_format(const std::string& s) {
  if (s == "table") return ReportFormat::text_table;
  if (s == "json") return ReportFormat::machine_json;
  throw Error(ErrorKind::validation, "--format must be table or json");
}

FeatureMask parse_mask(const std::string& s) {
  try {
    return FeatureMask::parse(s);
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorKind::validation, e.what());
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entity-type graph matcher: property-based similarity features, binary classifiers, "
               "evaluation and ablation."};
  app.require_subcommand(1);
  app.footer("Configuration keys and defaults:\n" + describe_defaults());

  CommonFlags flags;

  // validate
  std::string graph_path;
  auto* validate_cmd = app.add_subcommand("validate", "Load and validate an etype-graph file");
  validate_cmd->add_option("graph", graph_path, "Etype-graph JSON file")->required();
  validate_cmd->add_flag("--lenient", flags.lenient, "Ignore unknown fields with a warning");

  // train
  std::string task_path;
  std::string source_path;
  std::string target_path;
  std::string reference_path;
  std::string model_path;
  std::string mask_spec = "all";
  auto* train_cmd = app.add_subcommand("train", "Train a matcher on graph pairs with reference alignments");
  add_common(train_cmd, flags);
  train_cmd->add_option("--task", task_path, "Task file; its train pairs are used");
  train_cmd->add_option("--source", source_path, "Source graph");
  train_cmd->add_option("--target", target_path, "Target graph");
  train_cmd->add_option("--reference", reference_path, "Reference alignment (TSV or OAEI XML)");
  train_cmd->add_option("-o,--out", model_path, "Model file to write")->required();
  train_cmd->add_option("--model-type", flags.model_type, "rf, sgd, dt or lr");
  train_cmd->add_option("--mask", mask_spec, "Features to train on (comma list, 'all', 'backbone')");

  // match
  std::string out_path;
  auto* match_cmd = app.add_subcommand("match", "Score every candidate pair of two graphs");
  add_common(match_cmd, flags);
  match_cmd->add_option("--source", source_path, "Source graph")->required();
  match_cmd->add_option("--target", target_path, "Target graph")->required();
  match_cmd->add_option("--model", model_path, "Model file")->required();
  match_cmd->add_option("-o,--out", out_path, "Alignment TSV (default: stdout)");
  match_cmd->add_option("--policy", flags.policy, "all or greedy-1to1");
  match_cmd->add_option("--threshold", flags.threshold, "Decision threshold");

  // eval
  std::string predicted_path;
  std::string format = "table";
  auto* eval_cmd = app.add_subcommand("eval", "Score a predicted alignment against a reference");
  eval_cmd->add_option("--predicted", predicted_path, "Predicted alignment (TSV or OAEI XML)")->required();
  eval_cmd->add_option("--reference", reference_path, "Reference alignment (TSV or OAEI XML)")->required();
  eval_cmd->add_option("--format", format, "table or json");
  eval_cmd->add_option("-o,--out", out_path, "Report file (default: stdout)");

  // ablate
  auto* ablate_cmd = app.add_subcommand("ablate", "Run the four-variant ES ablation on a task");
  add_common(ablate_cmd, flags);
  ablate_cmd->add_option("--task", task_path, "Task file")->required();
  ablate_cmd->add_option("--model-type", flags.model_type, "rf, sgd, dt or lr");
  ablate_cmd->add_option("--policy", flags.policy, "all or greedy-1to1");
  ablate_cmd->add_option("--threshold", flags.threshold, "Decision threshold");
  ablate_cmd->add_option("--format", format, "table or json");
  ablate_cmd->add_option("-o,--out", out_path, "Report file (default: stdout)");

  // synth
  std::string out_dir;
  SyntheticOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic matching task");
  synth_cmd->add_option("--out-dir", out_dir, "Directory to write into")->required();
  synth_cmd->add_option("--etypes", synth.etypes, "Etypes in the base graph");
  synth_cmd->add_option("--label-noise", synth.label_noise, "Fraction of relabelled etypes per copy");
  synth_cmd->add_flag("--structure-noise", synth.structure_noise, "Perturb property structure");
  synth_cmd->add_option("--seed", synth.seed, "Generator seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate_cmd) {
      RunConfig config;
      config.strict = !flags.lenient;
      const auto graph = load_graph(graph_path, graph_options(config, err));
      out << "graph_id: " << graph.id() << "\n"
          << "etypes: " << graph.etypes().size() << "\n"
          << "properties: " << graph.properties().size() << "\n"
          << "max_depth: " << graph.max_depth() << "\n";
      return 0;
    }

    if (*train_cmd) {
      const auto config = resolve_config(flags);
      const auto opts = graph_options(config, err);
      std::vector<GraphPair> pairs;
      LoadedResources resources = load_resources(config);
      if (!task_path.empty()) {
        auto task = load_task(task_path, opts);
        pairs = std::move(task.train);
        if (!resources.taxonomy) resources.taxonomy = std::move(task.taxonomy);
        if (!resources.embeddings) resources.embeddings = std::move(task.embeddings);
      }
      if (!source_path.empty() || !target_path.empty() || !reference_path.empty()) {
        if (source_path.empty() || target_path.empty() || reference_path.empty()) {
          throw Error(ErrorKind::validation, "--source, --target and --reference go together");
        }
        GraphPair gp{"cli", load_graph(source_path, opts), load_graph(target_path, opts),
                     load_alignment(reference_path, opts.warn)};
        check_resolvable(gp.reference, gp.source, gp.target, opts.warn);
        pairs.push_back(std::move(gp));
      }
      if (pairs.empty()) throw Error(ErrorKind::validation, "train needs --task or --source/--target/--reference");
      TrainingSummary summary;
      const auto model = train_on_pairs(pairs, resources.view(), config.pipeline, parse_mask(mask_spec), &summary);
      save_model(model, model_path);
      out << "trained " << model_type_name(model.type) << " on " << pairs.size() << " pair(s): "
          << summary.candidates << " candidates (" << summary.positives << " positive, "
          << summary.negatives << " negative), " << summary.balanced << " balanced examples\n"
          << "features: ";
      const auto names = model.mask.names();
      for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
      out << "\nmodel written to " << model_path << "\n";
      return 0;
    }

    if (*match_cmd) {
      const auto config = resolve_config(flags);
      const auto opts = graph_options(config, err);
      const auto model = load_model(model_path);
      const auto source = load_graph(source_path, opts);
      const auto target = load_graph(target_path, opts);
      const auto resources = load_resources(config);
      const auto scored = score_candidates(model, source, target, resources.view(),
                                           config.pipeline.threshold, config.pipeline.workers);
      const auto alignment = extract_alignment(scored, config.pipeline.policy, config.pipeline.threshold);
      write_output(out_path, format_alignment_tsv(scored, alignment), out);
      if (!out_path.empty() && out_path != "-") {
        out << "scored " << scored.size() << " candidates, " << alignment.entries.size()
            << " accepted (" << policy_name(config.pipeline.policy) << "), written to " << out_path << "\n";
      }
      return 0;
    }

    if (*eval_cmd) {
      const auto fmt = parse_format(format);
      auto warn = [&err](std::string_view msg) { err << "warning: " << msg << '\n'; };
      const auto predicted = load_alignment(predicted_path, warn);
      const auto reference = load_alignment(reference_path, warn);
      const std::vector<CandidatePair> pred(predicted.pairs.begin(), predicted.pairs.end());
      const NamedReport row{fs::path(predicted_path).filename().string(), score(pred, reference), std::nullopt};
      write_output(out_path, emit_report(std::span(&row, 1), fmt), out);
      return 0;
    }

    if (*ablate_cmd) {
      const auto fmt = parse_format(format);
      const auto config = resolve_config(flags);
      auto task = load_task(task_path, graph_options(config, err));
      auto resources = load_resources(config);
      if (resources.taxonomy) task.taxonomy = std::move(resources.taxonomy);
      if (resources.embeddings) task.embeddings = std::move(resources.embeddings);
      const auto variants = standard_ablation_variants();
      const auto rows = run_ablation(task, variants, config.pipeline);
      write_output(out_path, emit_report(rows, fmt), out);
      return 0;
    }

    if (*synth_cmd) {
      const auto bundle = generate_synthetic(synth);
      write_synthetic(bundle, out_dir);
      out << "synthetic task written to " << out_dir << "/task.json\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace etmatch
