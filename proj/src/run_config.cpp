#include "etmatch/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "etmatch/error.hpp"

namespace etmatch {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view expected) {
  throw Error(ErrorKind::validation, "config key '" + std::string(key) + "': invalid value '" +
                                         std::string(value) + "' (expected " + std::string(expected) + ")");
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || !std::isfinite(out)) bad(key, v, "a number");
  return out;
}

long long to_int(std::string_view key, std::string_view v) {
  long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad(key, v, "an integer");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, v, "true or false");
}

}  // namespace

void set_config_value(RunConfig& c, std::string_view key, std::string_view value) {
  auto& p = c.pipeline;
  auto& h = p.hyperparams;
  if (key == "lambda") {
    p.features.lambda = to_double(key, value);
  } else if (key == "ngram_n") {
    p.features.ngram_n = static_cast<int>(to_int(key, value));
  } else if (key == "property_match_threshold") {
    p.features.property_match_threshold = to_double(key, value);
  } else if (key == "include_inherited") {
    p.features.include_inherited = to_bool(key, value);
  } else if (key == "theta_mode") {
    if (value != "inverse_max_depth") bad(key, value, "inverse_max_depth");
  } else if (key == "neg_cap_ratio") {
    p.neg_cap_ratio = to_double(key, value);
  } else if (key == "seed") {
    const auto s = to_int(key, value);
    if (s < 0) bad(key, value, "a non-negative integer");
    p.seed = static_cast<std::uint64_t>(s);
  } else if (key == "threshold") {
    p.threshold = to_double(key, value);
  } else if (key == "model_type") {
    auto t = parse_model_type(value);
    if (!t) bad(key, value, "rf, sgd, dt or lr");
    p.model_type = *t;
  } else if (key == "extraction_policy") {
    auto pol = parse_policy(value);
    if (!pol) bad(key, value, "all or greedy-1to1");
    p.policy = *pol;
  } else if (key == "workers") {
    p.workers = static_cast<int>(to_int(key, value));
  } else if (key == "taxonomy") {
    c.taxonomy = std::string(value);
  } else if (key == "embeddings") {
    c.embeddings = std::string(value);
  } else if (key == "strict") {
    c.strict = to_bool(key, value);
  } else if (key == "lr_learning_rate") {
    h.lr_learning_rate = to_double(key, value);
  } else if (key == "lr_epochs") {
    h.lr_epochs = static_cast<int>(to_int(key, value));
  } else if (key == "lr_l2") {
    h.lr_l2 = to_double(key, value);
  } else if (key == "sgd_learning_rate") {
    h.sgd_learning_rate = to_double(key, value);
  } else if (key == "sgd_epochs") {
    h.sgd_epochs = static_cast<int>(to_int(key, value));
  } else if (key == "sgd_l2") {
    h.sgd_l2 = to_double(key, value);
  } else if (key == "tree_max_depth") {
    h.tree_max_depth = static_cast<int>(to_int(key, value));
  } else if (key == "tree_min_leaf") {
    h.tree_min_leaf = static_cast<int>(to_int(key, value));
  } else if (key == "forest_trees") {
    h.forest_trees = static_cast<int>(to_int(key, value));
  } else {
    throw Error(ErrorKind::validation, "unknown config key '" + std::string(key) + "'");
  }
}

void validate(const RunConfig& c) {
  const auto& p = c.pipeline;
  const auto& h = p.hyperparams;
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw Error(ErrorKind::validation, std::string("config: ") + msg);
  };
  require(p.features.lambda > 0.0, "lambda must be positive");
  require(p.features.ngram_n >= 2, "ngram_n must be at least 2");
  require(p.features.property_match_threshold > 0.0 && p.features.property_match_threshold <= 1.0,
          "property_match_threshold must lie in (0, 1]");
  require(p.neg_cap_ratio > 0.0, "neg_cap_ratio must be positive");
  require(p.threshold >= 0.0 && p.threshold <= 1.0, "threshold must lie in [0, 1]");
  require(p.workers >= 1, "workers must be at least 1");
  require(h.lr_learning_rate > 0.0 && h.sgd_learning_rate > 0.0, "learning rates must be positive");
  require(h.lr_epochs >= 1 && h.sgd_epochs >= 1, "epoch counts must be at least 1");
  require(h.lr_l2 >= 0.0 && h.sgd_l2 >= 0.0, "L2 penalties must be non-negative");
  require(h.tree_max_depth >= 1 && h.tree_min_leaf >= 1, "tree limits must be at least 1");
  require(h.forest_trees >= 1, "forest_trees must be at least 1");
}

RunConfig parse_run_config(std::string_view text, std::string_view source_name) {
  RunConfig c;
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string locus = std::string(source_name) + ": line " + std::to_string(lineno);
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::validation, locus + ": expected 'key = value'");
    }
    try {
      set_config_value(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
      validate(c);
    } catch (const Error& e) {
      throw Error(e.kind(), locus + ": " + e.what());
    }
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path);
}

std::string describe_defaults() {
  const RunConfig c;
  const auto& p = c.pipeline;
  const auto& h = p.hyperparams;
  std::ostringstream out;
  out << "lambda = " << p.features.lambda << "\n"
      << "ngram_n = " << p.features.ngram_n << "\n"
      << "property_match_threshold = " << p.features.property_match_threshold << "\n"
      << "include_inherited = " << (p.features.include_inherited ? "true" : "false") << "\n"
      << "theta_mode = inverse_max_depth\n"
      << "neg_cap_ratio = " << p.neg_cap_ratio << "\n"
      << "seed = " << p.seed << "\n"
      << "threshold = " << p.threshold << "\n"
      << "model_type = lr\n"
      << "extraction_policy = all\n"
      << "workers = " << p.workers << "\n"
      << "strict = true\n"
      << "lr_learning_rate = " << h.lr_learning_rate << "\n"
      << "lr_epochs = " << h.lr_epochs << "\n"
      << "lr_l2 = " << h.lr_l2 << "\n"
      << "sgd_learning_rate = " << h.sgd_learning_rate << "\n"
      << "sgd_epochs = " << h.sgd_epochs << "\n"
      << "sgd_l2 = " << h.sgd_l2 << "\n"
      << "tree_max_depth = " << h.tree_max_depth << "\n"
      << "tree_min_leaf = " << h.tree_min_leaf << "\n"
      << "forest_trees = " << h.forest_trees << "\n";
  return out.str();
}

}  // namespace etmatch
