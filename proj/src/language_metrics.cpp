#include "etmatch/language_metrics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "etmatch/error.hpp"
#include "etmatch/text.hpp"

namespace etmatch {

namespace {

std::string read_file(const std::string& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open " + std::string(what) + " file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    f(++lineno, line);
    if (end == text.size()) break;
    start = end + 1;
  }
}

}  // namespace

Taxonomy::Taxonomy(const std::vector<std::pair<std::string, std::string>>& edges,
                   const std::vector<std::pair<std::string, std::string>>& synonyms,
                   const std::vector<std::string>& isolated) {
  std::map<std::string, std::set<std::string>> parents;
  for (const auto& c : isolated) parents[normalize_label(c)];
  for (const auto& [child_raw, parent_raw] : edges) {
    auto child = normalize_label(child_raw);
    auto parent = normalize_label(parent_raw);
    if (child == parent) throw Error(ErrorKind::validation, "taxonomy cycle at '" + child + "'");
    parents[child].insert(parent);
    parents[parent];
  }
  parents.erase(std::string{});

  std::map<std::string, std::vector<std::string>> children;
  std::map<std::string, std::size_t> pending;
  std::deque<std::string> ready;
  for (const auto& [c, ps] : parents) {
    pending[c] = ps.size();
    for (const auto& p : ps) children[p].push_back(c);
    if (ps.empty()) ready.push_back(c);
  }
  while (!ready.empty()) {
    auto cur = std::move(ready.front());
    ready.pop_front();
    const auto& ps = parents[cur];
    int d = ps.empty() ? 1 : INT32_MAX;
    std::set<std::string> anc{cur};
    for (const auto& p : ps) {
      d = std::min(d, depth_.at(p) + 1);
      const auto& pa = ancestors_.at(p);
      anc.insert(pa.begin(), pa.end());
    }
    depth_.emplace(cur, d);
    ancestors_.emplace(cur, std::move(anc));
    for (const auto& ch : children[cur]) {
      if (--pending[ch] == 0) ready.push_back(ch);
    }
  }
  if (depth_.size() != parents.size()) {
    for (const auto& [c, n] : pending) {
      if (n > 0) throw Error(ErrorKind::validation, "taxonomy cycle involving '" + c + "'");
    }
  }

  for (const auto& [term_raw, concept_raw] : synonyms) {
    auto concept_id = normalize_label(concept_raw);
    if (!contains(concept_id)) {
      throw Error(ErrorKind::validation, "synonym '" + term_raw + "' targets unknown concept '" +
                                             concept_raw + "'");
    }
    synonyms_.emplace(normalize_label(term_raw), std::move(concept_id));
  }
}

bool Taxonomy::contains(std::string_view concept_id) const {
  return depth_.find(concept_id) != depth_.end();
}

int Taxonomy::depth(std::string_view concept_id) const {
  auto it = depth_.find(concept_id);
  if (it == depth_.end()) throw std::out_of_range("unknown concept '" + std::string(concept_id) + "'");
  return it->second;
}

const std::set<std::string>& Taxonomy::ancestors(std::string_view concept_id) const {
  auto it = ancestors_.find(concept_id);
  if (it == ancestors_.end()) throw std::out_of_range("unknown concept '" + std::string(concept_id) + "'");
  return it->second;
}

Taxonomy parse_taxonomy(std::string_view text, std::string_view source_name) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::pair<std::string, std::string>> synonyms;
  std::vector<std::string> isolated;
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    if (line.empty() || line.front() == '#') return;
    auto fields = split(line, '\t');
    if (fields.size() == 1) {
      isolated.emplace_back(fields[0]);
    } else if (fields.size() == 2) {
      edges.emplace_back(std::string(fields[0]), std::string(fields[1]));
    } else if (fields.size() == 3 && fields[0] == "synonym") {
      synonyms.emplace_back(std::string(fields[1]), std::string(fields[2]));
    } else {
      throw Error(ErrorKind::parse, std::string(source_name) + ": line " + std::to_string(lineno) +
                                        ": expected 'child<TAB>parent' or "
                                        "'synonym<TAB>term<TAB>concept'");
    }
  });
  try {
    return Taxonomy(edges, synonyms, isolated);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(source_name) + ": " + e.what());
  }
}

Taxonomy load_taxonomy(const std::string& path) {
  return parse_taxonomy(read_file(path, "taxonomy"), path);
}

std::optional<std::string> map_label_to_concept(const Taxonomy& tax, std::string_view label) {
  if (tax.contains(label)) return std::string(label);
  if (auto it = tax.synonyms_.find(std::string(label)); it != tax.synonyms_.end()) return it->second;
  return std::nullopt;
}

double wu_palmer_sim(const Taxonomy& tax, std::string_view c1, std::string_view c2) {
  if (!tax.contains(c1) || !tax.contains(c2)) return 0.0;
  if (c1 == c2) return 1.0;
  const auto& a1 = tax.ancestors(c1);
  const auto& a2 = tax.ancestors(c2);
  int deepest = 0;
  for (const auto& c : a1) {
    if (a2.count(c)) deepest = std::max(deepest, tax.depth(c));
  }
  if (deepest == 0) return 0.0;
  return 2.0 * deepest / static_cast<double>(tax.depth(c1) + tax.depth(c2));
}

namespace {

std::optional<std::string> resolve_label(const Taxonomy& tax, std::string_view label) {
  if (auto c = map_label_to_concept(tax, label)) return c;
  auto toks = tokens(label);
  if (toks.size() > 1) return map_label_to_concept(tax, toks.back());
  return std::nullopt;
}

}  // namespace

double wu_palmer_label_sim(const Taxonomy& tax, std::string_view label_a, std::string_view label_b) {
  auto ca = resolve_label(tax, label_a);
  auto cb = resolve_label(tax, label_b);
  if (!ca || !cb) return 0.0;
  return wu_palmer_sim(tax, *ca, *cb);
}

EmbeddingTable::EmbeddingTable(std::size_t dimension,
                               std::vector<std::pair<std::string, std::vector<double>>> rows)
    : dimension_(dimension) {
  if (dimension_ == 0) throw Error(ErrorKind::validation, "embedding dimension must be positive");
  for (auto& [token, vec] : rows) {
    if (vec.size() != dimension_) {
      throw Error(ErrorKind::validation, "embedding for '" + token + "' has " +
                                             std::to_string(vec.size()) + " components, expected " +
                                             std::to_string(dimension_));
    }
    for (double v : vec) {
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::validation, "embedding for '" + token + "' has a non-finite component");
      }
    }
    std::string key = token;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c); });
    vectors_.try_emplace(std::move(key), std::move(vec));
  }
}

const std::vector<double>* EmbeddingTable::find(std::string_view token) const {
  auto it = vectors_.find(std::string(token));
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable parse_embeddings(std::string_view text, std::string_view source_name) {
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  std::size_t dimension = 0;
  auto fail = [&](std::size_t lineno, const std::string& msg) -> void {
    throw Error(ErrorKind::parse,
                std::string(source_name) + ": line " + std::to_string(lineno) + ": " + msg);
  };
  for_each_line(text, [&](std::size_t lineno, std::string_view line) {
    std::vector<std::string_view> fields;
    for (auto f : split(line, ' ')) {
      if (!f.empty()) fields.push_back(f);
    }
    if (fields.empty()) return;
    if (lineno == 1 && fields.size() == 2) {
      std::size_t count = 0;
      std::size_t dim = 0;
      auto r1 = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), count);
      auto r2 = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), dim);
      if (r1.ec == std::errc{} && r2.ec == std::errc{} &&
          r1.ptr == fields[0].data() + fields[0].size() &&
          r2.ptr == fields[1].data() + fields[1].size()) {
        dimension = dim;
        return;
      }
    }
    if (fields.size() < 2) fail(lineno, "expected 'token v1 ... vd'");
    std::vector<double> vec;
    vec.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double v = 0.0;
      auto res = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), v);
      if (res.ec != std::errc{} || res.ptr != fields[i].data() + fields[i].size() || !std::isfinite(v)) {
        fail(lineno, "invalid component '" + std::string(fields[i]) + "'");
      }
      vec.push_back(v);
    }
    if (dimension == 0) dimension = vec.size();
    if (vec.size() != dimension) {
      fail(lineno, "expected " + std::to_string(dimension) + " components, found " +
                       std::to_string(vec.size()));
    }
    rows.emplace_back(std::string(fields[0]), std::move(vec));
  });
  if (dimension == 0) throw Error(ErrorKind::parse, std::string(source_name) + ": no vectors found");
  return EmbeddingTable(dimension, std::move(rows));
}

EmbeddingTable load_embeddings(const std::string& path) {
  return parse_embeddings(read_file(path, "embedding"), path);
}

namespace {

bool mean_vector(const EmbeddingTable& table, std::string_view label, std::vector<double>& out) {
  out.assign(table.dimension(), 0.0);
  std::size_t hits = 0;
  for (const auto& tok : tokens(label)) {
    if (const auto* v = table.find(tok)) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += (*v)[i];
      ++hits;
    }
  }
  if (hits == 0) return false;
  for (auto& x : out) x /= static_cast<double>(hits);
  return true;
}

}  // namespace

double embedding_sim(const EmbeddingTable& table, std::string_view a, std::string_view b) {
  if (table.dimension() == 0) return kEmbeddingNoEvidence;
  std::vector<double> va;
  std::vector<double> vb;
  if (!mean_vector(table, a, va) || !mean_vector(table, b, vb)) return kEmbeddingNoEvidence;
  if (a == b) return 1.0;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i) {
    dot += va[i] * vb[i];
    na += va[i] * va[i];
    nb += vb[i] * vb[i];
  }
  if (na == 0.0 || nb == 0.0) return kEmbeddingNoEvidence;
  const double cosine = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  return (cosine + 1.0) / 2.0;
}

}  // namespace etmatch
