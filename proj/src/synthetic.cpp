#include "etmatch/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "etmatch/error.hpp"
#include "etmatch/rng.hpp"

namespace etmatch {

namespace {

constexpr std::string_view kConsonants = "bdfgklmnprstvz";
constexpr std::string_view kVowels = "aeiou";

class WordSource {
 public:
  explicit WordSource(Rng& rng) : rng_(rng) {}

  std::string fresh(int min_syllables = 2, int max_syllables = 3) {
    while (true) {
      const int n = min_syllables + static_cast<int>(rng_.below(static_cast<std::size_t>(max_syllables - min_syllables + 1)));
      std::string w;
      for (int i = 0; i < n; ++i) {
        w.push_back(kConsonants[rng_.below(kConsonants.size())]);
        w.push_back(kVowels[rng_.below(kVowels.size())]);
      }
      if (used_.insert(w).second) return w;
    }
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

std::string two_digit(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d", i);
  return buf;
}

std::string three_digit(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", i);
  return buf;
}

// Renders "w1 w2" in one of several surface conventions; normalization maps
// all of them back to the same form.
std::string stylize(const std::vector<std::string>& words, std::size_t style) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string w = words[i];
    switch (style % 4) {
      case 0:  // "Title Case"
        w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        if (i > 0) out.push_back(' ');
        break;
      case 1:  // camelCase
        if (i > 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        break;
      case 2:  // PascalCase
        w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
        break;
      default:  // snake_case
        if (i > 0) out.push_back('_');
        break;
    }
    out += w;
  }
  return out;
}

struct BaseEtype {
  std::string modifier;  // may be empty
  std::string head;
  std::vector<int> parents;
  std::vector<int> properties;  // indices into BaseModel::property_words
};

struct BaseModel {
  std::vector<BaseEtype> etypes;
  std::vector<std::string> property_words;
};

std::vector<std::string> label_words(const std::string& modifier, const std::string& head) {
  if (modifier.empty()) return {head};
  return {modifier, head};
}

std::string typo(std::string word, Rng& rng) {
  const std::size_t pos = rng.below(word.size());
  char c;
  do {
    c = static_cast<char>('a' + rng.below(26));
  } while (c == word[pos]);
  word[pos] = c;
  return word;
}

EtypeGraph build_base(const BaseModel& m) {
  std::vector<Property> props;
  for (std::size_t j = 0; j < m.property_words.size(); ++j) {
    props.push_back({"b_p" + three_digit(static_cast<int>(j)), m.property_words[j], 1.0});
  }
  std::vector<Etype> ets;
  for (std::size_t i = 0; i < m.etypes.size(); ++i) {
    const auto& e = m.etypes[i];
    Etype et;
    et.id = "b_e" + two_digit(static_cast<int>(i));
    et.label = stylize(label_words(e.modifier, e.head), i);
    for (int p : e.properties) et.direct_property_ids.insert("b_p" + three_digit(p));
    for (int p : e.parents) et.parent_ids.insert("b_e" + two_digit(p));
    ets.push_back(std::move(et));
  }
  return EtypeGraph("base", std::move(props), std::move(ets));
}

struct CopyResult {
  EtypeGraph graph;
  ReferenceAlignment reference;
};

CopyResult build_copy(const BaseModel& m, int copy_no, const SyntheticOptions& opt, Rng& rng,
                      WordSource& words, std::map<std::string, std::string>& synonyms) {
  const std::string prefix = "c" + std::to_string(copy_no) + "_";
  const auto n = m.etypes.size();

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(std::span(order));
  const auto n_noisy = static_cast<std::size_t>(std::lround(opt.label_noise * static_cast<double>(n)));
  std::vector<int> noise_kind(n, 0);  // 0 clean, 1 synonym, 2 unrelated
  for (std::size_t k = 0; k < n_noisy && k < n; ++k) noise_kind[order[k]] = k % 2 == 0 ? 1 : 2;

  std::vector<std::string> prop_labels = m.property_words;
  std::vector<Property> props;
  if (opt.structure_noise) {
    for (auto& label : prop_labels) {
      if (rng.uniform() < opt.structure_noise_rate) label = typo(label, rng);
    }
  }
  for (std::size_t j = 0; j < prop_labels.size(); ++j) {
    props.push_back({prefix + "p" + three_digit(static_cast<int>(j)), prop_labels[j], 1.0});
  }
  int extra = 0;

  std::vector<Etype> ets;
  ReferenceAlignment ref;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = m.etypes[i];
    Etype et;
    et.id = prefix + "e" + two_digit(static_cast<int>(i));
    std::vector<std::string> lw;
    switch (noise_kind[i]) {
      case 1: {
        auto syn = words.fresh();
        synonyms.emplace(syn, e.head);
        lw = label_words(e.modifier, syn);
        break;
      }
      case 2:
        lw = {words.fresh(3, 4)};
        break;
      default:
        lw = label_words(e.modifier, e.head);
        if (rng.uniform() < opt.typo_rate) lw.back() = typo(lw.back(), rng);
        break;
    }
    et.label = stylize(lw, rng.below(4));
    for (int p : e.properties) {
      if (opt.structure_noise && rng.uniform() < opt.structure_noise_rate) continue;
      et.direct_property_ids.insert(prefix + "p" + three_digit(p));
    }
    if (opt.structure_noise && rng.uniform() < opt.structure_noise_rate) {
      const auto id = prefix + "x" + three_digit(extra++);
      props.push_back({id, words.fresh(), 1.0});
      et.direct_property_ids.insert(id);
    }
    for (int p : e.parents) et.parent_ids.insert(prefix + "e" + two_digit(p));
    ref.pairs.insert({"b_e" + two_digit(static_cast<int>(i)), et.id});
    ets.push_back(std::move(et));
  }
  return {EtypeGraph("copy" + std::to_string(copy_no), std::move(props), std::move(ets)), std::move(ref)};
}

std::string format_vector(const std::string& token, const std::vector<double>& v) {
  std::string line = token;
  char buf[32];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, " %.6f", x);
    line += buf;
  }
  return line + "\n";
}

}  // namespace

SyntheticBundle generate_synthetic(const SyntheticOptions& opt) {
  if (opt.etypes < 1) throw std::invalid_argument("synthetic: need at least one etype");
  if (opt.label_noise < 0.0 || opt.label_noise > 1.0) {
    throw std::invalid_argument("synthetic: label_noise must lie in [0, 1]");
  }
  if (opt.min_own_properties < 1 || opt.max_own_properties < opt.min_own_properties) {
    throw std::invalid_argument("synthetic: invalid own-property range");
  }
  Rng rng(opt.seed, "synthetic");
  WordSource words(rng);

  BaseModel m;
  const int n = opt.etypes;
  const int roots = std::max(1, n / 10);
  std::vector<std::string> modifiers;
  for (int i = 0; i < 8; ++i) modifiers.push_back(words.fresh(2, 2));

  for (int i = 0; i < n; ++i) {
    BaseEtype e;
    e.head = words.fresh();
    if (rng.uniform() < 0.5) e.modifier = modifiers[rng.below(modifiers.size())];
    if (i >= roots) {
      const int p1 = static_cast<int>(rng.below(static_cast<std::size_t>(i)));
      e.parents.push_back(p1);
      if (i > 1 && rng.uniform() < 0.15) {
        const int p2 = static_cast<int>(rng.below(static_cast<std::size_t>(i)));
        if (p2 != p1) e.parents.push_back(p2);
      }
    }
    const int own = opt.min_own_properties +
                    static_cast<int>(rng.below(static_cast<std::size_t>(opt.max_own_properties - opt.min_own_properties + 1)));
    for (int k = 0; k < own; ++k) {
      e.properties.push_back(static_cast<int>(m.property_words.size()));
      m.property_words.push_back(words.fresh());
    }
    m.etypes.push_back(std::move(e));
  }
  // A few generic properties attached directly to scattered etypes.
  for (int k = 0; k < 6; ++k) {
    const int pid = static_cast<int>(m.property_words.size());
    m.property_words.push_back(words.fresh(2, 2));
    const std::size_t holders = 2 + rng.below(3);
    for (std::size_t h = 0; h < holders; ++h) {
      auto& props = m.etypes[rng.below(m.etypes.size())].properties;
      if (std::find(props.begin(), props.end(), pid) == props.end()) props.push_back(pid);
    }
  }

  std::map<std::string, std::string> synonyms;
  SyntheticBundle bundle{build_base(m), build_base(m), build_base(m), {}, {}, {}, {}};
  auto c1 = build_copy(m, 1, opt, rng, words, synonyms);
  auto c2 = build_copy(m, 2, opt, rng, words, synonyms);
  bundle.train_copy = std::move(c1.graph);
  bundle.train_reference = std::move(c1.reference);
  bundle.test_copy = std::move(c2.graph);
  bundle.test_reference = std::move(c2.reference);

  std::string tax = "# synthetic taxonomy\n";
  for (const auto& e : m.etypes) {
    if (e.parents.empty()) tax += e.head + "\tentity\n";
    for (int p : e.parents) tax += e.head + '\t' + m.etypes[static_cast<std::size_t>(p)].head + '\n';
  }
  for (const auto& [syn, head] : synonyms) tax += "synonym\t" + syn + '\t' + head + '\n';
  bundle.taxonomy_tsv = std::move(tax);

  const auto dim = static_cast<std::size_t>(std::max(opt.embedding_dim, 1));
  auto random_vector = [&] {
    std::vector<double> v(dim);
    for (auto& x : v) x = 2.0 * rng.uniform() - 1.0;
    return v;
  };
  std::map<std::string, std::vector<double>> vectors;
  for (const auto& w : modifiers) vectors.emplace(w, random_vector());
  for (const auto& e : m.etypes) vectors.emplace(e.head, random_vector());
  for (const auto& [syn, head] : synonyms) {
    auto v = vectors.at(head);
    for (auto& x : v) x += 0.2 * (2.0 * rng.uniform() - 1.0);
    vectors.emplace(syn, std::move(v));
  }
  std::string emb = std::to_string(vectors.size()) + " " + std::to_string(dim) + "\n";
  for (const auto& [token, v] : vectors) emb += format_vector(token, v);
  bundle.embeddings_txt = std::move(emb);
  return bundle;
}

MatchingTask SyntheticBundle::task() const {
  MatchingTask t;
  t.train.push_back({"train", base, train_copy, train_reference});
  t.test.push_back({"test", base, test_copy, test_reference});
  t.taxonomy = parse_taxonomy(taxonomy_tsv, "taxonomy.tsv");
  t.embeddings = parse_embeddings(embeddings_txt, "embeddings.txt");
  return t;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::parse, "cannot write '" + path.string() + "'");
  out << content;
}

std::string reference_tsv(const ReferenceAlignment& ref) {
  std::string out;
  for (const auto& p : ref.pairs) out += p.left + '\t' + p.right + '\n';
  return out;
}

}  // namespace

void write_synthetic(const SyntheticBundle& bundle, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  fs::create_directories(root);
  write_file(root / "base.json", serialize_graph(bundle.base));
  write_file(root / "copy1.json", serialize_graph(bundle.train_copy));
  write_file(root / "copy2.json", serialize_graph(bundle.test_copy));
  write_file(root / "train_ref.tsv", reference_tsv(bundle.train_reference));
  write_file(root / "test_ref.tsv", reference_tsv(bundle.test_reference));
  write_file(root / "taxonomy.tsv", bundle.taxonomy_tsv);
  write_file(root / "embeddings.txt", bundle.embeddings_txt);
  write_file(root / "task.json",
             "{\n"
             "  \"train\": [{\"name\": \"train\", \"source\": \"base.json\", \"target\": \"copy1.json\", "
             "\"reference\": \"train_ref.tsv\"}],\n"
             "  \"test\": [{\"name\": \"test\", \"source\": \"base.json\", \"target\": \"copy2.json\", "
             "\"reference\": \"test_ref.tsv\"}],\n"
             "  \"taxonomy\": \"taxonomy.tsv\",\n"
             "  \"embeddings\": \"embeddings.txt\"\n"
             "}\n");
}

}  // namespace etmatch
