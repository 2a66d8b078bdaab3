#include "etmatch/etype_graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "etmatch/error.hpp"
#include "etmatch/text.hpp"

namespace etmatch {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& graph_id, const std::string& msg) {
  throw Error(ErrorKind::validation, "graph '" + graph_id + "': " + msg);
}

template <typename T>
const T* find_by_id(const std::vector<T>& items, std::string_view id) {
  auto it = std::lower_bound(items.begin(), items.end(), id,
                             [](const T& item, std::string_view key) { return item.id < key; });
  return it != items.end() && it->id == id ? &*it : nullptr;
}

}  // namespace

EtypeGraph::EtypeGraph(std::string graph_id, std::vector<Property> properties,
                       std::vector<Etype> etypes)
    : id_(std::move(graph_id)), properties_(std::move(properties)), etypes_(std::move(etypes)) {
  auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(properties_.begin(), properties_.end(), by_id);
  std::sort(etypes_.begin(), etypes_.end(), by_id);

  for (std::size_t i = 0; i < properties_.size(); ++i) {
    auto& p = properties_[i];
    if (i > 0 && properties_[i - 1].id == p.id) invalid(id_, "duplicate property id '" + p.id + "'");
    p.label = normalize_label(p.label);
    if (p.label.empty()) invalid(id_, "property '" + p.id + "' has an empty label");
    if (!std::isfinite(p.weight) || p.weight < 0.0 || p.weight > 1.0) {
      invalid(id_, "property '" + p.id + "' weight must lie in [0, 1]");
    }
  }
  for (std::size_t i = 0; i < etypes_.size(); ++i) {
    auto& e = etypes_[i];
    if (i > 0 && etypes_[i - 1].id == e.id) invalid(id_, "duplicate etype id '" + e.id + "'");
    e.label = normalize_label(e.label);
    if (e.label.empty()) invalid(id_, "etype '" + e.id + "' has an empty label");
  }
  for (const auto& e : etypes_) {
    for (const auto& pid : e.direct_property_ids) {
      if (!find_property(pid)) {
        invalid(id_, "dangling property '" + pid + "' referenced by etype '" + e.id + "'");
      }
    }
    for (const auto& parent : e.parent_ids) {
      if (parent == e.id) invalid(id_, "etype '" + e.id + "' is its own parent (cycle)");
      if (!find_etype(parent)) {
        invalid(id_, "dangling parent '" + parent + "' referenced by etype '" + e.id + "'");
      }
    }
  }

  // Kahn's algorithm from the roots downward; whatever is left sits on a cycle.
  std::map<std::string_view, std::vector<std::string_view>> children;
  std::map<std::string_view, std::size_t> pending;
  std::map<std::string_view, int> depth;
  std::deque<std::string_view> ready;
  for (const auto& e : etypes_) {
    pending[e.id] = e.parent_ids.size();
    for (const auto& parent : e.parent_ids) children[parent].push_back(e.id);
    if (e.parent_ids.empty()) {
      ready.push_back(e.id);
      depth[e.id] = 1;
    }
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    auto cur = ready.front();
    ready.pop_front();
    ++visited;
    max_depth_ = std::max(max_depth_, depth[cur]);
    for (auto child : children[cur]) {
      auto [it, fresh] = depth.try_emplace(child, depth[cur] + 1);
      if (!fresh) it->second = std::min(it->second, depth[cur] + 1);
      if (--pending[child] == 0) ready.push_back(child);
    }
  }
  if (visited != etypes_.size()) {
    for (const auto& [id, count] : pending) {
      if (count > 0) invalid(id_, "cycle in subclass hierarchy involving etype '" + std::string(id) + "'");
    }
  }
}

const Etype* EtypeGraph::find_etype(std::string_view id) const { return find_by_id(etypes_, id); }

const Property* EtypeGraph::find_property(std::string_view id) const {
  return find_by_id(properties_, id);
}

const Etype& EtypeGraph::etype(std::string_view id) const {
  if (const auto* e = find_etype(id)) return *e;
  throw std::out_of_range("unknown etype id '" + std::string(id) + "' in graph '" + id_ + "'");
}

const Property& EtypeGraph::property(std::string_view id) const {
  if (const auto* p = find_property(id)) return *p;
  throw std::out_of_range("unknown property id '" + std::string(id) + "' in graph '" + id_ + "'");
}

namespace {

struct Reader {
  std::string_view source;
  const GraphOptions& options;

  [[noreturn]] void fail(const std::string& locus, const std::string& msg) const {
    throw Error(ErrorKind::parse, std::string(source) + ": " + locus + ": " + msg);
  }

  void warn(const std::string& msg) const {
    if (options.warn) {
      options.warn(msg);
    } else {
      std::cerr << "warning: " << source << ": " << msg << '\n';
    }
  }

  void check_fields(const json& obj, const std::string& locus,
                    std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, value] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) continue;
      if (options.strict) fail(locus + "." + key, "unknown field");
      warn(locus + "." + key + ": unknown field ignored");
    }
  }

  const json& require(const json& obj, const std::string& locus, const char* key,
                      json::value_t type) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(locus, std::string("missing field '") + key + "'");
    if (it->type() != type) {
      fail(locus + "." + key, std::string("expected ") +
                                  (type == json::value_t::array ? "array" : "string"));
    }
    return *it;
  }

  std::set<std::string> string_set(const json& obj, const std::string& locus, const char* key) const {
    std::set<std::string> out;
    auto it = obj.find(key);
    if (it == obj.end()) return out;
    if (!it->is_array()) fail(locus + "." + key, "expected array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& v = (*it)[i];
      if (!v.is_string()) fail(locus + "." + key + "[" + std::to_string(i) + "]", "expected string");
      out.insert(v.get<std::string>());
    }
    return out;
  }
};

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

EtypeGraph parse_graph(std::string_view json_text, const GraphOptions& options,
                       std::string_view source_name) {
  Reader rd{source_name, options};
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    rd.fail("line " + std::to_string(line_of(json_text, e.byte > 0 ? e.byte - 1 : 0)), e.what());
  }
  if (!doc.is_object()) rd.fail("line 1", "top level must be an object");
  rd.check_fields(doc, "$", {"graph_id", "properties", "etypes"});
  auto graph_id = rd.require(doc, "$", "graph_id", json::value_t::string).get<std::string>();

  std::vector<Property> properties;
  const auto& props = rd.require(doc, "$", "properties", json::value_t::array);
  for (std::size_t i = 0; i < props.size(); ++i) {
    const std::string locus = "properties[" + std::to_string(i) + "]";
    const auto& p = props[i];
    if (!p.is_object()) rd.fail(locus, "expected object");
    rd.check_fields(p, locus, {"id", "label", "weight"});
    Property prop;
    prop.id = rd.require(p, locus, "id", json::value_t::string).get<std::string>();
    prop.label = rd.require(p, locus, "label", json::value_t::string).get<std::string>();
    if (auto w = p.find("weight"); w != p.end()) {
      if (!w->is_number()) rd.fail(locus + ".weight", "expected number");
      prop.weight = w->get<double>();
    }
    properties.push_back(std::move(prop));
  }

  std::vector<Etype> etypes;
  const auto& ets = rd.require(doc, "$", "etypes", json::value_t::array);
  for (std::size_t i = 0; i < ets.size(); ++i) {
    const std::string locus = "etypes[" + std::to_string(i) + "]";
    const auto& e = ets[i];
    if (!e.is_object()) rd.fail(locus, "expected object");
    rd.check_fields(e, locus, {"id", "label", "properties", "parents"});
    Etype et;
    et.id = rd.require(e, locus, "id", json::value_t::string).get<std::string>();
    et.label = rd.require(e, locus, "label", json::value_t::string).get<std::string>();
    et.direct_property_ids = rd.string_set(e, locus, "properties");
    et.parent_ids = rd.string_set(e, locus, "parents");
    etypes.push_back(std::move(et));
  }
  return EtypeGraph(std::move(graph_id), std::move(properties), std::move(etypes));
}

EtypeGraph load_graph(const std::string& path, const GraphOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str(), options, path);
}

std::string serialize_graph(const EtypeGraph& graph) {
  json doc;
  doc["graph_id"] = graph.id();
  json props = json::array();
  for (const auto& p : graph.properties()) {
    props.push_back({{"id", p.id}, {"label", p.label}, {"weight", p.weight}});
  }
  json ets = json::array();
  for (const auto& e : graph.etypes()) {
    ets.push_back({{"id", e.id},
                   {"label", e.label},
                   {"properties", e.direct_property_ids},
                   {"parents", e.parent_ids}});
  }
  doc["properties"] = std::move(props);
  doc["etypes"] = std::move(ets);
  return doc.dump(2) + "\n";
}

GraphStats compute_stats(const EtypeGraph& graph, bool include_inherited) {
  GraphStats stats;
  stats.include_inherited = include_inherited;

  // Etypes are processed parents-first so closures and layers are ready
  // when a child is reached.
  std::map<std::string_view, std::vector<std::string_view>> children;
  std::map<std::string_view, std::size_t> pending;
  std::deque<std::string_view> ready;
  for (const auto& e : graph.etypes()) {
    pending[e.id] = e.parent_ids.size();
    for (const auto& parent : e.parent_ids) children[parent].push_back(e.id);
    if (e.parent_ids.empty()) ready.push_back(e.id);
  }
  while (!ready.empty()) {
    auto cur = ready.front();
    ready.pop_front();
    const auto& e = graph.etype(cur);
    int depth = 1;
    std::set<std::string> closure = e.direct_property_ids;
    if (!e.parent_ids.empty()) {
      depth = INT32_MAX;
      for (const auto& parent : e.parent_ids) {
        depth = std::min(depth, stats.layer_of.at(parent) + 1);
        if (include_inherited) {
          const auto& inherited = stats.prop_closure.at(parent);
          closure.insert(inherited.begin(), inherited.end());
        }
      }
    }
    stats.layer_of.emplace(e.id, depth);
    stats.prop_closure.emplace(e.id, std::move(closure));
    for (auto child : children[cur]) {
      if (--pending[child] == 0) ready.push_back(child);
    }
  }

  for (const auto& [etype_id, props] : stats.prop_closure) {
    const int depth = stats.layer_of.at(etype_id);
    for (const auto& pid : props) {
      ++stats.n_of[pid];
      auto [it, fresh] = stats.min_layer_of.try_emplace(pid, depth);
      if (!fresh) it->second = std::min(it->second, depth);
    }
  }
  return stats;
}

int layer(const GraphStats& stats, std::string_view etype_id) {
  auto it = stats.layer_of.find(std::string(etype_id));
  if (it == stats.layer_of.end()) {
    throw std::out_of_range("unknown etype id '" + std::string(etype_id) + "'");
  }
  return it->second;
}

}  // namespace etmatch
