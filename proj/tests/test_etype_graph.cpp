#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>

#include <json.hpp>

#include "etmatch/error.hpp"
#include "etmatch/etype_graph.hpp"
#include "helpers.hpp"

using namespace etmatch;
using testing::make_graph;

namespace {

std::string fixture(const char* name) { return std::string(ETMATCH_FIXTURES) + "/" + name; }

ErrorKind kind_of(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  FAIL("expected etmatch::Error");
  return ErrorKind::parse;
}

}  // namespace

TEST_CASE("load_graph reads the three-etype fixture") {
  const auto g = load_graph(fixture("three_etypes.json"));
  CHECK(g.id() == "toy");
  CHECK(g.etypes().size() == 3);
  CHECK(g.properties().size() == 3);
  CHECK(g.max_depth() == 2);
  CHECK(g.property("p2").label == "birth date");
  CHECK(g.property("p2").weight == 0.5);
  CHECK(g.property("p1").weight == 1.0);
}

TEST_CASE("load_graph rejects cycles and dangling references") {
  std::string msg;
  CHECK(kind_of([] { (void)load_graph(fixture("cycle.json")); }, &msg) == ErrorKind::validation);
  CHECK(msg.find("cycle") != std::string::npos);
  CHECK(kind_of([] { (void)load_graph(fixture("dangling.json")); }, &msg) == ErrorKind::validation);
  CHECK(msg.find("dangling property") != std::string::npos);
}

TEST_CASE("load_graph reports parse errors with a locus") {
  std::string msg;
  CHECK(kind_of([] { (void)load_graph(fixture("malformed.json")); }, &msg) == ErrorKind::parse);
  CHECK(msg.find("line 5") != std::string::npos);
  CHECK(kind_of([] { (void)load_graph(fixture("does_not_exist.json")); }, &msg) == ErrorKind::parse);
  CHECK(msg.find("does_not_exist.json") != std::string::npos);
  CHECK(kind_of([] { (void)parse_graph(R"({"graph_id": "g", "properties": [], "etypes": [{"id": 3}]})"); }, &msg) ==
        ErrorKind::parse);
  CHECK(msg.find("etypes[0].id") != std::string::npos);
}

TEST_CASE("unknown fields: strict rejects, lenient warns") {
  const char* doc = R"({"graph_id": "g", "version": 2, "properties": [], "etypes": []})";
  CHECK(kind_of([&] { (void)parse_graph(doc); }) == ErrorKind::parse);
  std::vector<std::string> warnings;
  GraphOptions opts;
  opts.strict = false;
  opts.warn = [&](std::string_view w) { warnings.emplace_back(w); };
  const auto g = parse_graph(doc, opts);
  CHECK(g.etypes().empty());
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("version") != std::string::npos);
}

TEST_CASE("graph invariants are enforced on construction") {
  CHECK(kind_of([] { (void)make_graph("g", {}, {{"a", {}, {"a"}}}); }) == ErrorKind::validation);
  CHECK(kind_of([] { (void)make_graph("g", {}, {{"a", {}, {}}, {"a", {}, {}}}); }) == ErrorKind::validation);
  CHECK(kind_of([] { (void)make_graph("g", {"p", "p"}, {}); }) == ErrorKind::validation);
  CHECK(kind_of([] { (void)make_graph("g", {}, {{"a", {}, {"missing"}}}); }) == ErrorKind::validation);
  CHECK(kind_of([] { (void)make_graph("g", {}, {{"a", {}, {}, "___"}}); }) == ErrorKind::validation);
  CHECK(kind_of([] { (void)EtypeGraph("g", {{"p", "x", 1.5}}, {}); }) == ErrorKind::validation);
}

TEST_CASE("compute_stats on root -> Person -> Athlete chain") {
  const auto g = make_graph("chain", {"name"},
                            {{"root", {}, {}}, {"Person", {"name"}, {"root"}}, {"Athlete", {}, {"Person"}}});
  const auto with = compute_stats(g, true);
  CHECK(with.n_of.at("name") == 2);
  CHECK(with.min_layer_of.at("name") == 2);
  CHECK(layer(with, "Athlete") == 3);
  CHECK(with.prop_closure.at("Athlete") == std::set<std::string>{"name"});

  const auto without = compute_stats(g, false);
  CHECK(without.n_of.at("name") == 1);
  CHECK(without.min_layer_of.at("name") == 2);
  CHECK(without.prop_closure.at("Athlete").empty());
}

TEST_CASE("compute_stats on a single root etype") {
  const auto g = make_graph("one", {"name"}, {{"only", {"name"}, {}}});
  const auto s = compute_stats(g);
  CHECK(s.n_of.at("name") == 1);
  CHECK(s.min_layer_of.at("name") == 1);
  CHECK(layer(s, "only") == 1);
  CHECK(g.max_depth() == 1);
}

TEST_CASE("layer uses the shortest path under multiple inheritance") {
  // R -> A -> B, and E has parents {A, R}: paths of depth 3 and 2.
  const auto g = make_graph("diamond", {},
                            {{"R", {}, {}}, {"A", {}, {"R"}}, {"B", {}, {"A"}}, {"E", {}, {"A", "R"}}});
  const auto s = compute_stats(g);
  CHECK(layer(s, "R") == 1);
  CHECK(layer(s, "A") == 2);
  CHECK(layer(s, "B") == 3);
  CHECK(layer(s, "E") == 2);
  CHECK(g.max_depth() == 3);
  CHECK_THROWS_AS((void)layer(s, "nope"), std::out_of_range);
}

TEST_CASE("empty graph is valid with max depth 1") {
  const auto g = make_graph("empty", {}, {});
  CHECK(g.etypes().empty());
  CHECK(g.max_depth() == 1);
  CHECK(compute_stats(g).n_of.empty());
}

TEST_CASE("property: double counting identity and stats invariants on random graphs") {
  Rng rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = testing::random_graph(rng, "r");
    for (bool inherited : {true, false}) {
      const auto s = compute_stats(g, inherited);
      std::size_t by_property = 0;
      for (const auto& [p, n] : s.n_of) {
        by_property += static_cast<std::size_t>(n);
        CHECK(n >= 1);
        CHECK(static_cast<std::size_t>(n) <= g.etypes().size());
      }
      std::size_t by_etype = 0;
      for (const auto& [e, props] : s.prop_closure) by_etype += props.size();
      CHECK(by_property == by_etype);

      // brute-force min layer and closure
      for (const auto& [p, min_layer] : s.min_layer_of) {
        int brute = INT32_MAX;
        for (const auto& [e, props] : s.prop_closure) {
          if (props.count(p)) brute = std::min(brute, s.layer_of.at(e));
        }
        CHECK(min_layer == brute);
      }
      for (const auto& e : g.etypes()) {
        const int l = s.layer_of.at(e.id);
        if (e.parent_ids.empty()) {
          CHECK(l == 1);
        } else {
          int expect = INT32_MAX;
          for (const auto& p : e.parent_ids) expect = std::min(expect, s.layer_of.at(p) + 1);
          CHECK(l == expect);
        }
        CHECK(l <= g.max_depth());
      }
    }
  }
}

TEST_CASE("property: serialization round-trips and layers ignore declaration order") {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testing::random_graph(rng, "r");
    const auto text = serialize_graph(g);
    const auto reloaded = parse_graph(text);
    CHECK(serialize_graph(reloaded) == text);

    auto doc = nlohmann::json::parse(text);
    auto& ets = doc["etypes"];
    std::vector<nlohmann::json> shuffled(ets.begin(), ets.end());
    rng.shuffle(std::span(shuffled));
    ets = shuffled;
    const auto permuted = parse_graph(doc.dump());
    CHECK(compute_stats(permuted).layer_of == compute_stats(g).layer_of);
    CHECK(serialize_graph(permuted) == text);
  }
}
