#include <doctest.h>

#include <cmath>
#include <string>

#include "etmatch/error.hpp"
#include "etmatch/evaluation.hpp"
#include "etmatch/rng.hpp"

using namespace etmatch;
using doctest::Approx;

namespace {

std::string fixture(const char* name) { return std::string(ETMATCH_FIXTURES) + "/" + name; }

ReferenceAlignment ref(std::initializer_list<CandidatePair> pairs) { return {{pairs.begin(), pairs.end()}}; }

}  // namespace

TEST_CASE("f_beta on the published SGD row") {
  CHECK(f_beta(0.779, 0.632, 0.5) == Approx(0.744).epsilon(0.0015 / 0.744));
  CHECK(f_beta(0.779, 0.632, 1.0) == Approx(0.698).epsilon(0.0015 / 0.698));
  CHECK(std::abs(f_beta(0.779, 0.632, 2.0) - 0.656) <= 0.0015);
  CHECK(f_beta(0.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("printed SGD row") {
  EvalReport r;
  r.precision = 0.779;
  r.recall = 0.632;
  r.f_half = 0.744;
  r.f1 = 0.698;
  r.f2 = 0.656;
  const std::vector<NamedReport> rows{{"SGD", r, std::nullopt}};
  const auto text = emit_report(rows, ReportFormat::text_table);
  CHECK(text.find("0.779  0.632  0.744  0.698  0.656") != std::string::npos);
  CHECK(emit_report({}, ReportFormat::text_table) == "Model  Prec.  Rec.   F0.5   F1     F2\n");
}

TEST_CASE("score by counting") {
  const auto reference = ref({{"a", "x"}, {"b", "y"}});
  const std::vector<CandidatePair> half{{"a", "x"}, {"c", "z"}};
  const auto r = score(half, reference);
  CHECK(r.tp == 1);
  CHECK(r.fp == 1);
  CHECK(r.fn == 1);
  CHECK(r.precision == 0.5);
  CHECK(r.recall == 0.5);
  CHECK(r.f1 == 0.5);

  const std::vector<CandidatePair> perfect{{"b", "y"}, {"x", "a"}};
  const auto p = score(perfect, reference);
  CHECK(p.precision == 1.0);
  CHECK(p.recall == 1.0);
  CHECK(p.f_half == 1.0);
  CHECK(p.f1 == 1.0);
  CHECK(p.f2 == 1.0);

  const auto none = score(std::span<const CandidatePair>{}, reference);
  CHECK(none.precision == 0.0);
  CHECK(none.f1 == 0.0);

  try {
    (void)score(half, ReferenceAlignment{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::eval_input);
  }
}

TEST_CASE("F_beta is bounded by P and R and ordered by beta") {
  Rng rng(1);
  for (int i = 0; i < 2000; ++i) {
    const double p = rng.uniform(), r = rng.uniform();
    const double fh = f_beta(p, r, 0.5), f1 = f_beta(p, r, 1.0), f2 = f_beta(p, r, 2.0);
    for (double f : {fh, f1, f2}) {
      CHECK(f >= std::min(p, r) - 1e-12);
      CHECK(f <= std::max(p, r) + 1e-12);
    }
    if (p > r) {
      CHECK(fh >= f1);
      CHECK(f1 >= f2);
    } else {
      CHECK(fh <= f1);
      CHECK(f1 <= f2);
    }
  }
}

TEST_CASE("OAEI XML reference matches the equivalent TSV") {
  std::vector<std::string> warnings;
  const auto xml = load_alignment(fixture("ref_pairs.rdf"), [&](std::string_view w) { warnings.emplace_back(w); });
  const auto tsv = load_alignment(fixture("ref_pairs.tsv"));
  CHECK(xml.pairs == tsv.pairs);
  CHECK(xml.pairs.size() == 2);
  CHECK(warnings.size() == 1);
  const auto pred = load_alignment(fixture("pred_half.tsv"));
  CHECK(score(std::vector<CandidatePair>(pred.pairs.begin(), pred.pairs.end()), xml) ==
        score(std::vector<CandidatePair>(pred.pairs.begin(), pred.pairs.end()), tsv));
}

TEST_CASE("TSV decision column") {
  const auto r = parse_alignment("a\tx\t0.9\t1\nb\ty\t0.3\t0\n");
  CHECK(r.pairs == std::set<CandidatePair>{{"a", "x"}});
  CHECK_THROWS_AS((void)parse_alignment("onlyone\n"), Error);
}

TEST_CASE("aggregate micro and macro") {
  const std::vector<EvalReport> parts{make_report(1, 0, 1), make_report(3, 1, 0)};
  const auto agg = aggregate(parts);
  CHECK(agg.micro.tp == 4);
  CHECK(agg.micro.precision == Approx(0.8));
  CHECK(agg.micro.recall == Approx(0.8));
  CHECK(agg.macro.precision == Approx((1.0 + 0.75) / 2.0));
  CHECK(agg.macro.recall == Approx((0.5 + 1.0) / 2.0));
}

TEST_CASE("JSON reports round-trip") {
  const std::vector<NamedReport> rows{{"B", make_report(3, 1, 2), make_report(1, 1, 1)},
                                      {"B+ES_v+ES_h", make_report(5, 0, 0), std::nullopt}};
  const auto text = emit_report(rows, ReportFormat::machine_json);
  const auto back = parse_report_json(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].name == "B");
  CHECK(back[0].report == rows[0].report);
  CHECK(back[0].macro == rows[0].macro);
  CHECK(!back[1].macro);
  CHECK(emit_report(back, ReportFormat::machine_json) == text);
}
