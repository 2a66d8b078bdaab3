#include "etmatch/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "etmatch/error.hpp"

namespace etmatch {

using nlohmann::json;

namespace {

void emit_warning(const WarnFn& warn, const std::string& msg) {
  if (warn) {
    warn(msg);
  } else {
    std::cerr << "warning: " << msg << '\n';
  }
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const auto semi = s.find(';', i);
    if (semi == std::string_view::npos) {
      out.push_back('&');
      continue;
    }
    const auto name = s.substr(i + 1, semi - i - 1);
    if (name == "amp") out.push_back('&');
    else if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else {
      out.append(s.substr(i, semi - i + 1));
    }
    i = semi;
  }
  return out;
}

// Locates `<tag` (with or without a namespace prefix) inside [from, to).
std::size_t find_tag(std::string_view text, std::string_view tag, std::size_t from, std::size_t to) {
  std::size_t pos = from;
  while ((pos = text.find('<', pos)) != std::string_view::npos && pos < to) {
    std::size_t name_start = pos + 1;
    std::size_t name_end = text.find_first_of(" \t\r\n/>", name_start);
    if (name_end == std::string_view::npos) return std::string_view::npos;
    auto name = text.substr(name_start, name_end - name_start);
    if (auto colon = name.find(':'); colon != std::string_view::npos) name = name.substr(colon + 1);
    if (name == tag) return pos;
    pos = name_end;
  }
  return std::string_view::npos;
}

// Locates `</tag>` (any namespace prefix) at or after `from`.
std::size_t find_close_tag(std::string_view text, std::string_view tag, std::size_t from) {
  std::size_t pos = from;
  while ((pos = text.find("</", pos)) != std::string_view::npos) {
    const auto gt = text.find('>', pos);
    if (gt == std::string_view::npos) return std::string_view::npos;
    auto name = trim(text.substr(pos + 2, gt - pos - 2));
    if (auto colon = name.find(':'); colon != std::string_view::npos) name = name.substr(colon + 1);
    if (name == tag) return pos;
    pos = gt;
  }
  return std::string_view::npos;
}

// Value of a `resource` attribute (any prefix) in the tag starting at `pos`.
std::optional<std::string> resource_attr(std::string_view text, std::size_t pos) {
  const auto close = text.find('>', pos);
  if (close == std::string_view::npos) return std::nullopt;
  const auto tag = text.substr(pos, close - pos);
  auto at = tag.find("resource");
  if (at == std::string_view::npos) return std::nullopt;
  auto eq = tag.find('=', at);
  if (eq == std::string_view::npos) return std::nullopt;
  auto q = tag.find_first_of("\"'", eq);
  if (q == std::string_view::npos) return std::nullopt;
  auto end = tag.find(tag[q], q + 1);
  if (end == std::string_view::npos) return std::nullopt;
  return decode_entities(tag.substr(q + 1, end - q - 1));
}

std::optional<std::string> element_text(std::string_view text, std::string_view tag, std::size_t from,
                                        std::size_t to) {
  const auto open = find_tag(text, tag, from, to);
  if (open == std::string_view::npos) return std::nullopt;
  const auto gt = text.find('>', open);
  if (gt == std::string_view::npos || gt >= to) return std::nullopt;
  if (text[gt - 1] == '/') return std::string{};
  const auto end = text.find('<', gt + 1);
  if (end == std::string_view::npos || end > to) return std::nullopt;
  return decode_entities(trim(text.substr(gt + 1, end - gt - 1)));
}

ReferenceAlignment parse_xml(std::string_view text, std::string_view source, const WarnFn& warn) {
  ReferenceAlignment ref;
  std::size_t pos = 0;
  std::size_t cell_no = 0;
  while ((pos = find_tag(text, "Cell", pos, text.size())) != std::string_view::npos) {
    ++cell_no;
    const auto end = find_close_tag(text, "Cell", pos + 1);
    if (end == std::string_view::npos) {
      throw Error(ErrorKind::parse, std::string(source) + ": unterminated Cell element #" +
                                        std::to_string(cell_no));
    }
    const auto e1 = find_tag(text, "entity1", pos, end);
    const auto e2 = find_tag(text, "entity2", pos, end);
    std::optional<std::string> id1 = e1 == std::string_view::npos ? std::nullopt : resource_attr(text, e1);
    std::optional<std::string> id2 = e2 == std::string_view::npos ? std::nullopt : resource_attr(text, e2);
    if (!id1 || !id2) {
      throw Error(ErrorKind::parse, std::string(source) + ": Cell #" + std::to_string(cell_no) +
                                        " lacks entity1/entity2 resources");
    }
    const auto relation = element_text(text, "relation", pos, end).value_or("=");
    if (relation != "=") {
      emit_warning(warn, std::string(source) + ": skipping Cell #" + std::to_string(cell_no) +
                             " with relation '" + relation + "'");
    } else {
      ref.pairs.insert({*id1, *id2});
    }
    pos = end;
  }
  return ref;
}

ReferenceAlignment parse_tsv(std::string_view text, std::string_view source) {
  ReferenceAlignment ref;
  std::size_t start = 0;
  std::size_t lineno = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::size_t f = 0;
    while (true) {
      auto tab = line.find('\t', f);
      fields.push_back(line.substr(f, tab == std::string_view::npos ? std::string_view::npos : tab - f));
      if (tab == std::string_view::npos) break;
      f = tab + 1;
    }
    if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
      throw Error(ErrorKind::parse, std::string(source) + ": line " + std::to_string(lineno) +
                                        ": expected 'idA<TAB>idB'");
    }
    if (fields.size() >= 4) {
      const auto decision = trim(fields[3]);
      if (decision == "0") continue;
      if (decision != "1") {
        throw Error(ErrorKind::parse, std::string(source) + ": line " + std::to_string(lineno) +
                                          ": decision column must be 0 or 1");
      }
    }
    ref.pairs.insert({std::string(fields[0]), std::string(fields[1])});
  }
  return ref;
}

CandidatePair unordered(const CandidatePair& p) {
  return p.left <= p.right ? p : CandidatePair{p.right, p.left};
}

}  // namespace

ReferenceAlignment parse_alignment(std::string_view text, std::string_view source_name,
                                   const WarnFn& warn) {
  const auto body = trim(text);
  if (!body.empty() && body.front() == '<') return parse_xml(text, source_name, warn);
  return parse_tsv(text, source_name);
}

ReferenceAlignment load_alignment(const std::string& path, const WarnFn& warn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "cannot open alignment file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_alignment(buf.str(), path, warn);
}

std::size_t check_resolvable(const ReferenceAlignment& reference, const EtypeGraph& source,
                             const EtypeGraph& target, const WarnFn& warn) {
  std::size_t unresolved = 0;
  for (const auto& p : reference.pairs) {
    if (source.find_etype(p.left) && target.find_etype(p.right)) continue;
    ++unresolved;
    emit_warning(warn, "reference pair (" + p.left + ", " + p.right + ") does not resolve against " +
                           source.id() + " / " + target.id());
  }
  return unresolved;
}

double f_beta(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / denom;
}

EvalReport report_from_pr(double precision, double recall) {
  EvalReport r;
  r.precision = precision;
  r.recall = recall;
  r.f_half = f_beta(precision, recall, 0.5);
  r.f1 = f_beta(precision, recall, 1.0);
  r.f2 = f_beta(precision, recall, 2.0);
  return r;
}

EvalReport make_report(std::size_t tp, std::size_t fp, std::size_t fn) {
  const double p = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double r = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  EvalReport out = report_from_pr(p, r);
  out.tp = tp;
  out.fp = fp;
  out.fn = fn;
  return out;
}

EvalReport score(std::span<const CandidatePair> predicted, const ReferenceAlignment& reference) {
  if (reference.pairs.empty()) throw Error(ErrorKind::eval_input, "reference alignment is empty");
  std::set<CandidatePair> ref;
  for (const auto& p : reference.pairs) ref.insert(unordered(p));
  std::set<CandidatePair> pred;
  for (const auto& p : predicted) pred.insert(unordered(p));
  std::size_t tp = 0;
  for (const auto& p : pred) tp += ref.count(p);
  return make_report(tp, pred.size() - tp, ref.size() - tp);
}

EvalReport score(const Alignment& predicted, const ReferenceAlignment& reference) {
  std::vector<CandidatePair> pairs;
  for (const auto& e : predicted.entries) {
    if (e.decision == 1) pairs.push_back(e.pair);
  }
  return score(pairs, reference);
}

AggregateReport aggregate(std::span<const EvalReport> reports) {
  AggregateReport out;
  if (reports.empty()) return out;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double p = 0.0;
  double r = 0.0;
  double fh = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
  for (const auto& rep : reports) {
    tp += rep.tp;
    fp += rep.fp;
    fn += rep.fn;
    p += rep.precision;
    r += rep.recall;
    fh += rep.f_half;
    f1 += rep.f1;
    f2 += rep.f2;
  }
  const auto n = static_cast<double>(reports.size());
  out.micro = make_report(tp, fp, fn);
  out.macro = EvalReport{tp, fp, fn, p / n, r / n, fh / n, f1 / n, f2 / n};
  return out;
}

namespace {

json report_json(const EvalReport& r) {
  return {{"tp", r.tp},         {"fp", r.fp}, {"fn", r.fn}, {"precision", r.precision},
          {"recall", r.recall}, {"f_half", r.f_half}, {"f1", r.f1}, {"f2", r.f2}};
}

EvalReport report_from_json(const json& j) {
  EvalReport r;
  r.tp = j.at("tp").get<std::size_t>();
  r.fp = j.at("fp").get<std::size_t>();
  r.fn = j.at("fn").get<std::size_t>();
  r.precision = j.at("precision").get<double>();
  r.recall = j.at("recall").get<double>();
  r.f_half = j.at("f_half").get<double>();
  r.f1 = j.at("f1").get<double>();
  r.f2 = j.at("f2").get<double>();
  return r;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string emit_report(std::span<const NamedReport> reports, ReportFormat format) {
  if (format == ReportFormat::machine_json) {
    json rows = json::array();
    for (const auto& r : reports) {
      json row = report_json(r.report);
      row["name"] = r.name;
      if (r.macro) row["macro"] = report_json(*r.macro);
      rows.push_back(std::move(row));
    }
    return json{{"reports", rows}}.dump(2) + "\n";
  }

  std::size_t width = 5;
  for (const auto& r : reports) width = std::max(width, r.name.size());
  std::string out = pad("Model", width) + "  Prec.  Rec.   F0.5   F1     F2\n";
  for (const auto& r : reports) {
    const auto& e = r.report;
    out += pad(r.name, width) + "  " + fixed3(e.precision) + "  " + fixed3(e.recall) + "  " +
           fixed3(e.f_half) + "  " + fixed3(e.f1) + "  " + fixed3(e.f2) + "\n";
  }
  return out;
}

std::vector<NamedReport> parse_report_json(std::string_view text) {
  try {
    const auto doc = json::parse(text.begin(), text.end());
    std::vector<NamedReport> out;
    for (const auto& row : doc.at("reports")) {
      NamedReport r;
      r.name = row.at("name").get<std::string>();
      r.report = report_from_json(row);
      if (row.contains("macro")) r.macro = report_from_json(row.at("macro"));
      out.push_back(std::move(r));
    }
    return out;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::parse, std::string("report: ") + e.what());
  }
}

}  // namespace etmatch
