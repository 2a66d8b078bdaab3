#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etmatch/etype_graph.hpp"
#include "etmatch/features.hpp"
#include "etmatch/matcher.hpp"

namespace etmatch {

using WarnFn = std::function<void(std::string_view)>;

/// Gold-standard equivalences between two graphs.
struct ReferenceAlignment {
  std::set<CandidatePair> pairs;
};

/// Reads either `idA<TAB>idB` lines or the Cell elements of an OAEI
/// Alignment-format document (detected by a leading '<'). Cells whose
/// relation is not "=" are skipped with a warning. Extra TSV columns are
/// allowed; when a fourth column is present it is read as a 0/1 decision
/// and rows with decision 0 are skipped, so matcher output can be read back.
[[nodiscard]] ReferenceAlignment parse_alignment(std::string_view text,
                                                 std::string_view source_name = "<memory>",
                                                 const WarnFn& warn = {});
[[nodiscard]] ReferenceAlignment load_alignment(const std::string& path, const WarnFn& warn = {});

/// Warns about reference ids that do not resolve in the two graphs.
/// Returns the number of unresolved pairs.
std::size_t check_resolvable(const ReferenceAlignment& reference, const EtypeGraph& source,
                             const EtypeGraph& target, const WarnFn& warn = {});

struct EvalReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_half = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// (1 + b^2) P R / (b^2 P + R), and 0 when P = R = 0.
[[nodiscard]] double f_beta(double precision, double recall, double beta);

/// Report from raw counts; undefined ratios are 0.
[[nodiscard]] EvalReport make_report(std::size_t tp, std::size_t fp, std::size_t fn);
/// Report from published precision and recall (counts stay 0).
[[nodiscard]] EvalReport report_from_pr(double precision, double recall);

/// Set-based scoring; a correspondence is the unordered id pair. Throws
/// Error(eval_input) on an empty reference.
[[nodiscard]] EvalReport score(std::span<const CandidatePair> predicted,
                               const ReferenceAlignment& reference);
[[nodiscard]] EvalReport score(const Alignment& predicted, const ReferenceAlignment& reference);

struct AggregateReport {
  EvalReport micro;  // counts pooled, then ratios
  EvalReport macro;  // mean of per-task ratios; counts are summed
};

[[nodiscard]] AggregateReport aggregate(std::span<const EvalReport> reports);

struct NamedReport {
  std::string name;
  EvalReport report;
  std::optional<EvalReport> macro;
};

enum class ReportFormat { text_table, machine_json };

/// Text tables round to 3 decimals; JSON keeps full precision.
[[nodiscard]] std::string emit_report(std::span<const NamedReport> reports, ReportFormat format);
/// Inverse of the JSON format.
[[nodiscard]] std::vector<NamedReport> parse_report_json(std::string_view text);

}  // namespace etmatch
