#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "credence/engine.hpp"
#include "credence/fit.hpp"
#include "credence/sensitivity.hpp"

namespace credence::io {

inline constexpr std::string_view kSchemaVersion = "1";

// Parse outcome: either a matrix or a non-empty list of readable errors with
// enough location detail to fix the file. Never both, never neither.
struct LoadResult {
  std::optional<AssessmentMatrix> matrix;
  std::vector<std::string> errors;
};

struct ScheduleLoadResult {
  std::optional<LevelSchedule> schedule;
  std::vector<std::string> errors;
};

struct TableLoadResult {
  std::optional<DisplayedTable> table;
  std::vector<std::string> errors;
};

// Dataset document (JSON, schema_version "1") <-> AssessmentMatrix.
// load collects every error it can find (syntax errors end the parse, but
// semantic and validation problems are reported together).
LoadResult load_dataset(std::string_view text);
std::string save_dataset(const AssessmentMatrix& m);

// A schedule on its own: either a bare {"levels": [...]} document or a full
// dataset document, from which the schedule is taken.
ScheduleLoadResult load_schedule(std::string_view text);

// Plain-text posterior grid, the shape tables are usually pasted in:
// an optional header row of sort ids, then one row per evidence. Cells are
// split on semicolons, else on whitespace, else on commas; decimal commas
// therefore survive only under the first two separators. Cell strings are
// kept raw; normalization happens in the audit.
TableLoadResult load_table_grid(std::string_view text);

enum class ReportFormat { Markdown, Csv, Json };

// nullopt for anything but "md", "markdown", "csv", "json".
std::optional<ReportFormat> parse_format(std::string_view name);

// Render a posterior table. Markdown: grid plus a metric line, 5-decimal
// cells. Csv: the bare grid, 5-decimal cells. Json: full precision, machine
// round-trippable. The string-format overload throws std::invalid_argument
// on an unknown format name.
std::string emit_report(const PosteriorTable& table, ReportFormat format);
std::string emit_report(const PosteriorTable& table, std::string_view format_name);

std::string emit_fit_report(const FitResult& fit);
std::string emit_sensitivity_report(const SensitivityReport& report,
                                    const PerturbationSpec& spec);
std::string emit_tornado_report(const SensitivityReport& report);

}  // namespace credence::io
