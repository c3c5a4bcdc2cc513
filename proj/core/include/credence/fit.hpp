#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "credence/evidence.hpp"

namespace credence {

// One inferred update step of a displayed trajectory.
struct RecoveredStep {
  std::string evidence_id;  // cell the step lands on; empty for bare lists
  double lr = 1.0;          // odds(p_k) / odds(p_{k-1})
  std::optional<std::string> snapped_level;  // nearest ladder rung, if close
  double relative_residual = 0.0;            // |lr - rung| / rung vs the nearest rung
};

// Per-step likelihood ratios implied by a posterior trajectory. Needs at
// least two points, all strictly inside (0, 1); throws std::invalid_argument
// or std::domain_error otherwise.
std::vector<RecoveredStep> recover_ratios(std::span<const double> trajectory);

// Attach the nearest ladder rung (nearest in log-ratio space) to every step.
// A step stays unsnapped when its relative residual exceeds the threshold;
// either way the residual against the nearest rung is recorded.
std::vector<RecoveredStep> snap_levels(std::vector<RecoveredStep> steps,
                                       const LevelSchedule& schedule,
                                       double residual_threshold = 0.10);

enum class AnomalyKind {
  MonotonicityViolation,  // a displayed posterior decreases down a column
  DecimalComma,           // comma used as the decimal separator
  PrecisionMismatch,      // decimal count differs from the column's usual one
  MalformedNumber,        // cell does not parse as a number at all
};

std::string_view to_string(AnomalyKind kind);

struct TableAnomaly {
  std::string sort_id;
  std::string evidence_id;
  AnomalyKind kind;
  std::string detail;
};

// A posterior table as displayed somewhere: raw cell strings, one row per
// evidence, one column per sort.
struct DisplayedTable {
  std::vector<std::string> sort_ids;
  std::vector<std::string> evidence_ids;
  std::vector<std::vector<std::string>> cells;  // [evidence][sort]
};

// Numeric view of a displayed table: decimal commas normalized to dots,
// malformed cells parsed as NaN. Throws std::invalid_argument when the grid
// shape does not match the declared ids.
std::vector<std::vector<double>> table_values(const DisplayedTable& table);

// Every printing defect the table shows: commas, malformed cells, odd
// precision, posteriors that go down where the model can only go up.
std::vector<TableAnomaly> audit_table(const DisplayedTable& table);

// Recovery over one whole column of a displayed table (even prior prepended),
// snapped against a schedule.
struct ColumnFit {
  std::string sort_id;
  std::vector<RecoveredStep> steps;  // one per evidence row; empty when the
                                     // column has unusable cells
};

struct FitResult {
  std::vector<ColumnFit> columns;
  std::vector<TableAnomaly> anomalies;
};

// Audit a displayed table and recover + snap every column against the
// schedule's ladder.
FitResult fit_table(const DisplayedTable& table, const LevelSchedule& schedule,
                    double residual_threshold = 0.10);

}  // namespace credence
