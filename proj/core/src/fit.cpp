#include "credence/fit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>

namespace credence {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ParsedCell {
  double value = kNaN;       // NaN when malformed
  bool had_comma = false;    // comma used as the decimal separator
  int decimals = 0;          // digits after the separator
  std::string normalized;    // original with the comma, if any, turned into a dot
};

// Accept plain decimal notation with either separator: [+-]digits[sep digits].
// Anything else (including exponents, which never appear in displayed belief
// tables) is malformed.
ParsedCell parse_cell(const std::string& raw) {
  ParsedCell cell;
  std::string text = raw;
  const std::size_t commas = std::count(text.begin(), text.end(), ',');
  const std::size_t dots = std::count(text.begin(), text.end(), '.');
  if (commas == 1 && dots == 0) {
    cell.had_comma = true;
    text[text.find(',')] = '.';
  } else if (commas != 0) {
    cell.normalized = raw;
    return cell;  // several commas, or commas mixed with a dot: malformed
  }
  cell.normalized = text;

  std::size_t i = 0;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    ++i;
  }
  std::size_t int_digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    ++i;
    ++int_digits;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      ++i;
      ++cell.decimals;
    }
    if (cell.decimals == 0) {
      return cell;  // trailing separator with no digits
    }
  }
  if (i != text.size() || int_digits == 0) {
    return cell;  // stray characters, or no integer part at all
  }
  cell.value = std::strtod(text.c_str(), nullptr);
  return cell;
}

void require_grid_shape(const DisplayedTable& table) {
  if (table.cells.size() != table.evidence_ids.size()) {
    throw std::invalid_argument("table has " + std::to_string(table.cells.size()) +
                                " rows but " +
                                std::to_string(table.evidence_ids.size()) +
                                " evidence ids");
  }
  for (const auto& row : table.cells) {
    if (row.size() != table.sort_ids.size()) {
      throw std::invalid_argument("table row has " + std::to_string(row.size()) +
                                  " cells but there are " +
                                  std::to_string(table.sort_ids.size()) +
                                  " sort ids");
    }
  }
}

std::vector<std::vector<ParsedCell>> parse_grid(const DisplayedTable& table) {
  require_grid_shape(table);
  std::vector<std::vector<ParsedCell>> grid;
  grid.reserve(table.cells.size());
  for (const auto& row : table.cells) {
    std::vector<ParsedCell> parsed;
    parsed.reserve(row.size());
    for (const auto& cell : row) {
      parsed.push_back(parse_cell(cell));
    }
    grid.push_back(std::move(parsed));
  }
  return grid;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string_view to_string(AnomalyKind kind) {
  switch (kind) {
    case AnomalyKind::MonotonicityViolation:
      return "monotonicity-violation";
    case AnomalyKind::DecimalComma:
      return "decimal-comma";
    case AnomalyKind::PrecisionMismatch:
      return "precision-mismatch";
    case AnomalyKind::MalformedNumber:
      return "malformed-number";
  }
  return "unknown";
}

std::vector<RecoveredStep> recover_ratios(std::span<const double> trajectory) {
  if (trajectory.size() < 2) {
    throw std::invalid_argument("ratio recovery needs at least two points");
  }
  for (double p : trajectory) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::domain_error("trajectory point out of (0, 1): " +
                              std::to_string(p));
    }
  }
  std::vector<RecoveredStep> steps;
  steps.reserve(trajectory.size() - 1);
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const double prev = trajectory[k - 1] / (1.0 - trajectory[k - 1]);
    const double next = trajectory[k] / (1.0 - trajectory[k]);
    RecoveredStep step;
    step.lr = next / prev;
    steps.push_back(std::move(step));
  }
  return steps;
}

std::vector<RecoveredStep> snap_levels(std::vector<RecoveredStep> steps,
                                       const LevelSchedule& schedule,
                                       double residual_threshold) {
  const auto ladder = schedule.ladder();
  if (ladder.empty()) {
    throw std::invalid_argument("cannot snap against an empty schedule");
  }
  if (!(residual_threshold >= 0.0)) {
    throw std::invalid_argument("residual threshold must be non-negative");
  }
  for (auto& step : steps) {
    if (!(step.lr > 0.0) || !std::isfinite(step.lr)) {
      step.snapped_level.reset();
      step.relative_residual = kNaN;
      continue;
    }
    // Nearest rung in log space: ratios are multiplicative, so "halfway
    // between 3 and 9" should be their geometric mean, not their average.
    const double target = std::log(step.lr);
    std::size_t best = 0;
    double best_distance = std::abs(target - std::log(ladder[0].ratio));
    for (std::size_t r = 1; r < ladder.size(); ++r) {
      const double distance = std::abs(target - std::log(ladder[r].ratio));
      if (distance < best_distance) {
        best = r;
        best_distance = distance;
      }
    }
    step.relative_residual =
        std::abs(step.lr - ladder[best].ratio) / ladder[best].ratio;
    if (step.relative_residual <= residual_threshold) {
      step.snapped_level = ladder[best].name;
    } else {
      step.snapped_level.reset();
    }
  }
  return steps;
}

std::vector<std::vector<double>> table_values(const DisplayedTable& table) {
  const auto grid = parse_grid(table);
  std::vector<std::vector<double>> values;
  values.reserve(grid.size());
  for (const auto& row : grid) {
    std::vector<double> out;
    out.reserve(row.size());
    for (const auto& cell : row) {
      out.push_back(cell.value);
    }
    values.push_back(std::move(out));
  }
  return values;
}

std::vector<TableAnomaly> audit_table(const DisplayedTable& table) {
  const auto grid = parse_grid(table);
  std::vector<TableAnomaly> out;

  // Pass 1, row-major: per-cell lexical defects.
  for (std::size_t e = 0; e < grid.size(); ++e) {
    for (std::size_t s = 0; s < grid[e].size(); ++s) {
      const ParsedCell& cell = grid[e][s];
      if (std::isnan(cell.value)) {
        out.push_back({table.sort_ids[s], table.evidence_ids[e],
                       AnomalyKind::MalformedNumber,
                       "'" + table.cells[e][s] + "' does not parse as a number"});
      } else if (cell.had_comma) {
        out.push_back({table.sort_ids[s], table.evidence_ids[e],
                       AnomalyKind::DecimalComma,
                       "'" + table.cells[e][s] + "' normalized to " +
                           cell.normalized});
      }
    }
  }

  // Pass 2, column-major: decimal counts against the column's usual count.
  for (std::size_t s = 0; s < table.sort_ids.size(); ++s) {
    std::map<int, std::size_t> histogram;
    for (std::size_t e = 0; e < grid.size(); ++e) {
      if (!std::isnan(grid[e][s].value)) {
        ++histogram[grid[e][s].decimals];
      }
    }
    if (histogram.empty()) {
      continue;
    }
    int modal = 0;
    std::size_t best_count = 0;
    for (const auto& [decimals, count] : histogram) {
      if (count > best_count) {  // ties keep fewer decimals, map order is ascending
        modal = decimals;
        best_count = count;
      }
    }
    for (std::size_t e = 0; e < grid.size(); ++e) {
      if (!std::isnan(grid[e][s].value) && grid[e][s].decimals != modal) {
        out.push_back({table.sort_ids[s], table.evidence_ids[e],
                       AnomalyKind::PrecisionMismatch,
                       std::to_string(grid[e][s].decimals) +
                           " decimals where the column otherwise shows " +
                           std::to_string(modal)});
      }
    }
  }

  // Pass 3, column-major: displayed posteriors may never decrease, because
  // every ladder ratio is at least 1.
  for (std::size_t s = 0; s < table.sort_ids.size(); ++s) {
    for (std::size_t e = 1; e < grid.size(); ++e) {
      const double prev = grid[e - 1][s].value;
      const double next = grid[e][s].value;
      if (!std::isnan(prev) && !std::isnan(next) && next < prev) {
        out.push_back({table.sort_ids[s], table.evidence_ids[e],
                       AnomalyKind::MonotonicityViolation,
                       format_double(prev) + " (" + table.evidence_ids[e - 1] +
                           ") -> " + format_double(next) + " (" +
                           table.evidence_ids[e] + ") decreases"});
      }
    }
  }

  return out;
}

FitResult fit_table(const DisplayedTable& table, const LevelSchedule& schedule,
                    double residual_threshold) {
  const auto values = table_values(table);
  FitResult result;
  result.anomalies = audit_table(table);
  result.columns.reserve(table.sort_ids.size());

  for (std::size_t s = 0; s < table.sort_ids.size(); ++s) {
    ColumnFit column;
    column.sort_id = table.sort_ids[s];

    std::vector<double> chain;
    chain.reserve(values.size() + 1);
    chain.push_back(0.5);  // the universal even prior every column starts from
    bool usable = !values.empty();
    for (const auto& row : values) {
      if (!(row[s] > 0.0 && row[s] < 1.0)) {
        usable = false;  // malformed or saturated cell: no ratio to recover
        break;
      }
      chain.push_back(row[s]);
    }
    if (usable) {
      column.steps = snap_levels(recover_ratios(chain), schedule, residual_threshold);
      for (std::size_t e = 0; e < column.steps.size(); ++e) {
        column.steps[e].evidence_id = table.evidence_ids[e];
      }
    }
    result.columns.push_back(std::move(column));
  }
  return result;
}

}  // namespace credence
