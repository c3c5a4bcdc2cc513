#include "credence/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace credence::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

std::string fmt_cell(double value) { return fmt("%.5f", value); }

// --------------------------------------------------------------------------
// dataset loading

bool require_string(const ordered_json& obj, const char* key, std::string& out,
                    const std::string& where, std::vector<std::string>& errors) {
  if (!obj.contains(key)) {
    errors.push_back(where + ": missing field '" + key + "'");
    return false;
  }
  if (!obj.at(key).is_string()) {
    errors.push_back(where + ": field '" + key + "' must be a string");
    return false;
  }
  out = obj.at(key).get<std::string>();
  return true;
}

bool optional_string(const ordered_json& obj, const char* key, std::string& out,
                     const std::string& where, std::vector<std::string>& errors) {
  if (!obj.contains(key)) {
    return true;
  }
  if (!obj.at(key).is_string()) {
    errors.push_back(where + ": field '" + key + "' must be a string");
    return false;
  }
  out = obj.at(key).get<std::string>();
  return true;
}

bool require_number(const ordered_json& obj, const char* key, double& out,
                    const std::string& where, std::vector<std::string>& errors) {
  if (!obj.contains(key)) {
    errors.push_back(where + ": missing field '" + key + "'");
    return false;
  }
  if (!obj.at(key).is_number()) {
    errors.push_back(where + ": field '" + key + "' must be a number");
    return false;
  }
  out = obj.at(key).get<double>();
  return true;
}

void reject_unknown_keys(const ordered_json& obj,
                         const std::set<std::string, std::less<>>& known,
                         const std::string& where,
                         std::vector<std::string>& errors) {
  for (const auto& item : obj.items()) {
    if (known.find(item.key()) == known.end()) {
      errors.push_back(where + ": unknown field '" + item.key() + "'");
    }
  }
}

std::optional<LikelihoodPair> parse_pair(const ordered_json& obj,
                                         const std::string& where,
                                         std::vector<std::string>& errors) {
  double given_h = 0.0;
  double given_not_h = 0.0;
  const bool ok = require_number(obj, "given_h", given_h, where, errors) &
                  require_number(obj, "given_not_h", given_not_h, where, errors);
  if (!ok) {
    return std::nullopt;
  }
  try {
    return LikelihoodPair{given_h, given_not_h};
  } catch (const std::domain_error& e) {
    errors.push_back(where + ": " + e.what());
    return std::nullopt;
  }
}

std::vector<SupportLevel> parse_levels(const ordered_json& doc,
                                       std::vector<std::string>& errors) {
  std::vector<SupportLevel> levels;
  if (!doc.contains("levels")) {
    errors.push_back("missing field 'levels'");
    return levels;
  }
  if (!doc.at("levels").is_array()) {
    errors.push_back("'levels' must be an array");
    return levels;
  }
  std::size_t i = 0;
  for (const auto& entry : doc.at("levels")) {
    const std::string where = "levels[" + std::to_string(i++) + "]";
    if (!entry.is_object()) {
      errors.push_back(where + ": must be an object");
      continue;
    }
    reject_unknown_keys(entry, {"name", "given_h", "given_not_h"}, where, errors);
    std::string name;
    if (!require_string(entry, "name", name, where, errors)) {
      continue;
    }
    auto pair = parse_pair(entry, where, errors);
    if (pair) {
      levels.push_back(SupportLevel{std::move(name), *pair});
    }
  }
  return levels;
}

}  // namespace

LoadResult load_dataset(std::string_view text) {
  LoadResult result;
  auto& errors = result.errors;

  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    errors.push_back(e.what());  // carries byte position context
    return result;
  }
  if (!doc.is_object()) {
    errors.push_back("top level must be a JSON object");
    return result;
  }
  reject_unknown_keys(doc,
                      {"schema_version", "notes", "sorts", "evidences", "levels",
                       "cells", "overrides"},
                      "document", errors);

  if (!doc.contains("schema_version")) {
    errors.push_back("missing field 'schema_version'");
  } else if (!doc.at("schema_version").is_string() ||
             doc.at("schema_version").get<std::string>() != kSchemaVersion) {
    errors.push_back("unsupported schema_version (this reader understands \"" +
                     std::string(kSchemaVersion) + "\")");
  }

  AssessmentMatrix m;
  optional_string(doc, "notes", m.notes, "document", errors);

  if (!doc.contains("sorts") || !doc.at("sorts").is_array()) {
    errors.push_back("'sorts' must be present and an array");
  } else {
    std::size_t i = 0;
    for (const auto& entry : doc.at("sorts")) {
      const std::string where = "sorts[" + std::to_string(i++) + "]";
      if (!entry.is_object()) {
        errors.push_back(where + ": must be an object");
        continue;
      }
      reject_unknown_keys(entry, {"id", "name", "description"}, where, errors);
      Sort sort;
      if (!require_string(entry, "id", sort.id, where, errors) ||
          !require_string(entry, "name", sort.name, where, errors)) {
        continue;
      }
      optional_string(entry, "description", sort.description, where, errors);
      m.sorts.push_back(std::move(sort));
    }
  }

  if (!doc.contains("evidences") || !doc.at("evidences").is_array()) {
    errors.push_back("'evidences' must be present and an array");
  } else {
    std::size_t i = 0;
    for (const auto& entry : doc.at("evidences")) {
      const std::string where = "evidences[" + std::to_string(i++) + "]";
      if (!entry.is_object()) {
        errors.push_back(where + ": must be an object");
        continue;
      }
      reject_unknown_keys(entry, {"id", "name", "year", "description"}, where,
                          errors);
      Evidence evidence;
      if (!require_string(entry, "id", evidence.id, where, errors) ||
          !require_string(entry, "name", evidence.name, where, errors)) {
        continue;
      }
      if (entry.contains("year")) {
        if (!entry.at("year").is_number_integer()) {
          errors.push_back(where + ": field 'year' must be an integer");
        } else {
          evidence.year = entry.at("year").get<int>();
        }
      }
      optional_string(entry, "description", evidence.description, where, errors);
      m.evidences.push_back(std::move(evidence));
    }
  }

  m.schedule = LevelSchedule{parse_levels(doc, errors)};
  m.reshape();

  if (!doc.contains("cells") || !doc.at("cells").is_object()) {
    errors.push_back("'cells' must be present and an object keyed by sort id");
  } else {
    for (const auto& by_sort : doc.at("cells").items()) {
      const auto sort = m.sort_index(by_sort.key());
      if (!sort) {
        errors.push_back("cells: unknown sort id '" + by_sort.key() + "'");
        continue;
      }
      if (!by_sort.value().is_object()) {
        errors.push_back("cells." + by_sort.key() +
                         ": must be an object keyed by evidence id");
        continue;
      }
      for (const auto& by_evidence : by_sort.value().items()) {
        const auto evidence = m.evidence_index(by_evidence.key());
        if (!evidence) {
          errors.push_back("cells." + by_sort.key() + ": unknown evidence id '" +
                           by_evidence.key() + "'");
          continue;
        }
        if (!by_evidence.value().is_string()) {
          errors.push_back("cells." + by_sort.key() + "." + by_evidence.key() +
                           ": must be a level name string");
          continue;
        }
        m.cells[*sort][*evidence] = by_evidence.value().get<std::string>();
      }
    }
  }

  if (doc.contains("overrides")) {
    if (!doc.at("overrides").is_object()) {
      errors.push_back("'overrides' must be an object keyed by sort id");
    } else {
      for (const auto& by_sort : doc.at("overrides").items()) {
        const auto sort = m.sort_index(by_sort.key());
        if (!sort) {
          errors.push_back("overrides: unknown sort id '" + by_sort.key() + "'");
          continue;
        }
        if (!by_sort.value().is_object()) {
          errors.push_back("overrides." + by_sort.key() +
                           ": must be an object keyed by evidence id");
          continue;
        }
        for (const auto& by_evidence : by_sort.value().items()) {
          const std::string where =
              "overrides." + by_sort.key() + "." + by_evidence.key();
          const auto evidence = m.evidence_index(by_evidence.key());
          if (!evidence) {
            errors.push_back("overrides." + by_sort.key() +
                             ": unknown evidence id '" + by_evidence.key() + "'");
            continue;
          }
          if (!by_evidence.value().is_object()) {
            errors.push_back(where + ": must be an object");
            continue;
          }
          reject_unknown_keys(by_evidence.value(), {"given_h", "given_not_h"},
                              where, errors);
          auto pair = parse_pair(by_evidence.value(), where, errors);
          if (pair) {
            m.overrides[*sort][*evidence] = *pair;
          }
        }
      }
    }
  }

  if (errors.empty()) {
    for (const auto& v : validate_matrix(m)) {
      std::string location;
      if (!v.sort_id.empty()) {
        location += v.sort_id;
      }
      if (!v.evidence_id.empty()) {
        location += location.empty() ? v.evidence_id : "/" + v.evidence_id;
      }
      errors.push_back("validation: " +
                       (location.empty() ? v.message : location + ": " + v.message));
    }
  }

  if (errors.empty()) {
    result.matrix = std::move(m);
  }
  return result;
}

std::string save_dataset(const AssessmentMatrix& m) {
  ordered_json doc;
  doc["schema_version"] = std::string(kSchemaVersion);
  doc["notes"] = m.notes;

  doc["sorts"] = ordered_json::array();
  for (const auto& sort : m.sorts) {
    ordered_json entry;
    entry["id"] = sort.id;
    entry["name"] = sort.name;
    entry["description"] = sort.description;
    doc["sorts"].push_back(std::move(entry));
  }

  doc["evidences"] = ordered_json::array();
  for (const auto& evidence : m.evidences) {
    ordered_json entry;
    entry["id"] = evidence.id;
    entry["name"] = evidence.name;
    if (evidence.year) {
      entry["year"] = *evidence.year;
    }
    entry["description"] = evidence.description;
    doc["evidences"].push_back(std::move(entry));
  }

  doc["levels"] = ordered_json::array();
  for (const auto& level : m.schedule.entries()) {
    ordered_json entry;
    entry["name"] = level.name;
    entry["given_h"] = level.pair.given_h();
    entry["given_not_h"] = level.pair.given_not_h();
    doc["levels"].push_back(std::move(entry));
  }

  doc["cells"] = ordered_json::object();
  for (std::size_t s = 0; s < m.sorts.size(); ++s) {
    ordered_json row = ordered_json::object();
    for (std::size_t e = 0; e < m.evidences.size(); ++e) {
      if (s < m.cells.size() && e < m.cells[s].size() && !m.cells[s][e].empty()) {
        row[m.evidences[e].id] = m.cells[s][e];
      }
    }
    doc["cells"][m.sorts[s].id] = std::move(row);
  }

  bool any_override = false;
  for (const auto& row : m.overrides) {
    any_override |= std::any_of(row.begin(), row.end(),
                                [](const auto& o) { return o.has_value(); });
  }
  if (any_override) {
    doc["overrides"] = ordered_json::object();
    for (std::size_t s = 0; s < m.sorts.size(); ++s) {
      ordered_json row = ordered_json::object();
      for (std::size_t e = 0; e < m.evidences.size(); ++e) {
        if (m.overrides[s][e]) {
          row[m.evidences[e].id] = {{"given_h", m.overrides[s][e]->given_h()},
                                    {"given_not_h", m.overrides[s][e]->given_not_h()}};
        }
      }
      if (!row.empty()) {
        doc["overrides"][m.sorts[s].id] = std::move(row);
      }
    }
  }

  return doc.dump(2) + "\n";
}

ScheduleLoadResult load_schedule(std::string_view text) {
  ScheduleLoadResult result;
  auto& errors = result.errors;

  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    errors.push_back(e.what());
    return result;
  }
  if (!doc.is_object()) {
    errors.push_back("top level must be a JSON object");
    return result;
  }

  auto levels = parse_levels(doc, errors);

  std::set<std::string> names;
  for (const auto& level : levels) {
    if (!names.insert(level.name).second) {
      errors.push_back("duplicate support level name '" + level.name + "'");
    }
    if (level.pair.ratio() < 1.0) {
      errors.push_back("support level '" + level.name +
                       "' has likelihood ratio below 1");
    }
  }
  if (levels.empty() && errors.empty()) {
    errors.push_back("'levels' must not be empty");
  }

  if (errors.empty()) {
    result.schedule = LevelSchedule{std::move(levels)};
  }
  return result;
}

// --------------------------------------------------------------------------
// plain-text posterior grids

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  char separator;
  if (line.find(';') != std::string::npos) {
    separator = ';';
  } else if (line.find_first_of(" \t") != std::string::npos) {
    separator = ' ';  // any whitespace run
  } else {
    separator = ',';
  }

  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    // trim surrounding whitespace left by "a ; b" styles
    const auto begin = current.find_first_not_of(" \t\r");
    if (begin != std::string::npos) {
      const auto end = current.find_last_not_of(" \t\r");
      tokens.push_back(current.substr(begin, end - begin + 1));
    }
    current.clear();
  };
  for (char c : line) {
    const bool is_separator =
        separator == ' ' ? (c == ' ' || c == '\t') : c == separator;
    if (is_separator) {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  return tokens;
}

bool looks_numeric(const std::string& token) {
  std::size_t i = 0;
  if (i < token.size() && (token[i] == '+' || token[i] == '-')) {
    ++i;
  }
  return i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]));
}

}  // namespace

TableLoadResult load_table_grid(std::string_view text) {
  TableLoadResult result;
  auto& errors = result.errors;

  std::vector<std::vector<std::string>> rows;
  std::string line;
  for (std::size_t pos = 0; pos <= text.size(); ++pos) {
    if (pos == text.size() || text[pos] == '\n') {
      auto tokens = split_tokens(line);
      if (!tokens.empty()) {
        rows.push_back(std::move(tokens));
      }
      line.clear();
    } else if (text[pos] != '\r') {
      line += text[pos];
    }
  }
  if (rows.empty()) {
    errors.push_back("table file is empty");
    return result;
  }

  DisplayedTable table;
  std::size_t first_data_row = 0;
  std::vector<std::string> header;
  const bool has_header =
      std::none_of(rows[0].begin(), rows[0].end(), looks_numeric);
  if (has_header) {
    header = rows[0];
    first_data_row = 1;
    if (rows.size() == 1) {
      errors.push_back("table has a header but no data rows");
      return result;
    }
  }

  std::size_t width = 0;
  for (std::size_t r = first_data_row; r < rows.size(); ++r) {
    auto& tokens = rows[r];
    std::string label;
    if (!tokens.empty() && !looks_numeric(tokens.front())) {
      label = tokens.front();
      tokens.erase(tokens.begin());
    }
    if (tokens.empty()) {
      errors.push_back("row " + std::to_string(r + 1) + " has no cells");
      continue;
    }
    if (width == 0) {
      width = tokens.size();
    } else if (tokens.size() != width) {
      errors.push_back("row " + std::to_string(r + 1) + " has " +
                       std::to_string(tokens.size()) + " cells, expected " +
                       std::to_string(width));
      continue;
    }
    table.evidence_ids.push_back(
        label.empty() ? "Ev" + std::to_string(table.cells.size() + 1) : label);
    table.cells.push_back(std::move(tokens));
  }
  if (!errors.empty()) {
    return result;
  }

  if (has_header) {
    if (header.size() < width) {
      errors.push_back("header names " + std::to_string(header.size()) +
                       " columns but rows have " + std::to_string(width));
      return result;
    }
    // Extra leading labels ("evidence", corner captions) are dropped: the
    // last `width` header tokens are the sort ids.
    table.sort_ids.assign(header.end() - static_cast<std::ptrdiff_t>(width),
                          header.end());
  } else {
    for (std::size_t s = 0; s < width; ++s) {
      table.sort_ids.push_back("S" + std::to_string(s + 1));
    }
  }

  result.table = std::move(table);
  return result;
}

// --------------------------------------------------------------------------
// report emitters

namespace {

void require_consistent(const PosteriorTable& table) {
  for (const auto& trajectory : table.trajectories) {
    if (trajectory.posteriors.size() != table.evidence_ids.size()) {
      throw std::invalid_argument("trajectory for " + trajectory.sort_id +
                                  " has " +
                                  std::to_string(trajectory.posteriors.size()) +
                                  " posteriors but the table lists " +
                                  std::to_string(table.evidence_ids.size()) +
                                  " evidences");
    }
  }
}

std::string emit_markdown(const PosteriorTable& table) {
  std::string out = "| evidence |";
  for (const auto& trajectory : table.trajectories) {
    out += " " + trajectory.sort_id + " |";
  }
  out += "\n| --- |";
  for (std::size_t s = 0; s < table.trajectories.size(); ++s) {
    out += " --- |";
  }
  out += "\n";
  for (std::size_t e = 0; e < table.evidence_ids.size(); ++e) {
    out += "| " + table.evidence_ids[e] + " |";
    for (const auto& trajectory : table.trajectories) {
      out += " " + fmt_cell(trajectory.posteriors[e].value()) + " |";
    }
    out += "\n";
  }
  out += "\nFinal singularity metric (mean of per-sort finals): " +
         fmt("%.9f", table.metric.value()) + "\n";
  return out;
}

std::string emit_csv(const PosteriorTable& table) {
  std::string out = "evidence";
  for (const auto& trajectory : table.trajectories) {
    out += "," + trajectory.sort_id;
  }
  out += "\n";
  for (std::size_t e = 0; e < table.evidence_ids.size(); ++e) {
    out += table.evidence_ids[e];
    for (const auto& trajectory : table.trajectories) {
      out += "," + fmt_cell(trajectory.posteriors[e].value());
    }
    out += "\n";
  }
  return out;
}

std::string emit_json(const PosteriorTable& table) {
  ordered_json doc;
  doc["sorts"] = ordered_json::array();
  doc["finals"] = ordered_json::array();
  for (std::size_t s = 0; s < table.trajectories.size(); ++s) {
    doc["sorts"].push_back(table.trajectories[s].sort_id);
    doc["finals"].push_back(table.finals[s].value());
  }
  doc["evidences"] = table.evidence_ids;
  doc["posteriors"] = ordered_json::array();
  for (std::size_t e = 0; e < table.evidence_ids.size(); ++e) {
    ordered_json row = ordered_json::array();
    for (const auto& trajectory : table.trajectories) {
      row.push_back(trajectory.posteriors[e].value());
    }
    doc["posteriors"].push_back(std::move(row));
  }
  doc["metric"] = table.metric.value();
  return doc.dump(2) + "\n";
}

}  // namespace

std::optional<ReportFormat> parse_format(std::string_view name) {
  if (name == "md" || name == "markdown") {
    return ReportFormat::Markdown;
  }
  if (name == "csv") {
    return ReportFormat::Csv;
  }
  if (name == "json") {
    return ReportFormat::Json;
  }
  return std::nullopt;
}

std::string emit_report(const PosteriorTable& table, ReportFormat format) {
  require_consistent(table);
  switch (format) {
    case ReportFormat::Markdown:
      return emit_markdown(table);
    case ReportFormat::Csv:
      return emit_csv(table);
    case ReportFormat::Json:
      return emit_json(table);
  }
  throw std::invalid_argument("unhandled report format");
}

std::string emit_report(const PosteriorTable& table, std::string_view format_name) {
  const auto format = parse_format(format_name);
  if (!format) {
    throw std::invalid_argument("unknown report format '" +
                                std::string(format_name) +
                                "' (expected md, csv or json)");
  }
  return emit_report(table, *format);
}

std::string emit_fit_report(const FitResult& fit) {
  std::string out = "# Displayed-table audit\n\n";

  out += "## Anomalies (" + std::to_string(fit.anomalies.size()) + ")\n\n";
  if (fit.anomalies.empty()) {
    out += "none found\n";
  } else {
    for (const auto& anomaly : fit.anomalies) {
      out += "- " + std::string(to_string(anomaly.kind)) + " at " +
             anomaly.sort_id + "/" + anomaly.evidence_id + ": " + anomaly.detail +
             "\n";
    }
  }

  out += "\n## Recovered steps\n";
  for (const auto& column : fit.columns) {
    out += "\n### " + column.sort_id + "\n\n";
    if (column.steps.empty()) {
      out += "column skipped: cells unusable for ratio recovery\n";
      continue;
    }
    out += "| step | likelihood ratio | snapped level | residual |\n";
    out += "| --- | --- | --- | --- |\n";
    std::string previous = "prior";
    for (const auto& step : column.steps) {
      out += "| " + previous + " -> " + step.evidence_id + " | " +
             fmt("%.6f", step.lr) + " | " +
             (step.snapped_level ? *step.snapped_level : "(none)") + " | " +
             fmt("%.3e", step.relative_residual) + " |\n";
      previous = step.evidence_id;
    }
  }
  return out;
}

std::string emit_sensitivity_report(const SensitivityReport& report,
                                    const PerturbationSpec& spec) {
  std::string out = "# Schedule perturbation\n\n";
  out += "delta: " + fmt("%.17g", spec.delta) + "\n";
  out += "samples: " + std::to_string(spec.samples) + "\n";
  out += "seed: " + std::to_string(spec.seed) + "\n\n";
  out += "metric mean: " + fmt("%.17g", report.metric_mean) + "\n";
  out += "metric sd: " + fmt("%.17g", report.metric_sd) + "\n";
  for (const auto& [level, value] : report.quantiles) {
    out += "q" + fmt("%02.0f", level * 100.0) + ": " + fmt("%.17g", value) + "\n";
  }
  return out;
}

std::string emit_tornado_report(const SensitivityReport& report) {
  std::string out = "# One-rung tornado\n\n";
  out += "base metric: " + fmt("%.17g", report.metric_mean) + "\n\n";
  out += "| rank | sort | evidence | move | metric delta |\n";
  out += "| --- | --- | --- | --- | --- |\n";
  std::size_t rank = 1;
  for (const auto& entry : report.tornado) {
    out += "| " + std::to_string(rank++) + " | " + entry.sort_id + " | " +
           entry.evidence_id + " | " + (entry.direction > 0 ? "up" : "down") +
           " | " + fmt("%+.9f", entry.metric_delta) + " |\n";
  }
  return out;
}

}  // namespace credence::io
