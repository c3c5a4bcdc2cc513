#include <doctest.h>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "credence/engine.hpp"
#include "credence/io.hpp"

using namespace credence;
namespace io = credence::io;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool any_error_contains(const std::vector<std::string>& errors,
                        const std::string& needle) {
  for (const auto& error : errors) {
    if (error.find(needle) != std::string::npos) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("canonical dataset round-trips through JSON") {
  const AssessmentMatrix original = canonical_dataset();
  const std::string text = io::save_dataset(original);
  const io::LoadResult loaded = io::load_dataset(text);
  REQUIRE(loaded.errors.empty());
  REQUIRE(loaded.matrix.has_value());
  CHECK(*loaded.matrix == original);

  // Serialization is a fixed point: saving the loaded matrix gives the
  // identical document.
  CHECK(io::save_dataset(*loaded.matrix) == text);
}

TEST_CASE("the shipped dataset file is the canonical dataset") {
  const std::string text = slurp(std::string(CREDENCE_DATA_DIR) +
                                 "/canonical-dataset.json");
  CHECK(text == io::save_dataset(canonical_dataset()));
  const io::LoadResult loaded = io::load_dataset(text);
  REQUIRE(loaded.matrix.has_value());
  CHECK(*loaded.matrix == canonical_dataset());
}

TEST_CASE("load_dataset reports syntax errors with location context") {
  const io::LoadResult result = io::load_dataset("{\"schema_version\": ");
  CHECK_FALSE(result.matrix.has_value());
  REQUIRE(result.errors.size() == 1);
  CHECK(result.errors[0].find("parse error") != std::string::npos);
}

TEST_CASE("load_dataset rejects non-object documents") {
  CHECK(any_error_contains(io::load_dataset("[1, 2]").errors,
                           "top level must be a JSON object"));
  CHECK(any_error_contains(io::load_dataset("42").errors,
                           "top level must be a JSON object"));
}

TEST_CASE("load_dataset rejects unknown and missing fields") {
  const auto result = io::load_dataset(R"({
    "schema_version": "1",
    "sortz": [],
    "evidences": [],
    "levels": [],
    "cells": {}
  })");
  CHECK(any_error_contains(result.errors, "unknown field 'sortz'"));
  CHECK(any_error_contains(result.errors, "'sorts' must be present"));
}

TEST_CASE("load_dataset rejects wrong schema versions") {
  const auto result = io::load_dataset(R"({
    "schema_version": "2",
    "sorts": [],
    "evidences": [],
    "levels": [],
    "cells": {}
  })");
  CHECK(any_error_contains(result.errors, "unsupported schema_version"));
}

TEST_CASE("load_dataset pinpoints element-level defects") {
  const auto result = io::load_dataset(R"({
    "schema_version": "1",
    "sorts": [
      {"id": "S1", "name": "one"},
      {"id": "S2"},
      {"id": "S3", "name": "three", "shoe_size": 42}
    ],
    "evidences": [
      {"id": "Ev1", "name": "first", "year": "not-a-year"}
    ],
    "levels": [
      {"name": "broken", "given_h": 0.0, "given_not_h": 0.5},
      {"name": "half", "given_h": 0.6}
    ],
    "cells": {
      "S1": {"Ev1": "half"},
      "S9": {"Ev1": "half"},
      "S3": {"Ev9": "half", "Ev1": 12}
    }
  })");
  CHECK_FALSE(result.matrix.has_value());
  CHECK(any_error_contains(result.errors, "sorts[1]: missing field 'name'"));
  CHECK(any_error_contains(result.errors, "unknown field 'shoe_size'"));
  CHECK(any_error_contains(result.errors, "'year' must be an integer"));
  CHECK(any_error_contains(result.errors, "levels[0]"));
  CHECK(any_error_contains(result.errors, "levels[1]: missing field 'given_not_h'"));
  CHECK(any_error_contains(result.errors, "unknown sort id 'S9'"));
  CHECK(any_error_contains(result.errors, "unknown evidence id 'Ev9'"));
  CHECK(any_error_contains(result.errors, "must be a level name string"));
}

TEST_CASE("load_dataset surfaces validation findings") {
  // Structurally fine JSON whose matrix is incomplete: one missing cell.
  AssessmentMatrix m = canonical_dataset();
  m.cells[4][4].clear();
  const auto result = io::load_dataset(io::save_dataset(m));
  CHECK_FALSE(result.matrix.has_value());
  CHECK(any_error_contains(result.errors, "validation: S5/Ev5: missing assessment"));
}

TEST_CASE("overrides round-trip and supersede level names") {
  AssessmentMatrix m = canonical_dataset();
  m.overrides[2][3] = LikelihoodPair{0.77, 0.11};
  m.cells[2][3] = "";  // override carries the cell on its own
  const std::string text = io::save_dataset(m);
  const auto result = io::load_dataset(text);
  REQUIRE(result.matrix.has_value());
  CHECK(*result.matrix == m);
  CHECK(result.matrix->pair_at(2, 3) == LikelihoodPair{0.77, 0.11});
}

TEST_CASE("load_schedule accepts bare and full documents") {
  const auto bare = io::load_schedule(R"({
    "levels": [
      {"name": "meh", "given_h": 0.5, "given_not_h": 0.5},
      {"name": "sure", "given_h": 0.9, "given_not_h": 0.1}
    ]
  })");
  REQUIRE(bare.schedule.has_value());
  CHECK(bare.schedule->entries().size() == 2);
  CHECK(bare.schedule->find("sure")->ratio() == doctest::Approx(9.0));

  const auto full = io::load_schedule(io::save_dataset(canonical_dataset()));
  REQUIRE(full.schedule.has_value());
  CHECK(*full.schedule == canonical_schedule());
}

TEST_CASE("load_schedule rejects defective schedules") {
  CHECK(any_error_contains(io::load_schedule("{}").errors,
                           "missing field 'levels'"));
  CHECK(any_error_contains(io::load_schedule(R"({"levels": []})").errors,
                           "must not be empty"));
  CHECK(any_error_contains(
      io::load_schedule(R"({"levels": [
        {"name": "a", "given_h": 0.5, "given_not_h": 0.5},
        {"name": "a", "given_h": 0.6, "given_not_h": 0.4}
      ]})")
          .errors,
      "duplicate support level name"));
  CHECK(any_error_contains(
      io::load_schedule(R"({"levels": [
        {"name": "против", "given_h": 0.2, "given_not_h": 0.8}
      ]})")
          .errors,
      "ratio below 1"));
}

TEST_CASE("load_table_grid reads headered whitespace grids") {
  const auto result = io::load_table_grid(
      "lesson\tS1\tS2\n"
      "Ev1\t0.50000\t0.85000\n"
      "Ev2\t0.75000\t0,95775\n");
  REQUIRE(result.errors.empty());
  REQUIRE(result.table.has_value());
  const DisplayedTable& t = *result.table;
  CHECK(t.sort_ids == std::vector<std::string>{"S1", "S2"});
  CHECK(t.evidence_ids == std::vector<std::string>{"Ev1", "Ev2"});
  CHECK(t.cells[1][1] == "0,95775");  // raw text survives loading
}

TEST_CASE("load_table_grid synthesizes missing ids") {
  const auto result = io::load_table_grid("0.5 0.6\n0.7 0.8\n");
  REQUIRE(result.table.has_value());
  CHECK(result.table->sort_ids == std::vector<std::string>{"S1", "S2"});
  CHECK(result.table->evidence_ids == std::vector<std::string>{"Ev1", "Ev2"});
}

TEST_CASE("load_table_grid splits on semicolons before commas") {
  const auto semicolons = io::load_table_grid("0,5;0,6\n0,7;0,8\n");
  REQUIRE(semicolons.table.has_value());
  CHECK(semicolons.table->cells[0] ==
        std::vector<std::string>{"0,5", "0,6"});  // decimal commas intact

  const auto commas = io::load_table_grid("0.5,0.6\n0.7,0.8\n");
  REQUIRE(commas.table.has_value());
  CHECK(commas.table->cells[0] == std::vector<std::string>{"0.5", "0.6"});
}

TEST_CASE("load_table_grid drops extra header captions") {
  const auto result = io::load_table_grid(
      "Lessons Evidences S1 S2\n"
      "Ev1 0.5 0.6\n");
  REQUIRE(result.table.has_value());
  CHECK(result.table->sort_ids == std::vector<std::string>{"S1", "S2"});
}

TEST_CASE("load_table_grid reports structural problems") {
  CHECK(any_error_contains(io::load_table_grid("").errors, "empty"));
  CHECK(any_error_contains(io::load_table_grid("   \n\n").errors, "empty"));
  CHECK(any_error_contains(io::load_table_grid("S1 S2\n").errors,
                           "no data rows"));
  CHECK(any_error_contains(io::load_table_grid("0.5 0.6\n0.7\n").errors,
                           "expected 2"));
  CHECK(any_error_contains(io::load_table_grid("S1\nEv1 0.5 0.6\n").errors,
                           "header names 1"));
  CHECK(any_error_contains(io::load_table_grid("Ev1\nEv2\n").errors,
                           "no cells"));
}

TEST_CASE("the shipped published grid loads to the expected shape") {
  const auto result = io::load_table_grid(
      slurp(std::string(CREDENCE_DATA_DIR) + "/published-posteriors.txt"));
  REQUIRE(result.table.has_value());
  CHECK(result.table->sort_ids.size() == 9);
  CHECK(result.table->evidence_ids.size() == 7);
  CHECK(result.table->cells[1][1] == "0,95775");
  CHECK(result.table->cells[4][3] == "0,999945");
}

TEST_CASE("parse_format understands the format names") {
  CHECK(io::parse_format("md") == io::ReportFormat::Markdown);
  CHECK(io::parse_format("markdown") == io::ReportFormat::Markdown);
  CHECK(io::parse_format("csv") == io::ReportFormat::Csv);
  CHECK(io::parse_format("json") == io::ReportFormat::Json);
  CHECK_FALSE(io::parse_format("yaml").has_value());
  CHECK_FALSE(io::parse_format("").has_value());
}

TEST_CASE("markdown report matches the golden layout") {
  AssessmentMatrix m;
  m.sorts = {{"S1", "only", ""}};
  m.evidences = {{"Ev1", "first", std::nullopt, ""},
                 {"Ev2", "second", std::nullopt, ""}};
  m.schedule = canonical_schedule();
  m.reshape();
  m.cells[0][0] = "feasibility";
  m.cells[0][1] = "strong";

  const std::string md = io::emit_report(run(m), io::ReportFormat::Markdown);
  CHECK(md ==
        "| evidence | S1 |\n"
        "| --- | --- |\n"
        "| Ev1 | 0.75000 |\n"
        "| Ev2 | 0.92308 |\n"
        "\n"
        "Final singularity metric (mean of per-sort finals): 0.923076923\n");
}

TEST_CASE("csv report is the bare grid") {
  AssessmentMatrix m;
  m.sorts = {{"S1", "only", ""}, {"S2", "other", ""}};
  m.evidences = {{"Ev1", "first", std::nullopt, ""}};
  m.schedule = canonical_schedule();
  m.reshape();
  m.cells[0][0] = "weak";
  m.cells[1][0] = "decisive";

  const std::string csv = io::emit_report(run(m), io::ReportFormat::Csv);
  CHECK(csv ==
        "evidence,S1,S2\n"
        "Ev1,0.60000,0.95000\n");
}

TEST_CASE("json report round-trips every value exactly") {
  const PosteriorTable table = run(canonical_dataset());
  const std::string text = io::emit_report(table, io::ReportFormat::Json);
  const auto doc = nlohmann::json::parse(text);

  CHECK(doc.at("metric").get<double>() == table.metric.value());
  REQUIRE(doc.at("finals").size() == table.finals.size());
  for (std::size_t s = 0; s < table.finals.size(); ++s) {
    CHECK(doc.at("finals")[s].get<double>() == table.finals[s].value());
    CHECK(doc.at("sorts")[s].get<std::string>() ==
          table.trajectories[s].sort_id);
  }
  for (std::size_t e = 0; e < table.evidence_ids.size(); ++e) {
    for (std::size_t s = 0; s < table.trajectories.size(); ++s) {
      CHECK(doc.at("posteriors")[e][s].get<double>() ==
            table.trajectories[s].posteriors[e].value());
    }
  }
}

TEST_CASE("an evidence-free single-sort table renders as a one-column grid") {
  PosteriorTable table;
  table.trajectories = {Trajectory{"S1", {}}};
  table.finals = {Probability{0.5}};
  table.metric = Probability{0.5};

  CHECK(io::emit_report(table, io::ReportFormat::Markdown) ==
        "| evidence | S1 |\n"
        "| --- | --- |\n"
        "\n"
        "Final singularity metric (mean of per-sort finals): 0.500000000\n");
  CHECK(io::emit_report(table, io::ReportFormat::Csv) == "evidence,S1\n");
}

TEST_CASE("emit_report rejects inconsistent tables and unknown formats") {
  PosteriorTable table;
  table.evidence_ids = {"Ev1", "Ev2"};
  table.trajectories = {Trajectory{"S1", {Probability{0.5}}}};
  table.finals = {Probability{0.5}};
  table.metric = Probability{0.5};
  CHECK_THROWS_AS(io::emit_report(table, io::ReportFormat::Csv),
                  std::invalid_argument);

  CHECK_THROWS_AS(io::emit_report(run(canonical_dataset()), "yaml"),
                  std::invalid_argument);
  CHECK(io::emit_report(run(canonical_dataset()), "csv") ==
        io::emit_report(run(canonical_dataset()), io::ReportFormat::Csv));
}

TEST_CASE("fit report lists anomalies and per-column tables") {
  DisplayedTable t;
  t.sort_ids = {"S1"};
  t.evidence_ids = {"Ev1", "Ev2"};
  t.cells = {{"0,75000"}, {"0.60000"}};
  const std::string text =
      io::emit_fit_report(fit_table(t, canonical_schedule()));
  CHECK(text.find("decimal-comma at S1/Ev1") != std::string::npos);
  CHECK(text.find("monotonicity-violation at S1/Ev2") != std::string::npos);
  CHECK(text.find("### S1") != std::string::npos);
  CHECK(text.find("prior -> Ev1") != std::string::npos);
  CHECK(text.find("(none)") != std::string::npos);  // 0.75 -> 0.6 is off-ladder

  DisplayedTable clean;
  clean.sort_ids = {"S1"};
  clean.evidence_ids = {"Ev1"};
  clean.cells = {{"0.75000"}};
  const std::string quiet =
      io::emit_fit_report(fit_table(clean, canonical_schedule()));
  CHECK(quiet.find("none found") != std::string::npos);
  CHECK(quiet.find("| prior -> Ev1 | 3.000000 | feasibility |") !=
        std::string::npos);
}

TEST_CASE("sensitivity and tornado reports carry their parameters") {
  const AssessmentMatrix m = canonical_dataset();
  const PerturbationSpec spec{0.01, 50, 42};
  const std::string sense =
      io::emit_sensitivity_report(perturb_metric(m, spec), spec);
  CHECK(sense.find("delta: 0.01\n") != std::string::npos);
  CHECK(sense.find("samples: 50\n") != std::string::npos);
  CHECK(sense.find("seed: 42\n") != std::string::npos);
  CHECK(sense.find("metric mean: ") != std::string::npos);
  CHECK(sense.find("q05: ") != std::string::npos);
  CHECK(sense.find("q95: ") != std::string::npos);

  const std::string torn = io::emit_tornado_report(tornado(m));
  CHECK(torn.find("| 1 | S9 | Ev7 | up | +0.016666667 |") != std::string::npos);
  CHECK(torn.find("base metric: ") != std::string::npos);
}
