#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "credence/engine.hpp"
#include "credence/evidence.hpp"
#include "credence/fit.hpp"
#include "credence/io.hpp"
#include "credence/sensitivity.hpp"

namespace {

constexpr const char* kDatasetEnvVar = "CREDENCE_DATASET";

// Exit codes: 0 success, 1 bad data (unreadable, unparsable or invalid
// input), 2 usage errors. CLI11 owns the usage side; everything the data can
// get wrong funnels through these helpers.

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return std::nullopt;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int report_errors(const std::string& path, const std::vector<std::string>& errors) {
  for (const auto& error : errors) {
    std::cerr << path << ": " << error << "\n";
  }
  return 1;
}

// The dataset precedence every data-consuming subcommand shares:
// --dataset flag, then $CREDENCE_DATASET, then the built-in reference data.
std::optional<credence::AssessmentMatrix> resolve_dataset(
    const std::string& flag_path) {
  std::string path = flag_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kDatasetEnvVar)) {
      path = env;
    }
  }
  if (path.empty()) {
    return credence::canonical_dataset();
  }
  const auto text = read_file(path);
  if (!text) {
    std::cerr << path << ": cannot read file\n";
    return std::nullopt;
  }
  auto loaded = credence::io::load_dataset(*text);
  if (!loaded.matrix) {
    report_errors(path, loaded.errors);
    return std::nullopt;
  }
  return std::move(loaded.matrix);
}

int write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << out_path << ": cannot write file\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "credence: sequential Bayesian aggregation of milestone evidence over "
      "competing capability sorts"};
  app.require_subcommand(1);

  std::string dataset_path;
  std::string table_path;
  std::string schedule_path;
  std::string format = "md";
  std::string out_path;
  double delta = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  const std::string dataset_help =
      std::string("Dataset JSON file (default: $") + kDatasetEnvVar +
      ", else the built-in reference dataset)";

  auto* run_cmd = app.add_subcommand(
      "run", "Fold every sort's evidence and print the posterior grid");
  run_cmd->add_option("--dataset", dataset_path, dataset_help);
  run_cmd->add_option("--format", format, "Report format")
      ->transform(CLI::IsMember({"md", "markdown", "csv", "json"}))
      ->capture_default_str();
  run_cmd->add_option("--out", out_path, "Write the report here instead of stdout");

  auto* fit_cmd = app.add_subcommand(
      "fit", "Audit a displayed posterior grid and recover its update ratios");
  fit_cmd->add_option("--table", table_path, "Plain-text posterior grid")
      ->required();
  fit_cmd->add_option("--schedule", schedule_path,
                      "Schedule JSON to snap against (default: built-in)");

  auto* sense_cmd = app.add_subcommand(
      "sense", "Monte Carlo perturbation of the level schedule");
  sense_cmd->add_option("--delta", delta, "Max absolute shift per level")
      ->required();
  sense_cmd->add_option("--samples", samples, "Number of samples")->required();
  sense_cmd->add_option("--seed", seed, "Random seed")->required();
  sense_cmd->add_option("--dataset", dataset_path, dataset_help);

  auto* tornado_cmd = app.add_subcommand(
      "tornado", "Move every cell one ladder rung and rank the metric shifts");
  tornado_cmd->add_option("--dataset", dataset_path, dataset_help);

  auto* validate_cmd =
      app.add_subcommand("validate", "Check a dataset file and report defects");
  validate_cmd->add_option("--dataset", dataset_path, "Dataset JSON file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run_cmd) {
      const auto matrix = resolve_dataset(dataset_path);
      if (!matrix) {
        return 1;
      }
      const auto table = credence::run(*matrix);
      return write_output(credence::io::emit_report(table, format), out_path);
    }

    if (*fit_cmd) {
      const auto text = read_file(table_path);
      if (!text) {
        std::cerr << table_path << ": cannot read file\n";
        return 1;
      }
      auto loaded = credence::io::load_table_grid(*text);
      if (!loaded.table) {
        return report_errors(table_path, loaded.errors);
      }
      credence::LevelSchedule schedule = credence::canonical_schedule();
      if (!schedule_path.empty()) {
        const auto schedule_text = read_file(schedule_path);
        if (!schedule_text) {
          std::cerr << schedule_path << ": cannot read file\n";
          return 1;
        }
        auto schedule_loaded = credence::io::load_schedule(*schedule_text);
        if (!schedule_loaded.schedule) {
          return report_errors(schedule_path, schedule_loaded.errors);
        }
        schedule = std::move(*schedule_loaded.schedule);
      }
      const auto fit = credence::fit_table(*loaded.table, schedule);
      std::cout << credence::io::emit_fit_report(fit);
      return 0;
    }

    if (*sense_cmd) {
      const auto matrix = resolve_dataset(dataset_path);
      if (!matrix) {
        return 1;
      }
      const credence::PerturbationSpec spec{delta, samples, seed};
      const auto report = credence::perturb_metric(*matrix, spec);
      std::cout << credence::io::emit_sensitivity_report(report, spec);
      return 0;
    }

    if (*tornado_cmd) {
      const auto matrix = resolve_dataset(dataset_path);
      if (!matrix) {
        return 1;
      }
      const auto report = credence::tornado(*matrix);
      std::cout << credence::io::emit_tornado_report(report);
      return 0;
    }

    if (*validate_cmd) {
      const auto text = read_file(dataset_path);
      if (!text) {
        std::cerr << dataset_path << ": cannot read file\n";
        return 1;
      }
      const auto loaded = credence::io::load_dataset(*text);
      if (!loaded.matrix) {
        // The findings are the requested output, so they go to stdout.
        for (const auto& error : loaded.errors) {
          std::cout << error << "\n";
        }
        return 1;
      }
      std::cout << "dataset is valid: " << loaded.matrix->sorts.size()
                << " sorts, " << loaded.matrix->evidences.size()
                << " evidences, " << loaded.matrix->schedule.entries().size()
                << " levels\n";
      return 0;
    }
  } catch (const credence::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  return 2;  // unreachable: require_subcommand guarantees a branch above
}
