#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "credence/evidence.hpp"

namespace credence {

// SplitMix64 (Steele, Lea & Flood's 64-bit finalizer-based generator). Used
// instead of <random> engines plus distributions because its entire output
// sequence is pinned by the algorithm, so sensitivity reports reproduce
// bit-for-bit across compilers and standard libraries.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform double in [0, 1) built from the top 53 bits, the portable way.
  double next_unit();

  // Independent stream for one Monte Carlo sample: sample order never changes
  // the draws a given sample sees.
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_;
};

struct PerturbationSpec {
  double delta = 0.0;        // max absolute shift applied to each P(e|h)
  std::uint64_t samples = 1;
  std::uint64_t seed = 0;
};

struct TornadoEntry {
  std::string sort_id;
  std::string evidence_id;
  int direction = 0;          // +1 = one rung up the ladder, -1 = one down
  double metric_delta = 0.0;  // metric(moved) - metric(base)
};

struct SensitivityReport {
  double metric_mean = 0.0;
  double metric_sd = 0.0;
  // (level, value) pairs, ascending by level; empty for tornado reports.
  std::vector<std::pair<double, double>> quantiles;
  // All single-cell moves, largest |metric_delta| first; empty for Monte
  // Carlo reports.
  std::vector<TornadoEntry> tornado;
};

// One perturbed copy of a schedule: every entry's P(e|h) is shifted by a
// uniform draw in [-delta, +delta], the complement structure is preserved,
// and components are clamped so the pair stays valid with ratio >= 1.
// Exposed so tests can pin the exact perturbation semantics.
LevelSchedule perturb_schedule(const LevelSchedule& schedule, double delta,
                               SplitMix64& rng);

// Monte Carlo sensitivity of the aggregate metric to the level schedule:
// `samples` independent perturbed schedules, metric recomputed under each.
// Deterministic for a given (matrix, spec). Throws ValidationError on an
// invalid matrix, std::invalid_argument on a bad spec.
SensitivityReport perturb_metric(const AssessmentMatrix& m,
                                 const PerturbationSpec& spec);

// One-at-a-time analysis: every cell is moved one ladder rung up and one
// down (saturating at the ends) and the metric shift is recorded.
SensitivityReport tornado(const AssessmentMatrix& m);

}  // namespace credence
