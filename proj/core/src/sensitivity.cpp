#include "credence/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "credence/engine.hpp"

namespace credence {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Probability components are kept this far away from 0 and 1 so a perturbed
// pair always stays a valid LikelihoodPair.
constexpr double kComponentFloor = 1e-6;

double clamp_component(double v) {
  return std::clamp(v, kComponentFloor, 1.0 - kComponentFloor);
}

}  // namespace

std::uint64_t SplitMix64::next() {
  state_ += kGoldenGamma;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

SplitMix64 SplitMix64::substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64{seed + (index + 1) * kGoldenGamma};
}

LevelSchedule perturb_schedule(const LevelSchedule& schedule, double delta,
                               SplitMix64& rng) {
  std::vector<SupportLevel> entries;
  entries.reserve(schedule.entries().size());
  for (const auto& entry : schedule.entries()) {
    const double shift = (2.0 * rng.next_unit() - 1.0) * delta;
    if (shift == 0.0) {
      // Zero shift keeps the entry bitwise: no round trip through arithmetic
      // that could turn 0.85 into 0.8500000000000001.
      entries.push_back(entry);
      continue;
    }
    const double gh0 = entry.pair.given_h();
    const double gnh0 = entry.pair.given_not_h();
    double gh = clamp_component(gh0 + shift);
    // Complementary pairs (p, 1-p) stay complementary under perturbation;
    // anything else shifts both components in opposite directions.
    const bool complementary = std::abs(gh0 + gnh0 - 1.0) <= 1e-12;
    double gnh = complementary ? 1.0 - gh : clamp_component(gnh0 - shift);
    if (gh < gnh) {
      // The model never lets evidence count against a sort: collapse an
      // inverted pair onto its midpoint, ratio exactly 1.
      const double mid = 0.5 * (gh + gnh);
      gh = mid;
      gnh = mid;
    }
    entries.push_back(SupportLevel{entry.name, LikelihoodPair{gh, gnh}});
  }
  return LevelSchedule{std::move(entries)};
}

SensitivityReport perturb_metric(const AssessmentMatrix& m,
                                 const PerturbationSpec& spec) {
  if (spec.samples == 0) {
    throw std::invalid_argument("sensitivity needs at least one sample");
  }
  if (!(spec.delta >= 0.0) || spec.delta >= 0.5) {
    throw std::invalid_argument("delta must lie in [0, 0.5)");
  }
  {
    auto violations = validate_matrix(m);
    if (!violations.empty()) {
      throw ValidationError(std::move(violations));
    }
  }

  std::vector<double> metrics;
  metrics.reserve(spec.samples);
  AssessmentMatrix perturbed = m;
  for (std::uint64_t k = 0; k < spec.samples; ++k) {
    SplitMix64 rng = SplitMix64::substream(spec.seed, k);
    perturbed.schedule = perturb_schedule(m.schedule, spec.delta, rng);
    metrics.push_back(run(perturbed).metric.value());
  }

  SensitivityReport report;
  const auto [lo, hi] = std::minmax_element(metrics.begin(), metrics.end());
  if (*lo == *hi) {
    // All samples identical (e.g. delta == 0): mean is that value bitwise and
    // the spread is exactly zero, rather than whatever summation noise says.
    report.metric_mean = *lo;
    report.metric_sd = 0.0;
  } else {
    double sum = 0.0;
    for (double v : metrics) {
      sum += v;
    }
    report.metric_mean = sum / static_cast<double>(metrics.size());
    double squares = 0.0;
    for (double v : metrics) {
      squares += (v - report.metric_mean) * (v - report.metric_mean);
    }
    report.metric_sd = metrics.size() > 1
                           ? std::sqrt(squares / static_cast<double>(metrics.size() - 1))
                           : 0.0;
  }

  std::vector<double> sorted = metrics;
  std::sort(sorted.begin(), sorted.end());
  for (double level : {0.05, 0.25, 0.50, 0.75, 0.95}) {
    // Linear interpolation between order statistics (the common "type 7").
    const double h = level * static_cast<double>(sorted.size() - 1);
    const std::size_t lo_index = static_cast<std::size_t>(h);
    double value = sorted[lo_index];
    if (lo_index + 1 < sorted.size()) {
      value += (h - static_cast<double>(lo_index)) * (sorted[lo_index + 1] - value);
    }
    report.quantiles.emplace_back(level, value);
  }
  return report;
}

SensitivityReport tornado(const AssessmentMatrix& m) {
  {
    auto violations = validate_matrix(m);
    if (!violations.empty()) {
      throw ValidationError(std::move(violations));
    }
  }
  const auto ladder = m.schedule.ladder();
  if (ladder.empty()) {
    throw std::invalid_argument("tornado needs a non-empty schedule");
  }

  const PosteriorTable base = run(m);
  std::vector<double> base_finals;
  base_finals.reserve(base.finals.size());
  for (const auto& p : base.finals) {
    base_finals.push_back(p.value());
  }

  auto metric_with = [&](std::size_t sort, double replaced_final) {
    double sum = 0.0;
    for (std::size_t s = 0; s < base_finals.size(); ++s) {
      sum += s == sort ? replaced_final : base_finals[s];
    }
    return sum / static_cast<double>(base_finals.size());
  };

  SensitivityReport report;
  report.metric_mean = base.metric.value();
  report.metric_sd = 0.0;

  for (std::size_t s = 0; s < m.sorts.size(); ++s) {
    for (std::size_t e = 0; e < m.evidences.size(); ++e) {
      const double cell_ratio = m.pair_at(s, e).ratio();
      // Locate the cell on the ladder; a raw override that matches no rung
      // exactly is treated as sitting on the nearest one in log space.
      std::size_t rung = 0;
      double best_distance = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < ladder.size(); ++r) {
        const double distance =
            std::abs(std::log(cell_ratio) - std::log(ladder[r].ratio));
        if (distance < best_distance) {
          rung = r;
          best_distance = distance;
        }
      }
      for (int direction : {+1, -1}) {
        const std::size_t moved =
            direction > 0 ? std::min(rung + 1, ladder.size() - 1)
                          : (rung == 0 ? 0 : rung - 1);
        TornadoEntry entry;
        entry.sort_id = m.sorts[s].id;
        entry.evidence_id = m.evidences[e].id;
        entry.direction = direction;
        if (moved == rung) {
          entry.metric_delta = 0.0;  // saturated at a ladder end
        } else {
          // Refold this sort's column with the one cell moved.
          double odds = 1.0;
          for (std::size_t k = 0; k < m.evidences.size(); ++k) {
            odds *= k == e ? ladder[moved].ratio : m.pair_at(s, k).ratio();
          }
          const double final_prob = odds / (1.0 + odds);
          entry.metric_delta = metric_with(s, final_prob) - base.metric.value();
        }
        report.tornado.push_back(std::move(entry));
      }
    }
  }

  std::stable_sort(report.tornado.begin(), report.tornado.end(),
                   [](const TornadoEntry& a, const TornadoEntry& b) {
                     return std::abs(a.metric_delta) > std::abs(b.metric_delta);
                   });
  return report;
}

}  // namespace credence
