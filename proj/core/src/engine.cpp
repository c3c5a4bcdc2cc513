#include "credence/engine.hpp"

#include "credence/bayes.hpp"

namespace credence {

namespace {

std::string join_messages(const std::vector<Violation>& violations) {
  std::string text = "matrix failed validation:";
  for (const auto& v : violations) {
    text += "\n  ";
    if (!v.sort_id.empty() || !v.evidence_id.empty()) {
      text += v.sort_id;
      if (!v.sort_id.empty() && !v.evidence_id.empty()) {
        text += "/";
      }
      text += v.evidence_id;
      text += ": ";
    }
    text += v.message;
  }
  return text;
}

void require_valid(const AssessmentMatrix& m) {
  auto violations = validate_matrix(m);
  if (!violations.empty()) {
    throw ValidationError(std::move(violations));
  }
}

std::size_t require_sort(const AssessmentMatrix& m, std::string_view sort_id) {
  auto index = m.sort_index(sort_id);
  if (!index) {
    throw std::out_of_range("unknown sort id: " + std::string(sort_id));
  }
  return *index;
}

std::vector<Probability> fold_sort(const AssessmentMatrix& m, std::size_t sort) {
  std::vector<Probability> posteriors;
  posteriors.reserve(m.evidences.size());
  // Universal even prior: odds 1. Folding in odds space keeps long chains of
  // strong evidence exact instead of losing bits as probabilities crowd 1.
  Odds odds{1.0};
  for (std::size_t e = 0; e < m.evidences.size(); ++e) {
    odds = update_odds(odds, m.pair_at(sort, e).ratio());
    posteriors.push_back(prob_of(odds));
  }
  return posteriors;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_messages(violations)),
      violations_(std::move(violations)) {}

Trajectory trajectory(const AssessmentMatrix& m, std::string_view sort_id) {
  require_valid(m);
  const std::size_t index = require_sort(m, sort_id);
  return Trajectory{std::string(sort_id), fold_sort(m, index)};
}

PosteriorTable run(const AssessmentMatrix& m, std::span<const double> weights) {
  require_valid(m);
  if (!weights.empty() && weights.size() != m.sorts.size()) {
    throw std::invalid_argument("weights must have one entry per sort");
  }

  PosteriorTable table;
  table.evidence_ids.reserve(m.evidences.size());
  for (const auto& e : m.evidences) {
    table.evidence_ids.push_back(e.id);
  }
  table.trajectories.reserve(m.sorts.size());
  table.finals.reserve(m.sorts.size());
  for (std::size_t s = 0; s < m.sorts.size(); ++s) {
    table.trajectories.push_back(Trajectory{m.sorts[s].id, fold_sort(m, s)});
    table.finals.push_back(table.trajectories.back().posteriors.back());
  }

  if (weights.empty()) {
    table.metric = singularity_metric(table);
  } else {
    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t s = 0; s < table.finals.size(); ++s) {
      if (!(weights[s] >= 0.0)) {
        throw std::invalid_argument("weights must be non-negative");
      }
      weighted += weights[s] * table.finals[s].value();
      total += weights[s];
    }
    if (total == 0.0) {
      throw std::invalid_argument("weights must not all be zero");
    }
    table.metric = Probability{weighted / total};
  }
  return table;
}

Probability batch_posterior(const AssessmentMatrix& m, std::string_view sort_id) {
  require_valid(m);
  const std::size_t index = require_sort(m, sort_id);
  // Deliberately a distinct route from the sequential fold: combine all the
  // evidence into one Bayes factor, then make a single odds update.
  double combined = 1.0;
  for (std::size_t e = 0; e < m.evidences.size(); ++e) {
    combined *= m.pair_at(index, e).ratio();
  }
  return prob_of(update_odds(odds_of(Probability{0.5}), combined));
}

Probability singularity_metric(const PosteriorTable& table) {
  if (table.finals.empty()) {
    throw std::invalid_argument("posterior table has no finals to average");
  }
  double sum = 0.0;
  for (const auto& p : table.finals) {
    sum += p.value();
  }
  return Probability{sum / static_cast<double>(table.finals.size())};
}

}  // namespace credence
