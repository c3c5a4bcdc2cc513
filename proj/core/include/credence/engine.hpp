#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "credence/evidence.hpp"

namespace credence {

// Thrown when a matrix fails validation; carries the full violation list so
// callers can report every defect, not just the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// The belief path of one sort: posteriors[k] is the belief after folding in
// evidence 0..k, starting from the universal even prior.
struct Trajectory {
  std::string sort_id;
  std::vector<Probability> posteriors;
};

// Full result of a run: one trajectory per sort (matrix order), the final
// posterior of each, and their mean.
struct PosteriorTable {
  std::vector<std::string> evidence_ids;
  std::vector<Trajectory> trajectories;
  std::vector<Probability> finals;
  Probability metric;
};

// Sequential odds-form updates for one sort. The fold runs in odds space
// (start at even odds, multiply in each cell's likelihood ratio) so a long
// chain of strong evidence loses no precision to values crowding 1.
// Throws ValidationError on an invalid matrix, std::out_of_range on an
// unknown sort id.
Trajectory trajectory(const AssessmentMatrix& m, std::string_view sort_id);

// All trajectories plus the aggregate metric. When `weights` is non-empty it
// must have one entry per sort; the metric becomes the weighted mean of the
// finals. Deterministic: equal inputs give bitwise-equal tables.
PosteriorTable run(const AssessmentMatrix& m, std::span<const double> weights = {});

// Final posterior of one sort computed in a single step: the likelihood
// ratios are multiplied into one Bayes factor first, then applied to the even
// prior once. Agrees with the sequential fold to near machine precision.
Probability batch_posterior(const AssessmentMatrix& m, std::string_view sort_id);

// Unweighted mean of the final posteriors. Throws std::invalid_argument on a
// table with no finals.
Probability singularity_metric(const PosteriorTable& table);

}  // namespace credence
