#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "credence/probability.hpp"

namespace credence {

// A candidate pathway being tracked (one column of the assessment).
struct Sort {
  std::string id;  // ordinal, "S1".."Sn", contiguous within a matrix
  std::string name;
  std::string description;

  friend bool operator==(const Sort&, const Sort&) = default;
};

// A milestone event; listed order is the update order for every sort.
struct Evidence {
  std::string id;  // ordinal, "Ev1".."Evm", contiguous within a matrix
  std::string name;
  std::optional<int> year;
  std::string description;

  friend bool operator==(const Evidence&, const Evidence&) = default;
};

// A named rung of support an assessor can assign to (evidence, sort).
// The pair ratio must be >= 1: evidence never counts against a sort here,
// "irrelevant" (ratio exactly 1) is the floor. validate_matrix enforces it.
struct SupportLevel {
  std::string name;
  LikelihoodPair pair;

  friend bool operator==(const SupportLevel&, const SupportLevel&) = default;
};

// A rung of the deduplicated likelihood-ratio ladder, ascending by ratio.
// Aliases (same ratio under two names) collapse onto the first-listed name.
struct LadderRung {
  std::string name;
  LikelihoodPair pair;
  double ratio;
};

// An ordered list of support levels. Order is meaningful twice over: it is
// the serialization order, and it decides which alias names a ladder rung.
class LevelSchedule {
 public:
  LevelSchedule() = default;
  explicit LevelSchedule(std::vector<SupportLevel> entries)
      : entries_(std::move(entries)) {}

  const std::vector<SupportLevel>& entries() const { return entries_; }

  // nullptr when no entry has this name.
  const LikelihoodPair* find(std::string_view name) const;

  std::vector<LadderRung> ladder() const;

  friend bool operator==(const LevelSchedule&, const LevelSchedule&) = default;

 private:
  std::vector<SupportLevel> entries_;
};

// Schedule lookup that throws std::out_of_range on an unknown name.
LikelihoodPair level_pair(std::string_view name, const LevelSchedule& schedule);

// One defect found while validating a matrix. sort_id / evidence_id are empty
// when the problem is not tied to a cell (e.g. a schedule-level issue).
struct Violation {
  std::string sort_id;
  std::string evidence_id;
  std::string message;
};

// The full assessment: who is being tracked, what happened, how strongly each
// event supports each sort. cells[sort][evidence] holds a level name; the
// empty string marks a missing assessment. overrides, when non-empty, has the
// same shape and lets a cell carry a raw likelihood pair instead of a name.
struct AssessmentMatrix {
  std::vector<Sort> sorts;
  std::vector<Evidence> evidences;
  LevelSchedule schedule;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::vector<std::optional<LikelihoodPair>>> overrides;
  std::string notes;

  // Size cells/overrides to sorts x evidences (empty names, no overrides).
  void reshape();

  std::optional<std::size_t> sort_index(std::string_view id) const;
  std::optional<std::size_t> evidence_index(std::string_view id) const;

  // Effective likelihood pair of a cell: the override if present, otherwise
  // the named schedule entry. Throws std::out_of_range for a missing cell or
  // unknown level name; run validate_matrix first to get a readable report.
  LikelihoodPair pair_at(std::size_t sort, std::size_t evidence) const;

  friend bool operator==(const AssessmentMatrix&, const AssessmentMatrix&) = default;
};

// Every structural check in one pass: returns all violations, never throws.
std::vector<Violation> validate_matrix(const AssessmentMatrix& m);

// The nine-level schedule used by the reference dataset.
LevelSchedule canonical_schedule();

// The reference dataset: nine sorts, seven milestones, fully assessed.
AssessmentMatrix canonical_dataset();

}  // namespace credence
