#include "credence/evidence.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace credence {

const LikelihoodPair* LevelSchedule::find(std::string_view name) const {
  for (const auto& entry : entries_) {
    if (entry.name == name) {
      return &entry.pair;
    }
  }
  return nullptr;
}

std::vector<LadderRung> LevelSchedule::ladder() const {
  std::vector<LadderRung> rungs;
  for (const auto& entry : entries_) {
    const double ratio = entry.pair.ratio();
    const bool seen = std::any_of(rungs.begin(), rungs.end(), [&](const auto& r) {
      return r.ratio == ratio;
    });
    if (!seen) {
      rungs.push_back(LadderRung{entry.name, entry.pair, ratio});
    }
  }
  std::stable_sort(rungs.begin(), rungs.end(),
                   [](const auto& a, const auto& b) { return a.ratio < b.ratio; });
  return rungs;
}

LikelihoodPair level_pair(std::string_view name, const LevelSchedule& schedule) {
  const LikelihoodPair* pair = schedule.find(name);
  if (pair == nullptr) {
    throw std::out_of_range("unknown support level: " + std::string(name));
  }
  return *pair;
}

void AssessmentMatrix::reshape() {
  cells.assign(sorts.size(), std::vector<std::string>(evidences.size()));
  overrides.assign(sorts.size(),
                   std::vector<std::optional<LikelihoodPair>>(evidences.size()));
}

std::optional<std::size_t> AssessmentMatrix::sort_index(std::string_view id) const {
  for (std::size_t i = 0; i < sorts.size(); ++i) {
    if (sorts[i].id == id) {
      return i;
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> AssessmentMatrix::evidence_index(std::string_view id) const {
  for (std::size_t i = 0; i < evidences.size(); ++i) {
    if (evidences[i].id == id) {
      return i;
    }
  }
  return std::nullopt;
}

LikelihoodPair AssessmentMatrix::pair_at(std::size_t sort, std::size_t evidence) const {
  if (sort >= cells.size() || evidence >= cells[sort].size()) {
    throw std::out_of_range("cell index out of range");
  }
  if (!overrides.empty() && overrides[sort][evidence].has_value()) {
    return *overrides[sort][evidence];
  }
  const std::string& name = cells[sort][evidence];
  if (name.empty()) {
    throw std::out_of_range("missing assessment at " + sorts[sort].id + "/" +
                            evidences[evidence].id);
  }
  return level_pair(name, schedule);
}

std::vector<Violation> validate_matrix(const AssessmentMatrix& m) {
  std::vector<Violation> out;

  if (m.sorts.empty()) {
    out.push_back({"", "", "matrix has no sorts"});
  }
  if (m.evidences.empty()) {
    out.push_back({"", "", "matrix has no evidences"});
  }

  // Ids are ordinals: position k (1-based) must carry id "S<k>" / "Ev<k>".
  // This one rule gives uniqueness and contiguity in a single message.
  for (std::size_t i = 0; i < m.sorts.size(); ++i) {
    const std::string expected = "S" + std::to_string(i + 1);
    if (m.sorts[i].id != expected) {
      out.push_back({m.sorts[i].id, "",
                     "sort id '" + m.sorts[i].id + "' at position " +
                         std::to_string(i + 1) + " (expected '" + expected + "')"});
    }
  }
  for (std::size_t i = 0; i < m.evidences.size(); ++i) {
    const std::string expected = "Ev" + std::to_string(i + 1);
    if (m.evidences[i].id != expected) {
      out.push_back({"", m.evidences[i].id,
                     "evidence id '" + m.evidences[i].id + "' at position " +
                         std::to_string(i + 1) + " (expected '" + expected + "')"});
    }
  }

  if (m.schedule.entries().empty()) {
    out.push_back({"", "", "level schedule is empty"});
  }
  std::unordered_set<std::string> level_names;
  for (const auto& entry : m.schedule.entries()) {
    if (!level_names.insert(entry.name).second) {
      out.push_back({"", "", "duplicate support level name '" + entry.name + "'"});
    }
    if (entry.pair.ratio() < 1.0) {
      out.push_back({"", "",
                     "support level '" + entry.name +
                         "' has likelihood ratio below 1; evidence never counts "
                         "against a sort in this model"});
    }
  }

  const bool cells_shaped =
      m.cells.size() == m.sorts.size() &&
      std::all_of(m.cells.begin(), m.cells.end(), [&](const auto& row) {
        return row.size() == m.evidences.size();
      });
  if (!cells_shaped) {
    out.push_back({"", "", "cells grid is not sorts x evidences"});
  }
  const bool overrides_shaped =
      m.overrides.empty() ||
      (m.overrides.size() == m.sorts.size() &&
       std::all_of(m.overrides.begin(), m.overrides.end(), [&](const auto& row) {
         return row.size() == m.evidences.size();
       }));
  if (!overrides_shaped) {
    out.push_back({"", "", "overrides grid is not sorts x evidences"});
  }
  if (!cells_shaped || !overrides_shaped) {
    return out;  // per-cell checks would index out of range
  }

  for (std::size_t s = 0; s < m.sorts.size(); ++s) {
    for (std::size_t e = 0; e < m.evidences.size(); ++e) {
      if (!m.overrides.empty() && m.overrides[s][e].has_value()) {
        // An override supersedes the level name, so the name may be anything.
        if (m.overrides[s][e]->ratio() < 1.0) {
          out.push_back({m.sorts[s].id, m.evidences[e].id,
                         "override likelihood ratio below 1"});
        }
        continue;
      }
      const std::string& name = m.cells[s][e];
      if (name.empty()) {
        out.push_back({m.sorts[s].id, m.evidences[e].id, "missing assessment"});
      } else if (m.schedule.find(name) == nullptr) {
        out.push_back({m.sorts[s].id, m.evidences[e].id,
                       "unknown support level '" + name + "'"});
      }
    }
  }

  return out;
}

LevelSchedule canonical_schedule() {
  // "possibility" deliberately shares the ratio of "irrelevant": assessors use
  // it for "merely conceivable" judgments, and merely conceivable moves no
  // belief. The ladder collapses the alias onto "irrelevant".
  return LevelSchedule{{
      {"irrelevant", LikelihoodPair{0.50, 0.50}},
      {"possibility", LikelihoodPair{0.50, 0.50}},
      {"weak", LikelihoodPair{0.60, 0.40}},
      {"feasibility", LikelihoodPair{0.75, 0.25}},
      {"strong", LikelihoodPair{0.80, 0.20}},
      {"desirability", LikelihoodPair{0.85, 0.15}},
      {"very-strong", LikelihoodPair{0.90, 0.10}},
      {"decisive", LikelihoodPair{0.95, 0.05}},
      {"near-certain", LikelihoodPair{0.98, 0.02}},
  }};
}

AssessmentMatrix canonical_dataset() {
  AssessmentMatrix m;
  m.sorts = {
      {"S1", "Holism",
       "Integrating intelligent elements from a lower level into a higher-level "
       "intelligence"},
      {"S2", "Troubleshooting", "General problem solving"},
      {"S3", "Learning",
       "Acquiring knowledge continuously from all available sources and folding "
       "it into a congruent whole"},
      {"S4", "Creativity", "Imagination, intuition and invention"},
      {"S5", "Teleology", "Search for purposes"},
      {"S6", "Reasoning and inference", "Abductive, deductive and inductive reasoning"},
      {"S7", "Proactivity", "Initiative to detect interesting problems"},
      {"S8", "Enantiodromia", "Overcoming apparent logical contradictions"},
      {"S9", "Disambiguation",
       "Passing the Turing test through the challenge of Winograd schemas"},
  };
  m.evidences = {
      {"Ev1", "Deep Blue", 1997,
       "Won at chess against Kasparov; the paradigm of regulated, rule-bound "
       "systems"},
      {"Ev2", "DQN Atari", 2014,
       "Found an unforeseen way to maximize the Breakout score through deep "
       "learning, from scratch"},
      {"Ev3", "AlphaGo", 2016,
       "Beat Lee Sedol at Go; move 37 showed signs of intuition, combining deep "
       "learning with symbolic search"},
      {"Ev4", "AlphaZero", 2017,
       "Ignored centuries of human experience and surpassed AlphaGo and the best "
       "chess engines by self-play alone"},
      {"Ev5", "Libratus", 2017,
       "Beat four professional poker players over 20 days under chance, deception "
       "and incomplete information"},
      {"Ev6", "EQP", 1996,
       "Proved the Robbins conjecture, until then an important open problem"},
      {"Ev7", "Watson", 2011,
       "Won the Jeopardy! quiz show against the two record-holding champions"},
  };
  m.schedule = canonical_schedule();
  m.reshape();

  const char* const grid[9][7] = {
      // S1 Holism
      {"irrelevant", "feasibility", "strong", "irrelevant", "irrelevant",
       "irrelevant", "irrelevant"},
      // S2 Troubleshooting
      {"desirability", "strong", "desirability", "very-strong", "desirability",
       "near-certain", "irrelevant"},
      // S3 Learning
      {"irrelevant", "very-strong", "desirability", "decisive", "irrelevant",
       "irrelevant", "irrelevant"},
      // S4 Creativity
      {"irrelevant", "desirability", "desirability", "decisive", "feasibility",
       "feasibility", "irrelevant"},
      // S5 Teleology
      {"feasibility", "irrelevant", "feasibility", "desirability", "feasibility",
       "irrelevant", "irrelevant"},
      // S6 Reasoning and inference
      {"irrelevant", "irrelevant", "feasibility", "feasibility", "irrelevant",
       "strong", "desirability"},
      // S7 Proactivity
      {"irrelevant", "irrelevant", "irrelevant", "irrelevant", "irrelevant",
       "irrelevant", "irrelevant"},
      // S8 Enantiodromia
      {"irrelevant", "irrelevant", "irrelevant", "irrelevant", "irrelevant",
       "irrelevant", "irrelevant"},
      // S9 Disambiguation
      {"irrelevant", "irrelevant", "irrelevant", "irrelevant", "irrelevant",
       "irrelevant", "weak"},
  };
  for (std::size_t s = 0; s < 9; ++s) {
    for (std::size_t e = 0; e < 7; ++e) {
      m.cells[s][e] = grid[s][e];
    }
  }
  m.notes =
      "Reference assessment of seven AI milestones against nine capability "
      "sorts. Every sort starts from even odds; per-cell support levels are "
      "drawn from the schedule above.";
  return m;
}

}  // namespace credence
