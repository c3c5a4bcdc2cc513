#pragma once

#include <compare>

namespace credence {

// A degree of belief in [0, 1]. Anything else (including NaN) throws
// std::domain_error at construction, so a Probability is valid by existence.
class Probability {
 public:
  constexpr Probability() = default;
  explicit Probability(double value);

  double value() const { return value_; }

  friend auto operator<=>(const Probability&, const Probability&) = default;

 private:
  double value_ = 0.0;
};

// Odds p / (1 - p): any non-negative double, +infinity encoding certainty.
// Negative values and NaN throw std::domain_error.
class Odds {
 public:
  constexpr Odds() = default;
  explicit Odds(double value);

  double value() const { return value_; }
  bool infinite() const;

  friend auto operator<=>(const Odds&, const Odds&) = default;

 private:
  double value_ = 0.0;
};

// The pair (P(e | h), P(e | not h)) for one piece of evidence. Components
// must lie in (0, 1]; zeros are rejected so the ratio is always finite.
class LikelihoodPair {
 public:
  LikelihoodPair(double given_h, double given_not_h);

  double given_h() const { return given_h_; }
  double given_not_h() const { return given_not_h_; }

  // The likelihood ratio (Bayes factor) carried by the evidence.
  double ratio() const { return given_h_ / given_not_h_; }

  friend bool operator==(const LikelihoodPair&, const LikelihoodPair&) = default;

 private:
  double given_h_;
  double given_not_h_;
};

// p -> p / (1 - p); certainty maps to infinite odds.
Odds odds_of(Probability p);

// o -> o / (1 + o); infinite odds map back to certainty.
Probability prob_of(Odds o);

}  // namespace credence
