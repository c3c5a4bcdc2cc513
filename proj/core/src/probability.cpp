#include "credence/probability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace credence {

Probability::Probability(double value) : value_(value) {
  // Written so NaN fails the test instead of sneaking through a negation.
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::domain_error("probability out of [0, 1]: " + std::to_string(value));
  }
  if (value_ == 0.0) {
    value_ = 0.0;  // normalize -0.0 so comparisons and printing are unambiguous
  }
}

Odds::Odds(double value) : value_(value) {
  if (std::isnan(value) || value < 0.0) {
    throw std::domain_error("odds must be non-negative: " + std::to_string(value));
  }
  if (value_ == 0.0) {
    value_ = 0.0;
  }
}

bool Odds::infinite() const { return std::isinf(value_); }

LikelihoodPair::LikelihoodPair(double given_h, double given_not_h)
    : given_h_(given_h), given_not_h_(given_not_h) {
  if (!(given_h > 0.0 && given_h <= 1.0)) {
    throw std::domain_error("P(e|h) out of (0, 1]: " + std::to_string(given_h));
  }
  if (!(given_not_h > 0.0 && given_not_h <= 1.0)) {
    throw std::domain_error("P(e|~h) out of (0, 1]: " + std::to_string(given_not_h));
  }
}

Odds odds_of(Probability p) {
  if (p.value() == 1.0) {
    return Odds{std::numeric_limits<double>::infinity()};
  }
  return Odds{p.value() / (1.0 - p.value())};
}

Probability prob_of(Odds o) {
  if (o.infinite()) {
    return Probability{1.0};
  }
  // For huge finite odds 1 + o rounds to o and the quotient saturates at 1,
  // which is the right limit.
  return Probability{o.value() / (1.0 + o.value())};
}

}  // namespace credence
