#include "credence/bayes.hpp"

#include <stdexcept>
#include <string>

namespace credence {

Probability posterior(Probability prior, const LikelihoodPair& lik) {
  const double p = prior.value();
  if (p == 0.0 || p == 1.0) {
    return prior;  // certainty is absorbing: no evidence moves it
  }
  if (lik.given_h() == lik.given_not_h()) {
    return prior;  // uninformative evidence, exact no-op by construction
  }
  const double num = lik.given_h() * p;
  const double den = num + lik.given_not_h() * (1.0 - p);
  return Probability{num / den};
}

Probability marginal(Probability prior, const LikelihoodPair& lik) {
  const double p = prior.value();
  return Probability{lik.given_h() * p + lik.given_not_h() * (1.0 - p)};
}

double impact_factor(Probability prior, const LikelihoodPair& lik) {
  const double m = marginal(prior, lik).value();
  if (m == 0.0) {
    throw std::domain_error("impact factor undefined: evidence has zero marginal");
  }
  return lik.given_h() / m;
}

Odds update_odds(Odds prior_odds, double likelihood_ratio) {
  if (!(likelihood_ratio > 0.0)) {
    throw std::domain_error("likelihood ratio must be positive: " +
                            std::to_string(likelihood_ratio));
  }
  return Odds{prior_odds.value() * likelihood_ratio};
}

}  // namespace credence
