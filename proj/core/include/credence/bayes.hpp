#pragma once

#include "credence/probability.hpp"

namespace credence {

// Single-step Bayes rule in probability space:
//   P(h|e) = P(e|h) P(h) / (P(e|h) P(h) + P(e|~h) (1 - P(h))).
// Priors 0 and 1 are absorbing, and evidence with P(e|h) == P(e|~h) leaves
// the prior bitwise untouched.
Probability posterior(Probability prior, const LikelihoodPair& lik);

// Total probability of the evidence: P(e) = P(e|h) P(h) + P(e|~h) (1 - P(h)).
Probability marginal(Probability prior, const LikelihoodPair& lik);

// P(e|h) / P(e): the multiplicative effect one observation has on the prior.
// Throws std::domain_error when the marginal is zero (ill-posed question).
double impact_factor(Probability prior, const LikelihoodPair& lik);

// Odds form of the same update: posterior odds = prior odds * likelihood
// ratio. Rejects non-positive or NaN ratios.
Odds update_odds(Odds prior_odds, double likelihood_ratio);

}  // namespace credence
