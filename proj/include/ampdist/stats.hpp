#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace ampdist {

// Pr[Binomial(trials, success) >= at_least], summed term by term in log space.
double binomial_tail(int trials, double success, int at_least);

// Distribution of the number of ones among independent flags with the given
// one-probabilities (sequential convolution).
std::vector<double> count_distribution(const std::vector<double>& one_probs);

// Probability that the k-copy majority (ties count as one) disagrees with the truth,
// given the per-copy probability `one_prob` of reading 1.
double majority_error(int k, double one_prob, bool truth);

// Exact distribution of the median of `runs` (odd) i.i.d. draws from `dist`.
std::map<double, double> median_distribution(const std::map<double, double>& dist, int runs);

// Inverse-CDF draw from a discrete distribution keyed by value.
double draw(const std::map<double, double>& dist, double u);
std::size_t draw_index(const std::vector<double>& weights, double u);

}  // namespace ampdist
