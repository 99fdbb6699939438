#include "ampdist/stats.hpp"

#include <cmath>

#include "ampdist/errors.hpp"

namespace ampdist {

double binomial_tail(int trials, double success, int at_least) {
  if (trials < 0) throw ConfigError("negative trial count");
  if (at_least <= 0) return 1.0;
  if (at_least > trials) return 0.0;
  if (success <= 0) return 0.0;
  if (success >= 1) return 1.0;
  const double ls = std::log(success), lf = std::log1p(-success);
  double total = 0;
  for (int j = at_least; j <= trials; ++j) {
    const double log_c = std::lgamma(trials + 1.0) - std::lgamma(j + 1.0) - std::lgamma(trials - j + 1.0);
    total += std::exp(log_c + j * ls + (trials - j) * lf);
  }
  return std::min(total, 1.0);
}

std::vector<double> count_distribution(const std::vector<double>& one_probs) {
  std::vector<double> dist{1.0};
  for (double r : one_probs) {
    std::vector<double> next(dist.size() + 1, 0.0);
    for (std::size_t j = 0; j < dist.size(); ++j) {
      next[j] += dist[j] * (1 - r);
      next[j + 1] += dist[j] * r;
    }
    dist = std::move(next);
  }
  return dist;
}

double majority_error(int k, double one_prob, bool truth) {
  const int threshold = (k + 1) / 2;  // 2 * ones >= k
  const double says_one = binomial_tail(k, one_prob, threshold);
  return truth ? 1 - says_one : says_one;
}

std::map<double, double> median_distribution(const std::map<double, double>& dist, int runs) {
  if (runs < 1 || runs % 2 == 0) throw ConfigError("median needs an odd number of runs");
  const int need = runs / 2 + 1;
  std::map<double, double> out;
  double cdf = 0, prev_med_cdf = 0;
  for (const auto& [value, p] : dist) {
    cdf = std::min(1.0, cdf + p);
    // Pr[median <= value] = Pr[at least `need` draws <= value]
    const double med_cdf = binomial_tail(runs, cdf, need);
    const double mass = med_cdf - prev_med_cdf;
    if (mass > 0) out[value] = mass;
    prev_med_cdf = med_cdf;
  }
  return out;
}

double draw(const std::map<double, double>& dist, double u) {
  double total = 0;
  for (const auto& [v, p] : dist) total += p;
  double acc = 0;
  double last = dist.empty() ? 0.0 : dist.rbegin()->first;
  for (const auto& [v, p] : dist) {
    acc += p;
    if (u * total < acc) return v;
  }
  return last;
}

std::size_t draw_index(const std::vector<double>& weights, double u) {
  double total = 0;
  for (double w : weights) total += w;
  double acc = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    last = i;
    acc += weights[i];
    if (u * total < acc) return i;
  }
  return last;
}

}  // namespace ampdist
