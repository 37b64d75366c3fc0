#include "dcmbr/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dcmbr/errors.hpp"

namespace dcmbr {

namespace {

// Gold/non-gold probability ratio of the smoothed optimum, as a log. Positive
// below the uniform point lambda = (|V|-1)/|V|, negative above it.
double log_gap(double lambda, int vocab_size) {
  return std::log((1.0 - lambda) * (vocab_size - 1) / lambda);
}

void check_lambda_open_unit(double lambda, const char* who) {
  if (!(lambda > 0.0) || !(lambda < 1.0)) {
    throw ConfigError(std::string(who) + ": lambda must lie in (0, 1)");
  }
}

}  // namespace

ProbDist optimal_smoothed(int gold_idx, double lambda, int vocab_size) {
  if (vocab_size < 2) throw ConfigError("optimal_smoothed: vocab_size must be >= 2");
  if (gold_idx < 0 || gold_idx >= vocab_size) {
    throw ConfigError("optimal_smoothed: gold index out of range");
  }
  if (!(lambda >= 0.0) || !(lambda < 1.0)) {
    throw ConfigError("optimal_smoothed: lambda must lie in [0, 1)");
  }
  std::vector<double> p(static_cast<std::size_t>(vocab_size), lambda / (vocab_size - 1));
  p[static_cast<std::size_t>(gold_idx)] = 1.0 - lambda;
  return ProbDist(std::move(p));
}

ProbDist smooth_mixture(const ProbDist& dist, double lambda) {
  if (!(lambda >= 0.0) || !(lambda <= 1.0)) {
    throw ConfigError("smooth_mixture: lambda must lie in [0, 1]");
  }
  if (lambda == 0.0) return dist;
  const int n = dist.size();
  if (n < 2) throw ConfigError("smooth_mixture: needs at least 2 entries");
  const double gold_w = 1.0 - lambda;
  const double other_w = lambda / (n - 1);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = gold_w * dist[i] + other_w * (1.0 - dist[i]);
  }
  return ProbDist(std::move(out));
}

ProbDist apply_temperature(const ProbDist& dist, double t) {
  if (!(t > 0.0)) throw ConfigError("apply_temperature: T must be > 0");
  if (t == 1.0) return dist;
  const int n = dist.size();
  std::vector<double> logp(static_cast<std::size_t>(n));
  double max_lp = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double lp = std::log(dist[i]) / t;  // log(0) = -inf keeps zeros at zero
    logp[static_cast<std::size_t>(i)] = lp;
    max_lp = std::max(max_lp, lp);
  }
  double sum = 0.0;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v = std::exp(logp[static_cast<std::size_t>(i)] - max_lp);
    out[static_cast<std::size_t>(i)] = v;
    sum += v;
  }
  for (double& v : out) v /= sum;
  return ProbDist(std::move(out));
}

double equivalence_temperature(double lambda1, double lambda2, int vocab_size) {
  if (vocab_size < 2) throw ConfigError("equivalence_temperature: vocab_size must be >= 2");
  check_lambda_open_unit(lambda1, "equivalence_temperature");
  check_lambda_open_unit(lambda2, "equivalence_temperature");
  const double uniform_point = static_cast<double>(vocab_size - 1) / vocab_size;
  if (lambda1 == uniform_point || lambda2 == uniform_point) {
    throw ConfigError("equivalence_temperature: lambda at the uniform point has no logit gap");
  }
  return log_gap(lambda1, vocab_size) / log_gap(lambda2, vocab_size);
}

double equivalence_temperature_uncorrected(double lambda1, double lambda2) {
  check_lambda_open_unit(lambda1, "equivalence_temperature_uncorrected");
  check_lambda_open_unit(lambda2, "equivalence_temperature_uncorrected");
  if (lambda2 == 0.5) {
    throw ConfigError("equivalence_temperature_uncorrected: lambda2 = 0.5 gives a zero denominator");
  }
  return std::log((1.0 - lambda1) / lambda1) / std::log((1.0 - lambda2) / lambda2);
}

double effective_smoothing(double lambda1, double t, int vocab_size) {
  if (vocab_size < 2) throw ConfigError("effective_smoothing: vocab_size must be >= 2");
  check_lambda_open_unit(lambda1, "effective_smoothing");
  if (!(t > 0.0)) throw ConfigError("effective_smoothing: T must be > 0");
  const double r = std::exp(log_gap(lambda1, vocab_size) / t);
  return (vocab_size - 1) / (vocab_size - 1 + r);
}

double label_smoothed_ce(const ProbDist& p, int gold_idx, double lambda) {
  const int n = p.size();
  if (gold_idx < 0 || gold_idx >= n) {
    throw ConfigError("label_smoothed_ce: gold index out of range");
  }
  if (!(lambda >= 0.0) || !(lambda < 1.0)) {
    throw ConfigError("label_smoothed_ce: lambda must lie in [0, 1)");
  }
  const double gold_q = 1.0 - lambda;
  const double other_q = n >= 2 ? lambda / (n - 1) : 0.0;
  double ce = 0.0;
  for (int i = 0; i < n; ++i) {
    const double q = i == gold_idx ? gold_q : other_q;
    if (q == 0.0) continue;
    if (p[i] == 0.0) return std::numeric_limits<double>::infinity();
    ce -= q * std::log(p[i]);
  }
  return ce;
}

}  // namespace dcmbr
