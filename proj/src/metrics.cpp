#include "synloc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace synloc {

double rmse(std::span<const double> errors) {
  if (errors.empty()) {
    throw std::invalid_argument("rmse: empty error list");
  }
  double acc = 0.0;
  for (double e : errors) acc += e * e;
  return std::sqrt(acc / static_cast<double>(errors.size()));
}

std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> errors) {
  if (errors.empty()) {
    throw std::invalid_argument("empirical_cdf: empty error list");
  }
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double frac = static_cast<double>(k + 1) / n;
    if (!out.empty() && out.back().first == sorted[k]) {
      out.back().second = frac;  // ties share the higher fraction
    } else {
      out.emplace_back(sorted[k], frac);
    }
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw std::invalid_argument("median: empty list");
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double sign_test_pvalue(int wins, int trials) {
  if (trials <= 0 || wins < 0 || wins > trials) {
    throw std::invalid_argument("sign_test_pvalue: bad counts");
  }
  // sum of Binomial(trials, 1/2) tail in log space
  double p = 0.0;
  for (int k = wins; k <= trials; ++k) {
    double log_c = 0.0;
    for (int j = 0; j < k; ++j) {
      log_c += std::log(static_cast<double>(trials - j)) -
               std::log(static_cast<double>(j + 1));
    }
    p += std::exp(log_c - trials * std::log(2.0));
  }
  return std::min(1.0, p);
}

}  // namespace synloc
