#ifndef SYNLOC_METRICS_HPP
#define SYNLOC_METRICS_HPP

#include <span>
#include <utility>
#include <vector>

namespace synloc {

// sqrt(mean of squares); errors must be non-empty.
double rmse(std::span<const double> errors);

// Sorted (value, k/n) pairs; ties collapse to the highest fraction.
std::vector<std::pair<double, double>> empirical_cdf(std::span<const double> errors);

double median(std::vector<double> values);

// One-sided sign test: P[X >= wins] for X ~ Binomial(trials, 1/2).
// Ties are dropped by the caller.
double sign_test_pvalue(int wins, int trials);

}  // namespace synloc

#endif
