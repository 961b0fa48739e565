#pragma once

#include <json.hpp>

namespace mrf {

// Sample-size and lower-bound calculators. All logarithms are natural.

struct SampleRequirement {
  double samples = 0.0;        // ceiling of the formula (may exceed any integer type)
  double failure_bound = 0.0;  // 2 A^m / n^{C1}, m = d+2 or 2d+1
};

/// k = ceil((81(d+2)/(eps^2 delta^4 2d) + C1) d ln n). Requires d >= 1, n >= 2.
SampleRequirement required_samples_thm2(double epsilon, double delta, int d, int n, double c1,
                                        int alphabet = 2);

/// Same with 2d+1 in place of d+2.
SampleRequirement required_samples_thm3(double epsilon, double delta, int d, int n, double c1,
                                        int alphabet = 2);

/// The general-algorithm formula with 81/(eps^2 delta^4) replaced by a fitted
/// constant: k = ceil((c (2d+1)/(2d) + C1) d ln n).
double calibrated_samples(double constant, int d, int n, double c1);

/// Constant that makes calibrated_samples reproduce `k_min`; clamped at 0.
double calibrate_constant(double k_min, int d, int n, double c1);

struct CountBound {
  double log_count = 0.0;  // natural log of a lower bound on |graphs with max degree <= d|
  bool valid = false;      // false when n < 2d+4 (bound reported as 0)
};

/// (n_even/4) (ln C(n_even/2, d) - ln d!), n_even = n rounded down to even.
CountBound graph_count_lower_bound(int n, int d);

/// max(0, 1 - exp(n k ln A - log_count)): no estimator from k samples is
/// correct with probability above 1 minus this.
double error_lower_bound(int n, int d, int alphabet, double k);

nlohmann::json bounds_to_json(int n, int d, int alphabet, double epsilon, double delta, double c1);

}  // namespace mrf
