#include "mrf/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "mrf/errors.hpp"

namespace mrf {

namespace {

void check_args(double epsilon, double delta, int d, int n, int alphabet) {
  if (!(epsilon > 0.0) || !(delta > 0.0)) throw InputError("bounds: epsilon and delta must be > 0");
  if (d < 1) throw InputError("bounds: d must be >= 1");
  if (n < 2) throw InputError("bounds: n must be >= 2");
  if (alphabet < 2) throw InputError("bounds: alphabet must be >= 2");
}

SampleRequirement requirement(double epsilon, double delta, int d, int n, double c1, int alphabet,
                              int m) {
  check_args(epsilon, delta, d, n, alphabet);
  const double constant = 81.0 * m / (epsilon * epsilon * std::pow(delta, 4) * 2.0 * d) + c1;
  SampleRequirement r;
  r.samples = std::ceil(constant * d * std::log(static_cast<double>(n)));
  r.failure_bound = 2.0 * std::pow(alphabet, m) / std::pow(static_cast<double>(n), c1);
  return r;
}

double log_binomial(int a, int b) {
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

}  // namespace

SampleRequirement required_samples_thm2(double epsilon, double delta, int d, int n, double c1,
                                        int alphabet) {
  return requirement(epsilon, delta, d, n, c1, alphabet, d + 2);
}

SampleRequirement required_samples_thm3(double epsilon, double delta, int d, int n, double c1,
                                        int alphabet) {
  return requirement(epsilon, delta, d, n, c1, alphabet, 2 * d + 1);
}

double calibrated_samples(double constant, int d, int n, double c1) {
  if (d < 1 || n < 2) throw InputError("bounds: need d >= 1 and n >= 2");
  return std::ceil((constant * (2.0 * d + 1.0) / (2.0 * d) + c1) * d * std::log(static_cast<double>(n)));
}

double calibrate_constant(double k_min, int d, int n, double c1) {
  if (d < 1 || n < 2) throw InputError("bounds: need d >= 1 and n >= 2");
  const double c = (k_min / (d * std::log(static_cast<double>(n))) - c1) * 2.0 * d / (2.0 * d + 1.0);
  return std::max(0.0, c);
}

CountBound graph_count_lower_bound(int n, int d) {
  if (d < 0 || n < 0) throw InputError("bounds: n and d must be >= 0");
  CountBound b;
  if (n < 2 * d + 4) return b;
  const int n_even = n - (n % 2);
  double value = (n_even / 4.0) * (log_binomial(n_even / 2, d) - std::lgamma(d + 1.0));
  b.log_count = std::max(0.0, value);
  b.valid = true;
  return b;
}

double error_lower_bound(int n, int d, int alphabet, double k) {
  if (alphabet < 2) throw InputError("bounds: alphabet must be >= 2");
  if (k < 0) throw InputError("bounds: k must be >= 0");
  const double exponent = n * k * std::log(static_cast<double>(alphabet)) - graph_count_lower_bound(n, d).log_count;
  return std::max(0.0, 1.0 - std::exp(exponent));
}

nlohmann::json bounds_to_json(int n, int d, int alphabet, double epsilon, double delta, double c1) {
  const auto t2 = required_samples_thm2(epsilon, delta, d, n, c1, alphabet);
  const auto t3 = required_samples_thm3(epsilon, delta, d, n, c1, alphabet);
  const auto count = graph_count_lower_bound(n, d);
  return {{"n", n},
          {"d", d},
          {"alphabet", alphabet},
          {"epsilon", epsilon},
          {"delta", delta},
          {"c1", c1},
          {"required_samples_thm2", t2.samples},
          {"failure_bound_thm2", t2.failure_bound},
          {"required_samples_thm3", t3.samples},
          {"failure_bound_thm3", t3.failure_bound},
          {"graph_count_log_lower_bound", count.log_count},
          {"graph_count_bound_valid", count.valid},
          {"error_lower_bound_k0", error_lower_bound(n, d, alphabet, 0.0)}};
}

}  // namespace mrf
