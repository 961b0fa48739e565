#include "mrf/nonid.hpp"

#include <cmath>

namespace mrf {

double nonid_h(double beta) {
  // Equivalent to e^b / (e^b + e^-b), stable for large |b|.
  return 1.0 / (1.0 + std::exp(-2.0 * beta));
}

std::array<double, 3> nonid_map(double b11p, double b12, double b13) {
  auto agree = [](double bi, double bj) {
    return nonid_h(bi) * nonid_h(bj) + nonid_h(-bi) * nonid_h(-bj);
  };
  return {agree(b11p, b12), agree(b11p, b13), agree(b12, b13)};
}

double nonid_jacobian_det(const std::array<double, 3>& point, double step) {
  double J[3][3];
  for (int col = 0; col < 3; ++col) {
    std::array<double, 3> hi = point, lo = point;
    hi[col] += step;
    lo[col] -= step;
    auto f_hi = nonid_map(hi[0], hi[1], hi[2]);
    auto f_lo = nonid_map(lo[0], lo[1], lo[2]);
    for (int row = 0; row < 3; ++row) J[row][col] = (f_hi[row] - f_lo[row]) / (2.0 * step);
  }
  return J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
         J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
         J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
}

}  // namespace mrf
