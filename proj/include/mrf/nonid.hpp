#pragma once

#include <array>

namespace mrf {

// Noisy three-spin example: a star with centre u1 and leaves u2, u3, where
// u1 is observed through a binary symmetric channel modelled as an extra
// leaf u1'. The map sends (beta_11', beta_12, beta_13) to the pairwise
// agreement parameters (p_1'2, p_1'3, p_23).

/// h(beta) = e^beta / (e^beta + e^-beta).
double nonid_h(double beta);

/// p_ij = h(b_i) h(b_j) + h(-b_i) h(-b_j) for the three pairs.
std::array<double, 3> nonid_map(double b11p, double b12, double b13);

/// Determinant of the Jacobian of nonid_map by central differences.
double nonid_jacobian_det(const std::array<double, 3>& point, double step = 1e-5);

}  // namespace mrf
