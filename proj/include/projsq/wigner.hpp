#pragma once

#include <vector>

#include "projsq/fock.hpp"

namespace projsq {

// Wigner function through the displaced-parity formula,
//   W(x, p) = (1/pi) Tr[D(alpha) Pi D(alpha)^dagger rho],
// with alpha = (x + i p)/sqrt(2), normalized so that the integral over the
// (x, p) plane is one. Returns a matrix with entry (i, j) = W(xs[i], ps[j]).
// The grid is capped at 512x512 points.
Eigen::MatrixXd wigner_grid(const FockState& state,
                            const std::vector<double>& xs,
                            const std::vector<double>& ps);

}  // namespace projsq
