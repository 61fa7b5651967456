#pragma once

#include "pcfed/kernel.hpp"
#include "pcfed/ocsvm.hpp"

namespace pcfed::oracle {

/// Maximizes J(alpha) over {0 <= alpha_i <= 1/(nu n), sum alpha = 1} by
/// projected gradient ascent with step 1/lambda_max(K). Stops once a step
/// moves alpha by at most 1e-10; throws std::runtime_error after 200000
/// iterations.
AlphaVector solve_dual_reference(const KernelMatrix& K, double nu);

/// Euclidean projection onto box-and-simplex by bisection on the shift.
AlphaVector project_feasible(const AlphaVector& v, double upper);

/// Norm of the projected-gradient residual alpha - P(alpha + grad J).
double kkt_residual(const AlphaVector& alpha, const KernelMatrix& K, double nu);

}  // namespace pcfed::oracle
