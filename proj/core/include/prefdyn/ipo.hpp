#pragma once

#include "prefdyn/types.hpp"

namespace prefdyn {

struct IpoSolution {
    SimplexVector policy;
    LogitVector theta; // beta^{-1}(log pi - log pi_ref), sum-zero
    double objective = 0.0;
    double foc_residual = 0.0;
};

// Closed-form population solution: policy proportional to
// pi_ref (x) softmax(beta * P * mu).
IpoSolution ipo_solve(const PreferenceMatrix& P, const SimplexVector& mu,
                      const SimplexVector& pi_ref, double beta);

// Population objective
//   sum_{i,j} mu_i mu_j P_ij (log(pi_i/pi_ref_i) - log(pi_j/pi_ref_j) - beta/2)^2
double ipo_objective(const SimplexVector& pi, const PreferenceMatrix& P, const SimplexVector& mu,
                     const SimplexVector& pi_ref, double beta);

// Infinity norm of (Diag(mu) - mu mu^T) theta - Diag(mu)(P mu - 1/2)
// with theta = beta^{-1}(log pi - log pi_ref), gauge-projected.
double ipo_foc_residual(const SimplexVector& pi, const PreferenceMatrix& P,
                        const SimplexVector& mu, const SimplexVector& pi_ref, double beta);

} // namespace prefdyn
