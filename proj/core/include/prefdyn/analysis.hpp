#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "prefdyn/dpo.hpp"
#include "prefdyn/types.hpp"

namespace prefdyn {

struct StabilityReport {
    double tilde_norm = 0.0;      // ||P - (1/2) 1 1^T||_2
    double ipo_margin = 0.0;      // alpha + (beta*lambda/2) * tilde_norm
    double sparse_margin = 0.0;   // alpha + beta*lambda*d/4
    int sparse_d = 0;             // max nonzeros per row of the tilde matrix
    bool ipo_stable = false;      // either margin < 1
    double dpo_margin = 0.0;      // alpha + beta*lambda/(mu_floor^2 * s_B)
    bool dpo_stable = false;
    std::optional<double> jacobian_radius;
};

struct CollapseReport {
    std::vector<double> delta_i;
    double delta = 0.0;
    std::optional<double> epsilon_bound;         // (exp(beta*lambda*delta/(2(1-alpha))) - 1)^{-1}
    std::optional<double> st_plus_bound;         // (K-1) exp(-beta*lambda*delta_1/(2(1-alpha)))
    std::optional<int> first_step_within_bound;  // first t with pi_{t,0} >= 1 - eps
    std::vector<double> entropy_series;
    std::optional<int> entropy_monotone_from;    // alpha = 1 runs: onset of strict decrease
};

// ||P - 1/2 11^T||_2 via power iteration on the Gram matrix, relative
// tolerance 1e-10.
double spectral_norm_tilde(const PreferenceMatrix& P);

StabilityReport ipo_stability(const PreferenceMatrix& P, double alpha, double beta, double lambda);

struct InstabilityVerdict {
    double value = 0.0;
    bool unstable = false;
};

// Cycle-margin predicate at the uniform fixed point of the RPS family:
// ipo: alpha^2 + a^2 beta^2 lambda^2 / 3 > 1 (strict);
// dpo: alpha^2 + 16 a^2 beta^2 lambda^2 / 3 >= 1.
InstabilityVerdict rps_instability(double a, double alpha, double beta, double lambda,
                                   SolverKind family);

StabilityReport dpo_stability(const PreferenceMatrix& P, double alpha, double beta, double lambda,
                              const SimplexVector& pi_0, const DpoStabilityInputs& inputs);

// Central-difference Jacobian (h = 1e-6) restricted to the sum-zero tangent
// space; spectral radius of the (K-1)-dimensional reduction.
double jacobian_spectral_radius(const std::function<SimplexVector(const SimplexVector&)>& step_map,
                                const SimplexVector& pi_star);

CollapseReport collapse_analysis(const PreferenceMatrix& P, const SimplexVector& pi_0,
                                 double alpha, double beta, double lambda,
                                 const Trajectory& traj);

double entropy(const SimplexVector& pi);
double cycle_strength(const Trajectory& traj, double burn_in_fraction = 1.0 / 3.0);
double top_mass(const SimplexVector& pi);
std::vector<double> pairwise_gaps(const SimplexVector& pi, const SimplexVector& pi_ref,
                                  double beta);

} // namespace prefdyn
