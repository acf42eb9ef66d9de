#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "prefdyn/types.hpp"

namespace prefdyn {

struct DpoSolverConfig {
    int max_iterations = 200;
    double gradient_tolerance = 1e-10;
    double backtrack_factor = 0.5;
    double damping_floor = 1e-12;
};

struct DpoSolution {
    LogitVector theta;            // sum-zero optimum
    PreferenceMatrix q;           // bt_matrix(theta)
    double foc_residual = 0.0;    // inf-norm of Diag(mu)(P-Q)^T mu
    int iterations = 0;
    bool converged = true;        // false: best iterate returned, residual above tol
    bool clamped = false;         // P had entries at 0/1, clamped to [1e-6, 1-1e-6]
};

// Inputs to the stability margin alpha + beta*lambda/(mu_floor^2 * s_B).
struct DpoStabilityInputs {
    double B = 0.0;        // uniform bound on |theta*_i - theta*_j| along the run
    double s_B = 0.25;     // sigmoid'(B)
    double mu_floor = 0.0; // (1-lambda) * min_i pi_0,i
};

DpoStabilityInputs make_dpo_stability_inputs(double B, double lambda, const SimplexVector& pi_0);

// Empirical B: solve DPO at `samples` random policies mixed into mu and take
// the largest logit spread seen.
double estimate_logit_bound(const PreferenceMatrix& P, double lambda, const SimplexVector& pi_0,
                            int samples = 64, uint64_t seed = 0x9e3779b97f4a7c15ull,
                            const DpoSolverConfig& cfg = {});

// loss = -sum_{i,j} mu_i mu_j P_ij log sigmoid(theta_i - theta_j);
// grad = Diag(mu)(Q(theta) - P) mu, gauge-projected to sum-zero.
std::pair<double, std::vector<double>> dpo_loss_grad(const LogitVector& theta,
                                                     const PreferenceMatrix& P,
                                                     const SimplexVector& mu);

// Damped Newton on the sum-zero subspace with the Laplacian Hessian,
// backtracking line search, and gradient-descent fallback.
DpoSolution dpo_solve(const PreferenceMatrix& P, const SimplexVector& mu,
                      const DpoSolverConfig& cfg = {});

// softmax(log pi_ref + beta * theta)
SimplexVector dpo_policy(const LogitVector& theta, const SimplexVector& pi_ref, double beta);

struct InvarianceProbe {
    double max_deviation = 0.0; // max pairwise inf-norm deviation of theta*
    bool bt_consistent = false; // deviation <= 1e-6
};

InvarianceProbe bt_invariance_probe(const PreferenceMatrix& P,
                                    const std::vector<SimplexVector>& samplings,
                                    const DpoSolverConfig& cfg = {});

// Weighted pairwise-gap functionals; coordinates must be pre-sorted so the
// logits are descending (the CLI records the permutation it applies).
//   g1 = sum_{i<j} (P_ji/(mu_i mu_j)) (theta_i - theta_j)
//   g2 = sum_{i != K} (P_Ki/mu_i) (theta_i - theta_K)
std::pair<double, double> gap_functionals(const SimplexVector& pi, const SimplexVector& mu,
                                          const PreferenceMatrix& P, const SimplexVector& pi_ref,
                                          double beta);

// Same functionals evaluated directly on a logit vector.
double gap_g1(const LogitVector& theta, const SimplexVector& mu, const PreferenceMatrix& P);
double gap_g2(const LogitVector& theta, const SimplexVector& mu, const PreferenceMatrix& P);

enum class GapDirection { inverse_mu, last_coordinate };

struct GapPerturbationReport {
    double g_before = 0.0;
    double g_after = 0.0;
    bool decreased = false;
};

// Re-solves DPO at mu and at the renormalized perturbed sampling, evaluating
// the matching functional (g1 for inverse-mu, g2 for last-coordinate) with the
// ORIGINAL mu weights both times.
GapPerturbationReport dpo_gap_perturbation(const PreferenceMatrix& P, const SimplexVector& mu,
                                           GapDirection direction, double delta,
                                           const DpoSolverConfig& cfg = {});

} // namespace prefdyn
