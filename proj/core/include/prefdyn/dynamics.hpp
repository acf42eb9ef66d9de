#pragma once

#include <vector>

#include "prefdyn/dpo.hpp"
#include "prefdyn/types.hpp"

namespace prefdyn {

struct StepContext {
    DynamicsConfig config;
    PreferenceMatrix preference;
    DpoSolverConfig dpo; // used when config.solver == SolverKind::dpo
};

// pi_{t+1} = softmax(log geometric_mix(pi_t, pi_ref, alpha) + beta * P * mu_t)
// with mu_t = affine_mix(pi_t, pi_0, lambda).
SimplexVector mrs_ipo_step(const SimplexVector& pi_t, const StepContext& ctx);

// Same, with beta * theta*(P, mu_t) from dpo_solve in place of beta * P * mu_t.
SimplexVector mrs_dpo_step(const SimplexVector& pi_t, const StepContext& ctx);

// Iterates from config.pi_1 for `horizon` steps; convergence = 10 consecutive
// steps with ||pi_{t+1}-pi_t||_inf below tolerance (converged_at is the first
// step of the streak). Stores every iterate. A coordinate below 1e-300
// truncates the run with collapsed_to_boundary set.
Trajectory run_dynamics(const StepContext& ctx);

struct LogRatioSeries {
    // ratios[t][i] = log(pi_{t,i} / pi_{t,i+1}), i = 0..K-2
    std::vector<std::vector<double>> ratios;
    // residuals[t][i]: one-step recursion defect (IPO runs only; empty for DPO)
    std::vector<std::vector<double>> residuals;
};

// Adjacent log-ratios; coordinates are expected already in the SST order.
LogRatioSeries log_ratio_series(const Trajectory& traj, const PreferenceMatrix& P);

} // namespace prefdyn
