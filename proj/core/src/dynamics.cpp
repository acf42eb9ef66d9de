#include "prefdyn/dynamics.hpp"

#include <cmath>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/errors.hpp"
#include "prefdyn/ipo.hpp"

namespace prefdyn {

namespace {

SimplexVector step(const SimplexVector& pi_t, const StepContext& ctx, int t_for_errors) {
    const DynamicsConfig& c = ctx.config;
    SimplexVector ref_t = geometric_mix(pi_t, c.pi_ref, c.alpha);
    SimplexVector mu_t = affine_mix(pi_t, c.pi_0, c.lambda);

    std::vector<double> z = log_weights(ref_t);
    if (c.solver == SolverKind::ipo) {
        std::vector<double> pm = mat_vec(ctx.preference, mu_t);
        for (int i = 0; i < ctx.preference.k; ++i) z[i] += c.beta * pm[i];
    } else {
        DpoSolution sol = dpo_solve(ctx.preference, mu_t, ctx.dpo);
        if (!sol.converged) {
            throw NumericError("NonConvergence",
                               "inner DPO solve failed at step " + std::to_string(t_for_errors));
        }
        for (int i = 0; i < ctx.preference.k; ++i) z[i] += c.beta * sol.theta[i];
    }
    return softmax(z);
}

} // namespace

SimplexVector mrs_ipo_step(const SimplexVector& pi_t, const StepContext& ctx) {
    StepContext c = ctx;
    c.config.solver = SolverKind::ipo;
    return step(pi_t, c, -1);
}

SimplexVector mrs_dpo_step(const SimplexVector& pi_t, const StepContext& ctx) {
    StepContext c = ctx;
    c.config.solver = SolverKind::dpo;
    return step(pi_t, c, -1);
}

Trajectory run_dynamics(const StepContext& ctx) {
    const DynamicsConfig& c = ctx.config;
    Trajectory traj;
    traj.config = c;
    traj.policies.reserve(static_cast<size_t>(c.horizon));
    traj.policies.push_back(c.pi_1);

    int streak = 0;
    for (int t = 1; t < c.horizon; ++t) {
        SimplexVector next = step(traj.policies.back(), ctx, t);
        for (double v : next.w) {
            if (v < 1e-300) {
                traj.collapsed_to_boundary = true;
                break;
            }
        }
        double diff = 0.0;
        for (int i = 0; i < next.k(); ++i) {
            diff = std::max(diff, std::abs(next.w[i] - traj.policies.back().w[i]));
        }
        traj.policies.push_back(std::move(next));
        if (traj.collapsed_to_boundary) break;

        if (diff < c.tolerance) {
            ++streak;
            if (streak >= 10 && !traj.converged_at) {
                traj.converged_at = t - streak + 1; // first sub-tolerance step (1-based step count)
                break;
            }
        } else {
            streak = 0;
        }
    }
    return traj;
}

LogRatioSeries log_ratio_series(const Trajectory& traj, const PreferenceMatrix& P) {
    const DynamicsConfig& c = traj.config;
    int K = P.k;
    LogRatioSeries out;
    out.ratios.reserve(traj.policies.size());
    for (const auto& pi : traj.policies) {
        std::vector<double> r(K - 1);
        for (int i = 0; i + 1 < K; ++i) r[i] = std::log(pi.w[i] / pi.w[i + 1]);
        out.ratios.push_back(std::move(r));
    }
    if (c.solver != SolverKind::ipo) return out;

    std::vector<double> rref(K - 1);
    for (int i = 0; i + 1 < K; ++i) rref[i] = std::log(c.pi_ref.w[i] / c.pi_ref.w[i + 1]);

    out.residuals.reserve(traj.policies.size() - 1);
    for (size_t t = 0; t + 1 < traj.policies.size(); ++t) {
        SimplexVector mu_t = affine_mix(traj.policies[t], c.pi_0, c.lambda);
        std::vector<double> pm = mat_vec(P, mu_t);
        std::vector<double> res(K - 1);
        for (int i = 0; i + 1 < K; ++i) {
            double predicted = c.alpha * out.ratios[t][i] + (1.0 - c.alpha) * rref[i] +
                               c.beta * (pm[i] - pm[i + 1]);
            res[i] = std::abs(out.ratios[t + 1][i] - predicted);
        }
        out.residuals.push_back(std::move(res));
    }
    return out;
}

} // namespace prefdyn
