#include "prefdyn/ipo.hpp"

#include <cmath>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/errors.hpp"

namespace prefdyn {

IpoSolution ipo_solve(const PreferenceMatrix& P, const SimplexVector& mu,
                      const SimplexVector& pi_ref, double beta) {
    if (mu.k() != P.k || pi_ref.k() != P.k) {
        throw ValidationError("InvalidInput", "ipo_solve size mismatch");
    }
    if (!(beta > 0.0)) {
        throw ValidationError("InvalidInput", "ipo_solve requires beta > 0");
    }
    std::vector<double> pm = mat_vec(P, mu);
    std::vector<double> z = log_weights(pi_ref);
    for (int i = 0; i < P.k; ++i) z[i] += beta * pm[i];

    IpoSolution sol;
    sol.policy = softmax(z);
    sol.theta = gauge_project(pm);
    sol.objective = ipo_objective(sol.policy, P, mu, pi_ref, beta);
    sol.foc_residual = ipo_foc_residual(sol.policy, P, mu, pi_ref, beta);
    return sol;
}

double ipo_objective(const SimplexVector& pi, const PreferenceMatrix& P, const SimplexVector& mu,
                     const SimplexVector& pi_ref, double beta) {
    std::vector<double> L(P.k);
    for (int i = 0; i < P.k; ++i) {
        if (pi.w[i] <= 0.0) {
            throw ValidationError("ZeroSupportPolicy", "objective needs full-support pi");
        }
        L[i] = std::log(pi.w[i] / pi_ref.w[i]);
    }
    double obj = 0.0;
    for (int i = 0; i < P.k; ++i) {
        for (int j = 0; j < P.k; ++j) {
            double d = L[i] - L[j] - beta / 2.0;
            obj += mu.w[i] * mu.w[j] * P(i, j) * d * d;
        }
    }
    return obj;
}

double ipo_foc_residual(const SimplexVector& pi, const PreferenceMatrix& P,
                        const SimplexVector& mu, const SimplexVector& pi_ref, double beta) {
    std::vector<double> raw(P.k);
    for (int i = 0; i < P.k; ++i) {
        if (pi.w[i] <= 0.0 || pi_ref.w[i] <= 0.0) {
            throw ValidationError("ZeroSupportPolicy", "foc residual needs full support");
        }
        raw[i] = std::log(pi.w[i] / pi_ref.w[i]) / beta;
    }
    LogitVector theta = gauge_project(raw);

    std::vector<double> pm = mat_vec(P, mu);
    double mu_dot_theta = 0.0;
    for (int i = 0; i < P.k; ++i) mu_dot_theta += mu.w[i] * theta.theta[i];

    double resid = 0.0;
    for (int i = 0; i < P.k; ++i) {
        // (Diag(mu) - mu mu^T) theta - Diag(mu)(P mu - 1/2)
        double v = mu.w[i] * theta.theta[i] - mu.w[i] * mu_dot_theta - mu.w[i] * (pm[i] - 0.5);
        resid = std::max(resid, std::abs(v));
    }
    return resid;
}

} // namespace prefdyn
