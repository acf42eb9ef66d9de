#include "prefdyn/dpo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/errors.hpp"

namespace prefdyn {

namespace {

constexpr double kClampLo = 1e-6;
constexpr double kClampHi = 1.0 - 1e-6;

// log sigmoid without overflow: -log(1+e^{-x})
double log_sigmoid(double x) {
    if (x >= 0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

double grad_inf_norm(const std::vector<double>& g) {
    double m = 0.0;
    for (double v : g) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

DpoStabilityInputs make_dpo_stability_inputs(double B, double lambda, const SimplexVector& pi_0) {
    DpoStabilityInputs in;
    in.B = B;
    double s = sigmoid(B);
    in.s_B = s * (1.0 - s);
    double mn = *std::min_element(pi_0.w.begin(), pi_0.w.end());
    in.mu_floor = (1.0 - lambda) * mn;
    return in;
}

std::pair<double, std::vector<double>> dpo_loss_grad(const LogitVector& theta,
                                                     const PreferenceMatrix& P,
                                                     const SimplexVector& mu) {
    int K = P.k;
    if (theta.k() != K || mu.k() != K) {
        throw ValidationError("InvalidInput", "dpo_loss_grad size mismatch");
    }
    for (double v : theta.theta) {
        if (!std::isfinite(v)) throw ValidationError("NonFiniteTheta", "theta has a non-finite entry");
    }
    double loss = 0.0;
    std::vector<double> grad(K, 0.0);
    for (int i = 0; i < K; ++i) {
        double gi = 0.0;
        for (int j = 0; j < K; ++j) {
            double d = theta.theta[i] - theta.theta[j];
            loss -= mu.w[i] * mu.w[j] * P(i, j) * log_sigmoid(d);
            gi += (sigmoid(d) - P(i, j)) * mu.w[j]; // (Q - P) mu
        }
        grad[i] = mu.w[i] * gi;
    }
    // project gradient to the sum-zero gauge
    double mean = std::accumulate(grad.begin(), grad.end(), 0.0) / K;
    for (double& v : grad) v -= mean;
    return {loss, grad};
}

DpoSolution dpo_solve(const PreferenceMatrix& P_in, const SimplexVector& mu,
                      const DpoSolverConfig& cfg) {
    int K = P_in.k;
    if (mu.k() != K) throw ValidationError("InvalidInput", "dpo_solve size mismatch");

    DpoSolution sol;
    PreferenceMatrix P = P_in;
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j < K; ++j) {
            if (i == j) continue;
            double v = P(i, j);
            if (v < kClampLo || v > kClampHi) {
                sol.clamped = true;
                P.at(i, j) = std::clamp(v, kClampLo, kClampHi);
            }
        }
    }
    if (sol.clamped) {
        // keep P a valid preference matrix after one-sided clamps
        for (int i = 0; i < K; ++i)
            for (int j = i + 1; j < K; ++j) P.at(j, i) = 1.0 - P.at(i, j);
    }

    LogitVector theta;
    theta.theta.assign(K, 0.0);
    auto [loss, grad] = dpo_loss_grad(theta, P, mu);

    int iter = 0;
    for (; iter < cfg.max_iterations; ++iter) {
        if (grad_inf_norm(grad) <= cfg.gradient_tolerance) break;

        // Laplacian Hessian: sum_{i<j} mu_i mu_j s'(theta_i-theta_j) (e_i-e_j)(e_i-e_j)^T
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(K, K);
        for (int i = 0; i < K; ++i) {
            for (int j = i + 1; j < K; ++j) {
                double s = sigmoid(theta.theta[i] - theta.theta[j]);
                double w = mu.w[i] * mu.w[j] * s * (1.0 - s);
                H(i, i) += w;
                H(j, j) += w;
                H(i, j) -= w;
                H(j, i) -= w;
            }
        }
        // Regularize along 1 (the Hessian's nullspace) so the system is PD;
        // the solution stays in the sum-zero subspace because grad is sum-zero.
        Eigen::MatrixXd M = H;
        M.array() += 1.0 / K; // + (1/K) 1 1^T
        M.diagonal().array() += cfg.damping_floor;

        Eigen::VectorXd g(K);
        for (int i = 0; i < K; ++i) g(i) = grad[i];
        Eigen::VectorXd d = M.ldlt().solve(-g);

        auto try_direction = [&](const Eigen::VectorXd& dir) -> bool {
            double slope = g.dot(dir);
            if (!(slope < 0.0)) return false;
            double t = 1.0;
            for (int ls = 0; ls < 60; ++ls) {
                LogitVector cand;
                cand.theta.resize(K);
                for (int i = 0; i < K; ++i) cand.theta[i] = theta.theta[i] + t * dir(i);
                auto [closs, cgrad] = dpo_loss_grad(cand, P, mu);
                if (closs <= loss + 1e-4 * t * slope) {
                    theta = std::move(cand);
                    loss = closs;
                    grad = std::move(cgrad);
                    return true;
                }
                t *= cfg.backtrack_factor;
            }
            return false;
        };

        if (!try_direction(d)) {
            // gradient-descent fallback
            if (!try_direction(-g)) break; // no progress possible at double precision
        }
    }

    sol.iterations = iter;
    // final gauge snap (line search preserves sum-zero up to roundoff)
    theta = gauge_project(theta.theta);
    sol.theta = theta;
    sol.q = bt_matrix(theta.theta);

    // FOC residual in the Diag(mu)(P-Q)^T mu form
    double resid = 0.0;
    for (int j = 0; j < K; ++j) {
        double acc = 0.0;
        for (int i = 0; i < K; ++i) acc += (P(i, j) - sol.q(i, j)) * mu.w[i];
        resid = std::max(resid, std::abs(mu.w[j] * acc));
    }
    sol.foc_residual = resid;
    sol.converged = resid <= cfg.gradient_tolerance;
    return sol;
}

SimplexVector dpo_policy(const LogitVector& theta, const SimplexVector& pi_ref, double beta) {
    std::vector<double> z = log_weights(pi_ref);
    for (int i = 0; i < theta.k(); ++i) z[i] += beta * theta.theta[i];
    return softmax(z);
}

InvarianceProbe bt_invariance_probe(const PreferenceMatrix& P,
                                    const std::vector<SimplexVector>& samplings,
                                    const DpoSolverConfig& cfg) {
    if (samplings.size() < 2) {
        throw ValidationError("InvalidInput", "bt_invariance_probe needs >= 2 samplings");
    }
    std::vector<LogitVector> thetas;
    thetas.reserve(samplings.size());
    for (const auto& mu : samplings) thetas.push_back(dpo_solve(P, mu, cfg).theta);

    InvarianceProbe probe;
    for (size_t a = 0; a < thetas.size(); ++a) {
        for (size_t b = a + 1; b < thetas.size(); ++b) {
            for (int i = 0; i < P.k; ++i) {
                probe.max_deviation =
                    std::max(probe.max_deviation, std::abs(thetas[a][i] - thetas[b][i]));
            }
        }
    }
    probe.bt_consistent = probe.max_deviation <= 1e-6;
    return probe;
}

double gap_g1(const LogitVector& theta, const SimplexVector& mu, const PreferenceMatrix& P) {
    double g = 0.0;
    for (int i = 0; i < P.k; ++i)
        for (int j = i + 1; j < P.k; ++j)
            g += P(j, i) / (mu.w[i] * mu.w[j]) * (theta[i] - theta[j]);
    return g;
}

double gap_g2(const LogitVector& theta, const SimplexVector& mu, const PreferenceMatrix& P) {
    int K = P.k;
    double g = 0.0;
    for (int i = 0; i < K - 1; ++i) g += P(K - 1, i) / mu.w[i] * (theta[i] - theta[K - 1]);
    return g;
}

std::pair<double, double> gap_functionals(const SimplexVector& pi, const SimplexVector& mu,
                                          const PreferenceMatrix& P, const SimplexVector& pi_ref,
                                          double beta) {
    std::vector<double> raw(P.k);
    for (int i = 0; i < P.k; ++i) {
        if (pi.w[i] <= 0.0 || pi_ref.w[i] <= 0.0) {
            throw ValidationError("ZeroSupport", "gap_functionals needs full support");
        }
        raw[i] = std::log(pi.w[i] / pi_ref.w[i]) / beta;
    }
    LogitVector theta = gauge_project(raw);
    return {gap_g1(theta, mu, P), gap_g2(theta, mu, P)};
}

GapPerturbationReport dpo_gap_perturbation(const PreferenceMatrix& P, const SimplexVector& mu,
                                           GapDirection direction, double delta,
                                           const DpoSolverConfig& cfg) {
    int K = P.k;
    std::vector<double> pert = mu.w;
    if (direction == GapDirection::inverse_mu) {
        for (int i = 0; i < K; ++i) pert[i] += delta / mu.w[i];
    } else {
        pert[K - 1] += delta;
    }
    double sum = std::accumulate(pert.begin(), pert.end(), 0.0);
    for (double& v : pert) v /= sum;
    SimplexVector mu2 = validate_simplex(pert, SimplexRole::sampling, /*require_full_support=*/true);

    LogitVector th_base = dpo_solve(P, mu, cfg).theta;
    LogitVector th_pert = dpo_solve(P, mu2, cfg).theta;

    // sort coordinates so baseline logits are descending
    std::vector<int> ord(K);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(),
                     [&](int a, int b) { return th_base[a] > th_base[b]; });

    PreferenceMatrix Ps{K, std::vector<double>(static_cast<size_t>(K) * K)};
    SimplexVector mus = mu;
    LogitVector tb, tp;
    tb.theta.resize(K);
    tp.theta.resize(K);
    for (int i = 0; i < K; ++i) {
        mus.w[i] = mu.w[ord[i]];
        tb.theta[i] = th_base[ord[i]];
        tp.theta[i] = th_pert[ord[i]];
        for (int j = 0; j < K; ++j) Ps.at(i, j) = P(ord[i], ord[j]);
    }

    GapPerturbationReport rep;
    if (direction == GapDirection::inverse_mu) {
        rep.g_before = gap_g1(tb, mus, Ps);
        rep.g_after = gap_g1(tp, mus, Ps);
    } else {
        rep.g_before = gap_g2(tb, mus, Ps);
        rep.g_after = gap_g2(tp, mus, Ps);
    }
    rep.decreased = delta > 0.0 && rep.g_after < rep.g_before;
    return rep;
}

double estimate_logit_bound(const PreferenceMatrix& P, double lambda, const SimplexVector& pi_0,
                            int samples, uint64_t seed, const DpoSolverConfig& cfg) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double B = 0.0;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> z(P.k);
        for (double& v : z) v = gauss(rng);
        SimplexVector pi = softmax(z);
        SimplexVector mu = affine_mix(pi, pi_0, lambda);
        LogitVector th = dpo_solve(P, mu, cfg).theta;
        auto [mn, mx] = std::minmax_element(th.theta.begin(), th.theta.end());
        B = std::max(B, *mx - *mn);
    }
    return B;
}

} // namespace prefdyn
