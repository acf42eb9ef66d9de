#include "prefdyn/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/errors.hpp"
#include "prefdyn/structure.hpp"

namespace prefdyn {

double spectral_norm_tilde(const PreferenceMatrix& P) {
    int K = P.k;
    Eigen::MatrixXd A(K, K);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) A(i, j) = P(i, j) - 0.5;
    Eigen::MatrixXd G = A.transpose() * A;

    if (G.lpNorm<Eigen::Infinity>() == 0.0) return 0.0;

    // deterministic start with energy in every direction
    Eigen::VectorXd v(K);
    for (int i = 0; i < K; ++i) v(i) = 1.0 + 0.5 * std::cos(static_cast<double>(i) + 1.0);
    v.normalize();

    double lambda = 0.0;
    for (int it = 0; it < 100000; ++it) {
        Eigen::VectorXd w = G * v;
        double norm = w.norm();
        if (norm == 0.0) return 0.0;
        w /= norm;
        double next = w.dot(G * w);
        if (it > 0 && std::abs(next - lambda) <= 1e-10 * std::max(next, 1e-30)) {
            lambda = next;
            break;
        }
        lambda = next;
        v = w;
    }
    return std::sqrt(std::max(lambda, 0.0));
}

StabilityReport ipo_stability(const PreferenceMatrix& P, double alpha, double beta,
                              double lambda) {
    StabilityReport rep;
    rep.tilde_norm = spectral_norm_tilde(P);
    rep.ipo_margin = alpha + 0.5 * beta * lambda * rep.tilde_norm;

    int d = 0;
    for (int i = 0; i < P.k; ++i) {
        int nz = 0;
        for (int j = 0; j < P.k; ++j)
            if (std::abs(P(i, j) - 0.5) > 1e-14) ++nz;
        d = std::max(d, nz);
    }
    rep.sparse_d = d;
    rep.sparse_margin = alpha + beta * lambda * d / 4.0;
    rep.ipo_stable = rep.ipo_margin < 1.0 || rep.sparse_margin < 1.0;
    return rep;
}

InstabilityVerdict rps_instability(double a, double alpha, double beta, double lambda,
                                   SolverKind family) {
    if (!(a > 0.0 && a < 0.5)) {
        throw ValidationError("InvalidInput", "cycle margin a must lie in (0, 1/2)");
    }
    InstabilityVerdict v;
    double bl = beta * lambda;
    if (family == SolverKind::ipo) {
        v.value = alpha * alpha + a * a * bl * bl / 3.0;
        v.unstable = v.value > 1.0;
    } else {
        v.value = alpha * alpha + 16.0 * a * a * bl * bl / 3.0;
        v.unstable = v.value >= 1.0; // non-strict for the DPO cycling regime
    }
    return v;
}

StabilityReport dpo_stability(const PreferenceMatrix& P, double alpha, double beta, double lambda,
                              const SimplexVector& pi_0, const DpoStabilityInputs& inputs) {
    if (!(lambda < 1.0)) {
        throw ValidationError("InvalidInput", "dpo stability margin needs lambda < 1");
    }
    validate_simplex(pi_0.w, SimplexRole::anchor, true);
    StabilityReport rep = ipo_stability(P, alpha, beta, lambda);
    rep.dpo_margin = alpha + beta * lambda / (inputs.mu_floor * inputs.mu_floor * inputs.s_B);
    rep.dpo_stable = rep.dpo_margin < 1.0;
    return rep;
}

double jacobian_spectral_radius(
    const std::function<SimplexVector(const SimplexVector&)>& step_map,
    const SimplexVector& pi_star) {
    int K = pi_star.k();
    SimplexVector image = step_map(pi_star);
    for (int i = 0; i < K; ++i) {
        if (std::abs(image.w[i] - pi_star.w[i]) > 1e-8) {
            throw ValidationError("NotAFixedPoint", "step map moves the supplied point");
        }
    }

    // Helmert-style orthonormal basis of the sum-zero subspace
    Eigen::MatrixXd U = Eigen::MatrixXd::Zero(K, K - 1);
    for (int c = 1; c < K; ++c) {
        double s = 1.0 / std::sqrt(static_cast<double>(c) * (c + 1));
        for (int r = 0; r < c; ++r) U(r, c - 1) = s;
        U(c, c - 1) = -static_cast<double>(c) * s;
    }

    const double h = 1e-6;
    Eigen::MatrixXd J(K, K - 1);
    for (int c = 0; c < K - 1; ++c) {
        SimplexVector plus = pi_star, minus = pi_star;
        for (int i = 0; i < K; ++i) {
            plus.w[i] += h * U(i, c);
            minus.w[i] -= h * U(i, c);
        }
        SimplexVector fp = step_map(plus);
        SimplexVector fm = step_map(minus);
        double mean = 0.0;
        for (int i = 0; i < K; ++i) {
            J(i, c) = (fp.w[i] - fm.w[i]) / (2.0 * h);
            mean += J(i, c);
        }
        mean /= K; // columns live in the tangent space; remove roundoff drift
        for (int i = 0; i < K; ++i) J(i, c) -= mean;
    }

    Eigen::MatrixXd Jred = U.transpose() * J;
    Eigen::EigenSolver<Eigen::MatrixXd> es(Jred, /*computeEigenvectors=*/false);
    double radius = 0.0;
    for (int i = 0; i < K - 1; ++i) radius = std::max(radius, std::abs(es.eigenvalues()(i)));
    return radius;
}

CollapseReport collapse_analysis(const PreferenceMatrix& P, const SimplexVector& pi_0,
                                 double alpha, double beta, double lambda,
                                 const Trajectory& traj) {
    StructureReport srep = classify(P); // throws Unclassifiable when appropriate
    if (srep.cls == PrefClass::cyclic) {
        throw ValidationError("NotTransitive", "collapse analysis needs a transitive matrix");
    }
    int K = P.k;
    CollapseReport rep;
    rep.delta_i.resize(K - 1);
    for (int i = 0; i + 1 < K; ++i) {
        double acc = 0.0;
        for (int j = 0; j < K; ++j) acc += pi_0.w[j] * (P(i, j) - P(i + 1, j));
        rep.delta_i[i] = (1.0 - lambda) * acc;
    }
    rep.delta = *std::min_element(rep.delta_i.begin(), rep.delta_i.end());

    if (alpha < 1.0) {
        double expo = beta * lambda / (2.0 * (1.0 - alpha));
        if (rep.delta > 0.0) {
            rep.epsilon_bound = 1.0 / std::expm1(expo * rep.delta);
        }
        rep.st_plus_bound = (K - 1) * std::exp(-expo * rep.delta_i[0]);
    }

    rep.entropy_series.reserve(traj.policies.size());
    for (const auto& pi : traj.policies) rep.entropy_series.push_back(entropy(pi));

    if (rep.epsilon_bound && *rep.epsilon_bound < 1.0) {
        for (size_t t = 0; t < traj.policies.size(); ++t) {
            if (traj.policies[t].w[0] >= 1.0 - *rep.epsilon_bound) {
                rep.first_step_within_bound = static_cast<int>(t);
                break;
            }
        }
    }

    // onset of strictly monotone entropy decrease (scan for last violation)
    int onset = 0;
    for (size_t t = 1; t < rep.entropy_series.size(); ++t) {
        if (!(rep.entropy_series[t] < rep.entropy_series[t - 1])) onset = static_cast<int>(t);
    }
    if (onset + 1 < static_cast<int>(rep.entropy_series.size())) rep.entropy_monotone_from = onset;
    return rep;
}

double entropy(const SimplexVector& pi) {
    double h = 0.0;
    for (double v : pi.w) {
        if (v > 0.0) h -= v * std::log(v);
    }
    return h;
}

double cycle_strength(const Trajectory& traj, double burn_in_fraction) {
    size_t T = traj.policies.size();
    size_t t0 = static_cast<size_t>(std::floor(burn_in_fraction * static_cast<double>(T)));
    if (T - t0 < 2) return 0.0;
    int K = traj.policies.front().k();
    double acc = 0.0;
    size_t n = T - t0;
    for (int i = 0; i < K; ++i) {
        double mean = 0.0;
        for (size_t t = t0; t < T; ++t) mean += traj.policies[t].w[i];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (size_t t = t0; t < T; ++t) {
            double d = traj.policies[t].w[i] - mean;
            var += d * d;
        }
        acc += var / static_cast<double>(n);
    }
    return acc / K;
}

double top_mass(const SimplexVector& pi) {
    return *std::max_element(pi.w.begin(), pi.w.end());
}

std::vector<double> pairwise_gaps(const SimplexVector& pi, const SimplexVector& pi_ref,
                                  double beta) {
    int K = pi.k();
    std::vector<double> raw(K);
    for (int i = 0; i < K; ++i) raw[i] = std::log(pi.w[i] / pi_ref.w[i]) / beta;
    LogitVector theta = gauge_project(raw);
    std::vector<double> gaps;
    gaps.reserve(static_cast<size_t>(K) * (K - 1) / 2);
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) gaps.push_back(theta[i] - theta[j]);
    return gaps;
}

} // namespace prefdyn
