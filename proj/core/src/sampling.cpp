#include "prefdyn/sampling.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/errors.hpp"
#include "prefdyn/ipo.hpp"
#include "prefdyn/structure.hpp"

namespace prefdyn {

namespace {

constexpr double kGapTol = 1e-9;
constexpr long kMaxRounds = 1000000;
constexpr int kMaxHalvings = 40;

// payoffs (A nu)_i with A = P - 1/2
std::vector<double> payoffs(const PreferenceMatrix& P, const std::vector<double>& nu) {
    std::vector<double> out(P.k, 0.0);
    for (int i = 0; i < P.k; ++i) {
        double acc = 0.0;
        for (int j = 0; j < P.k; ++j) acc += (P(i, j) - 0.5) * nu[j];
        out[i] = acc;
    }
    return out;
}

double max_payoff(const std::vector<double>& pay) {
    return *std::max_element(pay.begin(), pay.end());
}

// Try to read an exact equilibrium off an approximate strategy: for each
// prefix of the payoff-sorted rows, solve A_SS x = 0, sum x = 1 in the least
// squares sense and accept if x is a simplex point with all payoffs <= tol.
bool polish(const PreferenceMatrix& P, const std::vector<double>& nu_approx,
            std::vector<double>& out) {
    int n = P.k;
    std::vector<double> pay = payoffs(P, nu_approx);
    std::vector<int> ord(n);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return pay[a] > pay[b]; });

    for (int m = 1; m <= n; ++m) {
        Eigen::MatrixXd M(m + 1, m);
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) M(r, c) = P(ord[r], ord[c]) - 0.5;
        for (int c = 0; c < m; ++c) M(m, c) = 1.0;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
        rhs(m) = 1.0;
        Eigen::VectorXd x = M.colPivHouseholderQr().solve(rhs);

        bool feasible = true;
        for (int r = 0; r < m; ++r) {
            if (x(r) < -1e-10) feasible = false;
        }
        if (!feasible) continue;

        std::vector<double> cand(n, 0.0);
        double sum = 0.0;
        for (int r = 0; r < m; ++r) {
            double v = std::max(x(r), 0.0);
            cand[ord[r]] = v;
            sum += v;
        }
        if (sum <= 0.0) continue;
        for (double& v : cand) v /= sum;

        if (max_payoff(payoffs(P, cand)) <= kGapTol) {
            out = std::move(cand);
            return true;
        }
    }
    return false;
}

SamplingDesign epsilon_search(const PreferenceMatrix& P, const std::vector<double>& base,
                              TargetAxiom target, const std::vector<bool>& must_beat) {
    // must_beat[i] = true: coordinate must strictly exceed every false one
    SimplexVector pi_ref = uniform_simplex(P.k, SimplexRole::reference);
    double eps = 0.5;
    for (int h = 0; h < kMaxHalvings; ++h, eps /= 2.0) {
        std::vector<double> w(P.k);
        for (int i = 0; i < P.k; ++i) w[i] = (1.0 - eps) * base[i] + eps / P.k;
        SimplexVector mu = validate_simplex(w, SimplexRole::sampling, true);
        IpoSolution sol = ipo_solve(P, mu, pi_ref, 1.0);

        double margin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < P.k; ++i) {
            if (!must_beat[i]) continue;
            for (int j = 0; j < P.k; ++j) {
                if (must_beat[j]) continue;
                margin = std::min(margin, sol.policy.w[i] - sol.policy.w[j]);
            }
        }
        if (margin > 0.0) {
            SamplingDesign d;
            d.mu = mu;
            d.epsilon = eps;
            d.target = target;
            d.margin = margin;
            return d;
        }
    }
    throw NumericError("EpsilonUnderflow", "no certifying epsilon found in 40 halvings");
}

} // namespace

SimplexVector maximin_strategy(const PreferenceMatrix& P_sub) {
    int n = P_sub.k;
    std::vector<double> nu(n, 1.0 / n);
    if (n == 1) return SimplexVector{nu, SimplexRole::sampling};

    auto finish = [&](const std::vector<double>& v) {
        // exact re-verification of the pointwise bound, not just solver gap
        std::vector<double> pay = payoffs(P_sub, v);
        for (int i = 0; i < n; ++i) {
            if (pay[i] > kGapTol) {
                throw NumericError("InternalVerificationFailure", "maximin bound check failed");
            }
        }
        return SimplexVector{v, SimplexRole::sampling};
    };

    std::vector<double> logw(n, 0.0);
    std::vector<double> avg(n, 0.0);
    double log_n = std::log(static_cast<double>(n));

    for (long t = 1; t <= kMaxRounds; ++t) {
        // current strategy from the weights
        double lmax = *std::max_element(logw.begin(), logw.end());
        double z = 0.0;
        for (int i = 0; i < n; ++i) {
            nu[i] = std::exp(logw[i] - lmax);
            z += nu[i];
        }
        for (int i = 0; i < n; ++i) {
            nu[i] /= z;
            avg[i] += nu[i];
        }

        std::vector<double> pay = payoffs(P_sub, nu);
        if (max_payoff(pay) <= kGapTol) return finish(nu);

        std::vector<double> bar(n);
        for (int i = 0; i < n; ++i) bar[i] = avg[i] / static_cast<double>(t);
        if (max_payoff(payoffs(P_sub, bar)) <= kGapTol) return finish(bar);

        if (t % 25 == 0 || t == 8) {
            std::vector<double> polished;
            if (polish(P_sub, bar, polished) || polish(P_sub, nu, polished)) {
                return finish(polished);
            }
        }

        double eta = std::sqrt(log_n / static_cast<double>(t));
        for (int i = 0; i < n; ++i) logw[i] += eta * pay[i];
    }
    throw NumericError("SolverStall", "maximin duality gap not reached in 1e6 rounds");
}

SamplingDesign condorcet_top_sampling(const PreferenceMatrix& P) {
    std::optional<int> c = condorcet_winner(P);
    if (!c) throw ValidationError("NoWinner", "matrix has no Condorcet winner");
    std::vector<double> base(P.k, 0.0);
    base[*c] = 1.0;
    std::vector<bool> top(P.k, false);
    top[*c] = true;
    return epsilon_search(P, base, TargetAxiom::condorcet_top, top);
}

SamplingDesign smith_top_sampling(const PreferenceMatrix& P) {
    std::vector<int> S = smith_set(P);
    if (static_cast<int>(S.size()) == P.k) {
        SamplingDesign d;
        d.mu = uniform_simplex(P.k, SimplexRole::sampling);
        d.epsilon = 1.0;
        d.target = TargetAxiom::smith_top;
        d.margin = std::numeric_limits<double>::infinity(); // vacuous certificate
        return d;
    }
    int m = static_cast<int>(S.size());
    PreferenceMatrix sub{m, std::vector<double>(static_cast<size_t>(m) * m)};
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) sub.at(a, b) = P(S[a], S[b]);
    SimplexVector nu = maximin_strategy(sub);

    std::vector<double> base(P.k, 0.0);
    for (int a = 0; a < m; ++a) base[S[a]] = nu.w[a];
    std::vector<bool> in_smith(P.k, false);
    for (int i : S) in_smith[i] = true;
    return epsilon_search(P, base, TargetAxiom::smith_top, in_smith);
}

PreferenceMatrix prop2_counterexample(const SimplexVector& mu) {
    if (mu.k() != 3) throw ValidationError("InvalidInput", "construction is for K=3");
    validate_simplex(mu.w, SimplexRole::sampling, true);
    double m1 = mu.w[0], m2 = mu.w[1], m3 = mu.w[2];
    PreferenceMatrix P{3, std::vector<double>(9, 0.5)};
    P.at(0, 1) = 0.5 + m3 / 4.0;
    P.at(0, 2) = 0.5 + m3 / 4.0;
    P.at(1, 2) = 0.5 + (2.0 * m1 + 2.0 * m2 + m3) / 4.0;
    P.at(1, 0) = 1.0 - P(0, 1);
    P.at(2, 0) = 1.0 - P(0, 2);
    P.at(2, 1) = 1.0 - P(1, 2);
    check_preference(P);
    return P;
}

RankFailureMatrices prop4_matrices(int K, double epsilon) {
    if (K <= 2) throw ValidationError("InvalidInput", "need K > 2");
    if (!(epsilon > 0.0 && epsilon < 0.125)) {
        throw ValidationError("InvalidInput", "epsilon must lie in (0, 1/8)");
    }
    PreferenceMatrix fam{K, std::vector<double>(static_cast<size_t>(K) * K, 0.5)};
    for (int i = 1; i < K; ++i) {
        fam.at(0, i) = 0.5 + epsilon;
        fam.at(i, 0) = 0.5 - epsilon;
    }
    for (int i = 1; i < K; ++i) {
        for (int j = i + 1; j < K; ++j) {
            fam.at(i, j) = 1.0 - epsilon;
            fam.at(j, i) = epsilon;
        }
    }
    check_preference(fam);

    // strictly transitive (0 > 1 > 2 > 3), yet row0-row1 = (1,1,-2,-2)/16 and
    // row2-row3 = (-2,-2,1,1)/16, so keeping both adjacent aggregate-score
    // gaps nonnegative needs mu1+mu2 >= 2(mu3+mu4) and mu3+mu4 >= 2(mu1+mu2)
    // at once: impossible for any full-support sampling
    PreferenceMatrix fixed{4, {
        0.5,    0.5625, 0.6875, 0.5625,
        0.4375, 0.5,    0.8125, 0.6875,
        0.3125, 0.1875, 0.5,    0.5625,
        0.4375, 0.3125, 0.4375, 0.5,
    }};
    check_preference(fixed);
    return RankFailureMatrices{std::move(fam), std::move(fixed)};
}

} // namespace prefdyn
