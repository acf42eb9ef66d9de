// Independent oracles used by the test suites. Deliberately written from the
// definitions (brute force / finite differences), not by calling the library
// code they are meant to check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/types.hpp"

namespace oracles {

using prefdyn::PreferenceMatrix;
using prefdyn::SimplexVector;

// ------------------------------------------------------------ randomness ---

inline SimplexVector random_simplex(std::mt19937_64& rng, int k, double spread = 2.0) {
    std::uniform_real_distribution<double> u(-spread, spread);
    std::vector<double> z(k);
    for (double& v : z) v = u(rng);
    return prefdyn::softmax(z);
}

inline PreferenceMatrix random_pref_matrix(std::mt19937_64& rng, int k, double lo = 0.05,
                                           double hi = 0.95) {
    std::uniform_real_distribution<double> u(lo, hi);
    PreferenceMatrix P{k, std::vector<double>(static_cast<size_t>(k) * k, 0.5)};
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            double v = u(rng);
            P.at(i, j) = v;
            P.at(j, i) = 1.0 - v;
        }
    }
    return P;
}

// ------------------------------------------- simplex descent oracle (IPO) ---

// Objective value; +inf off the open simplex so line search backs away from
// the boundary (the objective diverges there anyway).
inline double ipo_objective_direct(const std::vector<double>& pi, const PreferenceMatrix& P,
                                   const SimplexVector& mu, const SimplexVector& ref,
                                   double beta) {
    int K = P.k;
    std::vector<double> L(K);
    for (int i = 0; i < K; ++i) {
        if (pi[i] <= 0.0) return std::numeric_limits<double>::infinity();
        L[i] = std::log(pi[i] / ref.w[i]);
    }
    double obj = 0.0;
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) {
            double d = L[i] - L[j] - beta / 2.0;
            obj += mu.w[i] * mu.w[j] * P(i, j) * d * d;
        }
    return obj;
}

struct DescentResult {
    std::vector<double> pi;
    double stationarity = 0.0; // max |g_k - mean(g)| at the returned point
    int iterations = 0;
};

// Mirror descent (exponentiated gradient) with step halving, run until the
// gradient is constant across coordinates (interior stationarity).  Plain
// projected gradient in pi-space stalls around 1e-5 stationarity on large-beta
// instances where some components shrink to ~1e-8; the multiplicative update
// is well conditioned there.
inline DescentResult mirror_descent_minimize_ipo(const PreferenceMatrix& P,
                                                 const SimplexVector& mu,
                                                 const SimplexVector& ref, double beta,
                                                 int max_iter = 200000) {
    int K = P.k;
    std::vector<double> pi(K, 1.0 / K);

    auto grad = [&](const std::vector<double>& x) {
        std::vector<double> L(K), g(K);
        for (int i = 0; i < K; ++i) L[i] = std::log(x[i] / ref.w[i]);
        for (int k = 0; k < K; ++k) {
            double acc = 0.0;
            for (int j = 0; j < K; ++j) {
                acc += mu.w[k] * mu.w[j] * P(k, j) * (L[k] - L[j] - beta / 2.0);
                acc -= mu.w[j] * mu.w[k] * P(j, k) * (L[j] - L[k] - beta / 2.0);
            }
            g[k] = 2.0 * acc / x[k];
        }
        return g;
    };
    auto stationarity = [&](const std::vector<double>& g) {
        double mean = std::accumulate(g.begin(), g.end(), 0.0) / K;
        double r = 0.0;
        for (double v : g) r = std::max(r, std::abs(v - mean));
        return r;
    };

    double obj = ipo_objective_direct(pi, P, mu, ref, beta);
    double t = 1.0;
    DescentResult res;
    int it = 0;
    for (; it < max_iter; ++it) {
        std::vector<double> g = grad(pi);
        double stat = stationarity(g);
        if (stat <= 1e-11) {
            res.stationarity = stat;
            break;
        }
        bool moved = false;
        for (int ls = 0; ls < 80; ++ls) {
            std::vector<double> cand(K);
            double z = 0.0;
            // pi_i * g_i is the logit-space gradient
            for (int i = 0; i < K; ++i) {
                cand[i] = pi[i] * std::exp(-t * g[i] * pi[i]);
                z += cand[i];
            }
            for (double& v : cand) v /= z;
            double cobj = ipo_objective_direct(cand, P, mu, ref, beta);
            if (cobj < obj) {
                pi = std::move(cand);
                obj = cobj;
                moved = true;
                t *= 2.0; // adaptive: try a longer step next time
                break;
            }
            t *= 0.5;
        }
        if (!moved) {
            res.stationarity = stationarity(grad(pi));
            break;
        }
    }
    if (res.stationarity == 0.0 && it == max_iter) res.stationarity = stationarity(grad(pi));
    res.pi = pi;
    res.iterations = it;
    return res;
}

// ----------------------------------------------------- brute-force Smith ---

// smallest dominant subset by exhaustive enumeration (K <= 20)
inline std::vector<int> brute_force_smith(const PreferenceMatrix& P) {
    int K = P.k;
    int best_mask = (1 << K) - 1;
    int best_size = K;
    for (int mask = 1; mask < (1 << K); ++mask) {
        int size = __builtin_popcount(static_cast<unsigned>(mask));
        if (size >= best_size) continue;
        bool dom = true;
        for (int i = 0; i < K && dom; ++i) {
            if (!(mask >> i & 1)) continue;
            for (int j = 0; j < K && dom; ++j) {
                if (mask >> j & 1) continue;
                if (!(P(i, j) > 0.5)) dom = false;
            }
        }
        if (dom) {
            best_mask = mask;
            best_size = size;
        }
    }
    std::vector<int> out;
    for (int i = 0; i < K; ++i)
        if (best_mask >> i & 1) out.push_back(i);
    return out;
}

// ------------------------------------------------------ finite differences ---

inline std::vector<double> central_diff_grad(const std::function<double(const std::vector<double>&)>& f,
                                             std::vector<double> x, double h = 1e-5) {
    std::vector<double> g(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        double keep = x[i];
        x[i] = keep + h;
        double fp = f(x);
        x[i] = keep - h;
        double fm = f(x);
        x[i] = keep;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// ------------------------------------------------------------- statistics ---

inline double spearman_rho(std::vector<double> x, std::vector<double> y) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
        std::vector<double> r(v.size());
        for (size_t pos = 0; pos < idx.size();) {
            size_t end = pos;
            while (end + 1 < idx.size() && v[idx[end + 1]] == v[idx[pos]]) ++end;
            double avg = (static_cast<double>(pos) + static_cast<double>(end)) / 2.0;
            for (size_t q = pos; q <= end; ++q) r[idx[q]] = avg;
            pos = end + 1;
        }
        return r;
    };
    std::vector<double> rx = ranks(x), ry = ranks(y);
    double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
    double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
    double num = 0.0, dx = 0.0, dy = 0.0;
    for (size_t i = 0; i < rx.size(); ++i) {
        num += (rx[i] - mx) * (ry[i] - my);
        dx += (rx[i] - mx) * (rx[i] - mx);
        dy += (ry[i] - my) * (ry[i] - my);
    }
    if (dx == 0.0 || dy == 0.0) return 0.0;
    return num / std::sqrt(dx * dy);
}

// random nonincreasing zero-sum direction (cone combination of step vectors)
inline std::vector<double> random_nonincreasing_zero_sum(std::mt19937_64& rng, int K) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> x(K, 0.0);
    for (int m = 1; m < K; ++m) {
        // step vector: 1/m on the first m coords, -1/(K-m) on the rest
        double c = u(rng);
        for (int i = 0; i < K; ++i) {
            x[i] += c * (i < m ? 1.0 / m : -1.0 / (K - m));
        }
    }
    return x;
}

} // namespace oracles
