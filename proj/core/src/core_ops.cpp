#include "prefdyn/core_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "prefdyn/errors.hpp"

namespace prefdyn {

double sigmoid(double x) {
    // branch keeps exp() argument nonpositive in both cases
    if (x >= 0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

PreferenceMatrix validate_preference(int k, const std::vector<double>& row_major) {
    if (k < 2) {
        throw ValidationError("InvalidInput", "preference matrix needs K >= 2");
    }
    if (k > kMaxK) {
        throw ValidationError("InvalidInput", "K exceeds supported maximum of 64");
    }
    if (row_major.size() != static_cast<size_t>(k) * k) {
        throw ValidationError("InvalidInput", "matrix data is not K*K");
    }
    PreferenceMatrix P{k, row_major};
    check_preference(P);
    return P;
}

PreferenceMatrix validate_preference(const std::vector<std::vector<double>>& raw) {
    int k = static_cast<int>(raw.size());
    std::vector<double> flat;
    flat.reserve(static_cast<size_t>(k) * k);
    for (const auto& row : raw) {
        if (static_cast<int>(row.size()) != k) {
            throw ValidationError("InvalidInput", "matrix is not square");
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return validate_preference(k, flat);
}

void check_preference(const PreferenceMatrix& P) {
    for (int i = 0; i < P.k; ++i) {
        for (int j = 0; j < P.k; ++j) {
            double v = P(i, j);
            if (!std::isfinite(v) || v < -kMatrixTol || v > 1.0 + kMatrixTol) {
                throw entry_out_of_range(i, j);
            }
        }
        if (std::abs(P(i, i) - 0.5) > kMatrixTol) {
            throw diagonal_not_half(i);
        }
    }
    for (int i = 0; i < P.k; ++i) {
        for (int j = i + 1; j < P.k; ++j) {
            if (std::abs(P(i, j) + P(j, i) - 1.0) > kMatrixTol) {
                throw row_column_sum_violation(i, j);
            }
        }
    }
}

SimplexVector validate_simplex(const std::vector<double>& w, SimplexRole role,
                               bool require_full_support) {
    if (w.empty()) {
        throw ValidationError("InvalidInput", "empty simplex vector");
    }
    double sum = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
        if (!std::isfinite(w[i]) || w[i] < 0.0) {
            throw ValidationError("InvalidInput",
                                  "simplex entry " + std::to_string(i) + " negative or non-finite");
        }
        if (require_full_support && w[i] <= 0.0) {
            throw ValidationError("ZeroSupportInput",
                                  "coordinate " + std::to_string(i) + " has zero mass");
        }
        sum += w[i];
    }
    if (std::abs(sum - 1.0) > kSimplexTol) {
        throw ValidationError("InvalidInput", "simplex weights sum to " + std::to_string(sum));
    }
    return SimplexVector{w, role};
}

SimplexVector softmax(const std::vector<double>& z) {
    double zmax = -std::numeric_limits<double>::infinity();
    for (double v : z) {
        if (!std::isfinite(v)) {
            throw ValidationError("NonFiniteInput", "softmax input is not finite");
        }
        zmax = std::max(zmax, v);
    }
    std::vector<double> w(z.size());
    double sum = 0.0;
    for (size_t i = 0; i < z.size(); ++i) {
        w[i] = std::exp(z[i] - zmax);
        sum += w[i];
    }
    for (double& v : w) v /= sum;
    return SimplexVector{std::move(w), SimplexRole::policy};
}

LogitVector gauge_project(const std::vector<double>& v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    LogitVector out;
    out.theta.resize(v.size());
    for (size_t i = 0; i < v.size(); ++i) out.theta[i] = v[i] - mean;
    return out;
}

std::vector<double> log_weights(const SimplexVector& pi) {
    std::vector<double> lw(pi.w.size());
    for (size_t i = 0; i < pi.w.size(); ++i) {
        if (pi.w[i] <= 0.0) {
            throw ValidationError("ZeroSupportInput",
                                  "log of zero-mass coordinate " + std::to_string(i));
        }
        lw[i] = std::log(pi.w[i]);
    }
    return lw;
}

SimplexVector geometric_mix(const SimplexVector& pi, const SimplexVector& pi_ref, double alpha) {
    if (pi.k() != pi_ref.k()) {
        throw ValidationError("InvalidInput", "geometric_mix size mismatch");
    }
    // exact endpoints, no roundoff through the log path
    if (alpha == 1.0) return pi;
    if (alpha == 0.0) return pi_ref;
    std::vector<double> lp = log_weights(pi);
    std::vector<double> lr = log_weights(pi_ref);
    std::vector<double> z(lp.size());
    for (size_t i = 0; i < z.size(); ++i) z[i] = alpha * lp[i] + (1.0 - alpha) * lr[i];
    SimplexVector out = softmax(z);
    out.role = pi_ref.role;
    return out;
}

SimplexVector affine_mix(const SimplexVector& pi, const SimplexVector& pi_0, double lambda) {
    if (pi.k() != pi_0.k()) {
        throw ValidationError("InvalidInput", "affine_mix size mismatch");
    }
    std::vector<double> w(pi.w.size());
    for (size_t i = 0; i < w.size(); ++i) w[i] = lambda * pi.w[i] + (1.0 - lambda) * pi_0.w[i];
    return SimplexVector{std::move(w), SimplexRole::sampling};
}

PreferenceMatrix bt_matrix(const std::vector<double>& r) {
    for (double v : r) {
        if (!std::isfinite(v)) {
            throw ValidationError("NonFiniteInput", "bt_matrix score is not finite");
        }
    }
    int k = static_cast<int>(r.size());
    PreferenceMatrix P{k, std::vector<double>(static_cast<size_t>(k) * k)};
    for (int i = 0; i < k; ++i) {
        P.at(i, i) = 0.5;
        for (int j = i + 1; j < k; ++j) {
            double pij = sigmoid(r[i] - r[j]);
            P.at(i, j) = pij;
            P.at(j, i) = 1.0 - pij;
        }
    }
    return P;
}

std::vector<double> mat_vec(const PreferenceMatrix& P, const SimplexVector& mu) {
    if (mu.k() != P.k) {
        throw ValidationError("InvalidInput", "matrix/vector size mismatch");
    }
    std::vector<double> out(P.k, 0.0);
    for (int i = 0; i < P.k; ++i) {
        double acc = 0.0;
        for (int j = 0; j < P.k; ++j) acc += P(i, j) * mu.w[j];
        out[i] = acc;
    }
    return out;
}

SimplexVector uniform_simplex(int k, SimplexRole role) {
    return SimplexVector{std::vector<double>(k, 1.0 / k), role};
}

} // namespace prefdyn
