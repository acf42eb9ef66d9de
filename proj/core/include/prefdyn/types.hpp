#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace prefdyn {

constexpr int kMaxK = 64; // dense storage; experiments live at K=4

// K x K pairwise win-probability matrix. Row-major; P(i,j) is the probability
// that response i beats response j. Construct through validate_preference or
// bt_matrix so the invariants (half diagonal, P_ij + P_ji = 1) actually hold.
struct PreferenceMatrix {
    int k = 0;
    std::vector<double> p; // k*k row-major

    double operator()(int i, int j) const { return p[static_cast<size_t>(i) * k + j]; }
    double& at(int i, int j) { return p[static_cast<size_t>(i) * k + j]; }

    // row i as a vector (handy for majorization checks)
    std::vector<double> row(int i) const {
        return std::vector<double>(p.begin() + static_cast<long>(i) * k,
                                   p.begin() + static_cast<long>(i + 1) * k);
    }
};

enum class SimplexRole { policy, sampling, reference, anchor };

// Probability vector over K responses. w sums to 1 (1e-10); the full-support
// variant additionally has min w_i > 0.
struct SimplexVector {
    std::vector<double> w;
    SimplexRole role = SimplexRole::policy;

    int k() const { return static_cast<int>(w.size()); }
    double operator[](int i) const { return w[static_cast<size_t>(i)]; }
};

// Sum-zero logit vector (the gauge is fixed to sum-zero everywhere).
struct LogitVector {
    std::vector<double> theta;

    int k() const { return static_cast<int>(theta.size()); }
    double operator[](int i) const { return theta[static_cast<size_t>(i)]; }
};

enum class SolverKind { ipo, dpo };

struct DynamicsConfig {
    double alpha = 0.0;  // reference mixing weight, in [0,1]
    double beta = 1.0;   // inverse regularization strength, > 0
    double lambda = 1.0; // on-policy sampling weight, in [0,1]
    SimplexVector pi_ref;
    SimplexVector pi_0;
    SimplexVector pi_1;
    int horizon = 3000;
    double tolerance = 1e-12;
    SolverKind solver = SolverKind::ipo;
};

struct Trajectory {
    std::vector<SimplexVector> policies; // pi_1 .. pi_T (or truncated)
    std::optional<int> converged_at;     // first step of the 10-step sub-tolerance streak
    bool collapsed_to_boundary = false;  // a coordinate fell below 1e-300
    DynamicsConfig config;
};

} // namespace prefdyn
