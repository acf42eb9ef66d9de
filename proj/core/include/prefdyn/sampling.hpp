#pragma once

#include <utility>
#include <vector>

#include "prefdyn/types.hpp"

namespace prefdyn {

enum class TargetAxiom { condorcet_top, smith_top };

struct SamplingDesign {
    SimplexVector mu;       // full support
    double epsilon = 0.0;   // uniform-mixing weight actually used
    TargetAxiom target = TargetAxiom::condorcet_top;
    double margin = 0.0;    // min required policy_i - policy_j; +inf sentinel when vacuous
};

// Mixed strategy nu over S with (P_sub nu)_i <= 1/2 + 1e-9 pointwise.
// Multiplicative-weights self-play plus an exact support polish; the
// pointwise bound is re-verified before return.
SimplexVector maximin_strategy(const PreferenceMatrix& P_sub);

SamplingDesign condorcet_top_sampling(const PreferenceMatrix& P);

SamplingDesign smith_top_sampling(const PreferenceMatrix& P);

// K=3 matrix making the induced solve rank response 1 (0-based index 1,
// i.e. the second response) above the Condorcet winner 0 under this mu.
PreferenceMatrix prop2_counterexample(const SimplexVector& mu);

struct RankFailureMatrices {
    PreferenceMatrix rank_shuffle;          // K x K, epsilon family
    PreferenceMatrix never_order_preserving; // fixed 4x4
};

RankFailureMatrices prop4_matrices(int K, double epsilon);

} // namespace prefdyn
