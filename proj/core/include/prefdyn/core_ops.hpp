#pragma once

#include <vector>

#include "prefdyn/types.hpp"

namespace prefdyn {

constexpr double kMatrixTol = 1e-12;
constexpr double kSimplexTol = 1e-10;

// Validates a raw square matrix. No symmetrization: violations throw.
PreferenceMatrix validate_preference(const std::vector<std::vector<double>>& raw);
PreferenceMatrix validate_preference(int k, const std::vector<double>& row_major);

// Re-checks an existing PreferenceMatrix (used by parsers).
void check_preference(const PreferenceMatrix& P);

SimplexVector validate_simplex(const std::vector<double>& w,
                               SimplexRole role = SimplexRole::policy,
                               bool require_full_support = false);

// Max-subtracted softmax; throws NonFiniteInput on NaN/inf.
SimplexVector softmax(const std::vector<double>& z);

// Subtract the mean: projects onto the sum-zero gauge.
LogitVector gauge_project(const std::vector<double>& v);

// log(pi_i) for a full-support simplex vector.
std::vector<double> log_weights(const SimplexVector& pi);

// pi^alpha * pi_ref^(1-alpha), renormalized. Computed in log space.
SimplexVector geometric_mix(const SimplexVector& pi, const SimplexVector& pi_ref, double alpha);

// lambda*pi + (1-lambda)*pi_0.
SimplexVector affine_mix(const SimplexVector& pi, const SimplexVector& pi_0, double lambda);

// Bradley-Terry matrix: P_ij = sigmoid(r_i - r_j).
PreferenceMatrix bt_matrix(const std::vector<double>& r);

double sigmoid(double x);

// P * mu.
std::vector<double> mat_vec(const PreferenceMatrix& P, const SimplexVector& mu);

SimplexVector uniform_simplex(int k, SimplexRole role = SimplexRole::policy);

} // namespace prefdyn
