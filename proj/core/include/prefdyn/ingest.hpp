#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "prefdyn/structure.hpp"
#include "prefdyn/types.hpp"

namespace prefdyn {

struct ScoredResponse {
    std::string id;
    std::map<std::string, double> scores; // attribute name -> score
};

struct ScoredInstance {
    std::string prompt_id;
    std::vector<ScoredResponse> responses; // >= 2, shared attribute key set
};

struct NoiseConfig {
    int n = 5; // Bernoulli comparisons per pair
    uint64_t seed = 0;
};

struct LoadReport {
    std::vector<ScoredInstance> instances;
    int dropped_too_few = 0; // instances below the requested K (filtering happens later)
};

// JSONL corpus, one {"prompt_id":..., "responses":[{"id":..., "scores":{...}}]} per line.
std::vector<ScoredInstance> load_instances(const std::string& path);

struct BuiltMatrix {
    PreferenceMatrix P;
    std::vector<std::string> response_ids; // chosen subset, in matrix order
    std::vector<std::string> attributes;   // attribute drawn per pair, (i,j) lex order
    bool large_score_gap = false;          // some |s_i - s_j| > 10
};

// Subsample k responses uniformly without replacement, then draw one
// attribute per unordered pair ((i,j) lexicographic stream order) and set
// P_ij = sigmoid(s_i - s_j). Deterministic given seed.
BuiltMatrix build_preference(const ScoredInstance& instance, int k, uint64_t seed);

// P_hat_ij = (successes in n Bernoulli(P_ij) draws)/n per unordered pair,
// sampled once, (i,j) lexicographic order. Deterministic given cfg.seed.
PreferenceMatrix noisy_realization(const PreferenceMatrix& P, const NoiseConfig& cfg);

struct CorpusPartition {
    std::vector<size_t> st;     // indices of ST-or-stronger matrices
    std::vector<size_t> cyclic;
    std::vector<std::pair<size_t, std::string>> excluded; // index + reason
};

CorpusPartition classify_corpus(const std::vector<PreferenceMatrix>& matrices);

} // namespace prefdyn
