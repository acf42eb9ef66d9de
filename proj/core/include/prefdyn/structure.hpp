#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "prefdyn/types.hpp"

namespace prefdyn {

enum class PrefClass {
    cyclic,
    transitive,
    strongly_transitive,
    st_plus,
    strictly_strongly_transitive,
};

const char* pref_class_name(PrefClass c);

struct StructureReport {
    std::optional<int> condorcet;        // 0-based winner index
    std::vector<int> smith;              // sorted 0-based indices
    PrefClass cls = PrefClass::transitive;
    std::optional<std::vector<int>> order; // permutation, best first; absent when cyclic
    bool has_ties = false;                 // order contains adjacent aggregate-score ties
    std::vector<std::pair<int, int>> edges; // strict-beat graph: (i,j) when P_ij > 1/2
    std::vector<int> cycle;                 // a witness directed cycle when cyclic
};

struct HtsSpec {
    std::vector<double> r; // BT scores
    int head = 0;          // |H|, first `head` coordinates
    double delta = 0.0;    // tail separation, must exceed 3 ln 2
};

enum class HtsViolation { head_tail_levels, head_separation };

struct HtsResult {
    bool holds = false;
    std::optional<HtsViolation> violated;
};

std::optional<int> condorcet_winner(const PreferenceMatrix& P);

// Inclusion-minimal dominant set, via Copeland-score descending prefix scan
// (ties share a block); the result is re-verified dominant before return.
std::vector<int> smith_set(const PreferenceMatrix& P);

// Cyclic / transitive / ST / ST+ / SST classification under the
// aggregate-score order. Throws Unclassifiable when neither case applies.
StructureReport classify(const PreferenceMatrix& P);

// Every prefix average of a is at least the global average.
bool is_majorized(const std::vector<double>& a);

// P_i - P_j majorized and P_i != P_j.
bool maj_dominates(const PreferenceMatrix& P, int i, int j);

HtsResult hts_check(const HtsSpec& spec);

} // namespace prefdyn
