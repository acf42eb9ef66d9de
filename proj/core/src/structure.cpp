#include "prefdyn/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/errors.hpp"

namespace prefdyn {

namespace {

constexpr double kStTol = 1e-12; // slack for ST-family inequality checks

// DFS cycle search on the strict-beat graph. Returns a witness cycle
// (vertex sequence, first == entry point) or empty. Antisymmetry of strict
// edges means any cycle found has length >= 3.
std::vector<int> find_cycle(const PreferenceMatrix& P) {
    int K = P.k;
    std::vector<int> color(K, 0); // 0 white, 1 on stack, 2 done
    std::vector<int> parent(K, -1);
    std::vector<int> cycle;

    std::vector<int> stack;
    for (int s = 0; s < K && cycle.empty(); ++s) {
        if (color[s] != 0) continue;
        // iterative DFS with explicit edge cursors
        std::vector<int> cursor(K, 0);
        stack.push_back(s);
        color[s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            int& j = cursor[u];
            bool advanced = false;
            for (; j < K; ++j) {
                if (j == u || !(P(u, j) > 0.5)) continue;
                if (color[j] == 1) {
                    // back edge u -> j closes a cycle j .. u
                    cycle.push_back(j);
                    for (size_t t = 0; t < stack.size(); ++t) {
                        if (stack[t] == j) {
                            cycle.assign(stack.begin() + static_cast<long>(t), stack.end());
                            break;
                        }
                    }
                    return cycle;
                }
                if (color[j] == 0) {
                    color[j] = 1;
                    stack.push_back(j);
                    ++j;
                    advanced = true;
                    break;
                }
            }
            if (!advanced && static_cast<size_t>(cursor[u]) >= static_cast<size_t>(K)) {
                color[u] = 2;
                stack.pop_back();
            }
        }
    }
    return {};
}

bool dominant(const PreferenceMatrix& P, const std::vector<bool>& in_set) {
    for (int i = 0; i < P.k; ++i) {
        if (!in_set[i]) continue;
        for (int j = 0; j < P.k; ++j) {
            if (in_set[j]) continue;
            if (!(P(i, j) > 0.5)) return false;
        }
    }
    return true;
}

} // namespace

const char* pref_class_name(PrefClass c) {
    switch (c) {
        case PrefClass::cyclic: return "cyclic";
        case PrefClass::transitive: return "transitive";
        case PrefClass::strongly_transitive: return "strongly-transitive";
        case PrefClass::st_plus: return "st-plus";
        case PrefClass::strictly_strongly_transitive: return "strictly-strongly-transitive";
    }
    return "?";
}

std::optional<int> condorcet_winner(const PreferenceMatrix& P) {
    for (int c = 0; c < P.k; ++c) {
        bool wins = true;
        for (int j = 0; j < P.k && wins; ++j) {
            if (j != c && !(P(c, j) > 0.5)) wins = false;
        }
        if (wins) return c;
    }
    return std::nullopt;
}

std::vector<int> smith_set(const PreferenceMatrix& P) {
    int K = P.k;
    std::vector<int> copeland(K, 0);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j)
            if (j != i && P(i, j) > 0.5) ++copeland[i];

    std::vector<int> idx(K);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return copeland[a] > copeland[b]; });

    std::vector<bool> in_set(K, false);
    int pos = 0;
    while (pos < K) {
        // absorb a whole tie block: equal Copeland scores never straddle the
        // dominance boundary
        int score = copeland[idx[pos]];
        while (pos < K && copeland[idx[pos]] == score) {
            in_set[idx[pos]] = true;
            ++pos;
        }
        if (pos >= K || dominant(P, in_set)) break;
    }

    if (!dominant(P, in_set)) {
        throw NumericError("InternalVerificationFailure", "smith prefix scan produced a non-dominant set");
    }
    std::vector<int> out;
    for (int i = 0; i < K; ++i)
        if (in_set[i]) out.push_back(i);
    return out;
}

StructureReport classify(const PreferenceMatrix& P) {
    int K = P.k;
    StructureReport rep;
    rep.condorcet = condorcet_winner(P);
    rep.smith = smith_set(P);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j)
            if (i != j && P(i, j) > 0.5) rep.edges.emplace_back(i, j);

    rep.cycle = find_cycle(P);
    if (!rep.cycle.empty()) {
        rep.cls = PrefClass::cyclic;
        return rep;
    }

    // aggregate-score order, ties to the lower index
    std::vector<double> score(K, 0.0);
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) score[i] += P(i, j);
    std::vector<int> ord(K);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return score[a] > score[b]; });

    for (int a = 0; a < K; ++a) {
        for (int b = a + 1; b < K; ++b) {
            if (P(ord[a], ord[b]) < 0.5 - kStTol) {
                throw ValidationError("Unclassifiable",
                                      "acyclic but aggregate-score order is not transitive");
            }
        }
    }
    for (int a = 0; a + 1 < K; ++a) {
        if (std::abs(score[ord[a]] - score[ord[a + 1]]) <= kStTol) rep.has_ties = true;
    }
    rep.order = ord;

    bool st = true;
    for (int a = 0; a < K && st; ++a)
        for (int b = a + 1; b < K && st; ++b)
            for (int c = b + 1; c < K && st; ++c)
                if (P(ord[a], ord[c]) < std::max(P(ord[a], ord[b]), P(ord[b], ord[c])) - kStTol)
                    st = false;
    if (!st) {
        rep.cls = PrefClass::transitive;
        return rep;
    }

    // columnwise strict dominance of adjacent rows (in the order)
    auto adjacent_strict = [&](int a) {
        for (int c = 0; c < K; ++c)
            if (P(ord[a], c) > P(ord[a + 1], c) + kStTol) return true;
        return false;
    };
    bool sst = true;
    for (int a = 0; a + 1 < K; ++a)
        if (!adjacent_strict(a)) sst = false;

    if (sst) {
        rep.cls = PrefClass::strictly_strongly_transitive;
    } else if (adjacent_strict(0)) {
        rep.cls = PrefClass::st_plus;
    } else {
        rep.cls = PrefClass::strongly_transitive;
    }
    return rep;
}

bool is_majorized(const std::vector<double>& a) {
    int K = static_cast<int>(a.size());
    double total = std::accumulate(a.begin(), a.end(), 0.0);
    double global = total / K;
    double prefix = 0.0;
    for (int m = 1; m < K; ++m) {
        prefix += a[m - 1];
        if (prefix / m < global - 1e-12) return false;
    }
    return true;
}

bool maj_dominates(const PreferenceMatrix& P, int i, int j) {
    if (i == j || i < 0 || j < 0 || i >= P.k || j >= P.k) {
        throw ValidationError("InvalidInput", "maj_dominates needs distinct valid indices");
    }
    std::vector<double> diff(P.k);
    bool different = false;
    for (int c = 0; c < P.k; ++c) {
        diff[c] = P(i, c) - P(j, c);
        if (std::abs(diff[c]) > 0.0) different = true;
    }
    return different && is_majorized(diff);
}

HtsResult hts_check(const HtsSpec& spec) {
    int K = static_cast<int>(spec.r.size());
    if (spec.head <= 0 || spec.head >= K) {
        throw ValidationError("InvalidInput", "head size must satisfy 0 < H < K");
    }
    if (!(spec.delta > 3.0 * std::log(2.0))) {
        throw ValidationError("InvalidInput", "delta must exceed 3 ln 2");
    }
    HtsResult res;
    for (int k = 0; k < K; ++k) {
        bool ok = k < spec.head ? spec.r[k] >= 0.0 : spec.r[k] <= -spec.delta;
        if (!ok) {
            res.holds = false;
            res.violated = HtsViolation::head_tail_levels;
            return res;
        }
    }
    double threshold = 8.0 * (static_cast<double>(spec.head) / K + std::exp(-spec.delta));
    for (int i = 0; i < spec.head; ++i) {
        for (int j = i + 1; j < spec.head; ++j) {
            if (spec.r[i] - spec.r[j] < threshold) {
                res.holds = false;
                res.violated = HtsViolation::head_separation;
                return res;
            }
        }
    }
    res.holds = true;
    return res;
}

} // namespace prefdyn
