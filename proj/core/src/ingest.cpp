#include "prefdyn/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/errors.hpp"
#include "prefdyn/rng.hpp"

namespace prefdyn {

namespace {

// bounded draw off the raw 64-bit stream; modulo bias is irrelevant at these
// bound sizes and keeps the stream consumption rate fixed (one word per draw)
uint64_t draw_index(std::mt19937_64& rng, uint64_t bound) { return rng() % bound; }

// uniform double in [0,1) from the top 53 bits of one stream word; explicit
// so the stream consumption rate is documented rather than library-dependent
double draw_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

std::vector<ScoredInstance> load_instances(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("ParseError", "cannot open " + path);

    std::vector<ScoredInstance> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("ParseError",
                                  "line " + std::to_string(lineno) + ": " + e.what());
        }
        auto schema_error = [&](const std::string& what) {
            return ValidationError("SchemaError", "line " + std::to_string(lineno) + ": " + what);
        };
        if (!j.is_object() || !j.contains("prompt_id") || !j["prompt_id"].is_string())
            throw schema_error("missing prompt_id");
        if (!j.contains("responses") || !j["responses"].is_array())
            throw schema_error("missing responses");

        ScoredInstance inst;
        inst.prompt_id = j["prompt_id"].get<std::string>();
        for (const auto& rj : j["responses"]) {
            if (!rj.is_object() || !rj.contains("id") || !rj["id"].is_string())
                throw schema_error("response missing id");
            if (!rj.contains("scores") || !rj["scores"].is_object())
                throw schema_error("response missing scores");
            ScoredResponse r;
            r.id = rj["id"].get<std::string>();
            for (auto it = rj["scores"].begin(); it != rj["scores"].end(); ++it) {
                if (!it.value().is_number()) throw schema_error("non-numeric score");
                r.scores[it.key()] = it.value().get<double>();
            }
            inst.responses.push_back(std::move(r));
        }
        if (inst.responses.size() < 2) throw schema_error("fewer than 2 responses");
        for (size_t r = 1; r < inst.responses.size(); ++r) {
            if (inst.responses[r].scores.size() != inst.responses[0].scores.size())
                throw schema_error("mixed attribute key sets");
            auto a = inst.responses[0].scores.begin();
            auto b = inst.responses[r].scores.begin();
            for (; a != inst.responses[0].scores.end(); ++a, ++b) {
                if (a->first != b->first) throw schema_error("mixed attribute key sets");
            }
        }
        out.push_back(std::move(inst));
    }
    return out;
}

BuiltMatrix build_preference(const ScoredInstance& instance, int k, uint64_t seed) {
    int n = static_cast<int>(instance.responses.size());
    if (n < k) throw ValidationError("TooFewResponses", instance.prompt_id);
    if (k < 2) throw ValidationError("InvalidInput", "need k >= 2");

    std::mt19937_64 rng = make_engine(seed);

    // partial Fisher-Yates, then sort the chosen indices for a stable layout
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(draw_index(rng, static_cast<uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    std::vector<int> chosen(pool.begin(), pool.begin() + k);
    std::sort(chosen.begin(), chosen.end());

    std::vector<std::string> attrs;
    for (const auto& kv : instance.responses[0].scores) attrs.push_back(kv.first);
    if (attrs.empty()) throw ValidationError("SchemaError", "responses carry no attributes");

    BuiltMatrix bm;
    bm.P = PreferenceMatrix{k, std::vector<double>(static_cast<size_t>(k) * k, 0.5)};
    for (int i : chosen) bm.response_ids.push_back(instance.responses[i].id);

    // one attribute per unordered pair, consumed in (i,j) lexicographic order
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            const std::string& attr = attrs[draw_index(rng, attrs.size())];
            bm.attributes.push_back(attr);
            double si = instance.responses[chosen[i]].scores.at(attr);
            double sj = instance.responses[chosen[j]].scores.at(attr);
            if (std::abs(si - sj) > 10.0) bm.large_score_gap = true;
            double pij = sigmoid(si - sj);
            bm.P.at(i, j) = pij;
            bm.P.at(j, i) = 1.0 - pij;
        }
    }
    check_preference(bm.P);
    return bm;
}

PreferenceMatrix noisy_realization(const PreferenceMatrix& P, const NoiseConfig& cfg) {
    if (cfg.n < 1) throw ValidationError("InvalidInput", "noise needs n >= 1");
    std::mt19937_64 rng = make_engine(cfg.seed);

    PreferenceMatrix out = P;
    for (int i = 0; i < P.k; ++i) {
        for (int j = i + 1; j < P.k; ++j) {
            int wins = 0;
            for (int t = 0; t < cfg.n; ++t) {
                if (draw_unit(rng) < P(i, j)) ++wins;
            }
            double phat = static_cast<double>(wins) / cfg.n;
            out.at(i, j) = phat;
            out.at(j, i) = 1.0 - phat;
        }
    }
    return out;
}

CorpusPartition classify_corpus(const std::vector<PreferenceMatrix>& matrices) {
    CorpusPartition part;
    for (size_t idx = 0; idx < matrices.size(); ++idx) {
        try {
            StructureReport rep = classify(matrices[idx]);
            switch (rep.cls) {
                case PrefClass::cyclic:
                    part.cyclic.push_back(idx);
                    break;
                case PrefClass::strongly_transitive:
                case PrefClass::st_plus:
                case PrefClass::strictly_strongly_transitive:
                    part.st.push_back(idx);
                    break;
                case PrefClass::transitive:
                    part.excluded.emplace_back(idx, "transitive-but-not-st");
                    break;
            }
        } catch (const ValidationError&) {
            part.excluded.emplace_back(idx, "unclassifiable");
        }
    }
    return part;
}

} // namespace prefdyn
