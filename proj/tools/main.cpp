// prefdyn: preference-optimization lab CLI.
//
// Subcommands: ingest, classify, solve, simulate, sweep, stability, axioms.
// --config <file> supplies a JSON document whose keys mirror the long flag
// names; explicit flags override config values.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "prefdyn/analysis.hpp"
#include "prefdyn/core_ops.hpp"
#include "prefdyn/dpo.hpp"
#include "prefdyn/dynamics.hpp"
#include "prefdyn/errors.hpp"
#include "prefdyn/ingest.hpp"
#include "prefdyn/io.hpp"
#include "prefdyn/ipo.hpp"
#include "prefdyn/rng.hpp"
#include "prefdyn/sampling.hpp"
#include "prefdyn/structure.hpp"

using nlohmann::json;
using namespace prefdyn;

namespace {

// Fill CLI option values from the config document for flags the user did not
// pass explicitly. Must run after parsing.
template <typename T>
void from_config(T& var, const CLI::Option* opt, const json& cfg, const std::string& key) {
    if (opt != nullptr && opt->count() > 0) return; // explicit flag wins
    if (cfg.contains(key)) var = cfg.at(key).get<T>();
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ValidationError("ParseError", "cannot open config " + path);
    json j;
    in >> j;
    return j;
}

SimplexVector parse_simplex_arg(const std::string& arg, int k, SimplexRole role) {
    if (arg.empty() || arg == "uniform") return uniform_simplex(k, role);
    json j = json::parse(arg);
    std::vector<double> w = j.get<std::vector<double>>();
    return validate_simplex(w, role, true);
}

std::string report_to_text(const StructureReport& rep) {
    std::ostringstream os;
    os << "class: " << pref_class_name(rep.cls) << "\n";
    os << "condorcet_winner: " << (rep.condorcet ? std::to_string(*rep.condorcet) : "none") << "\n";
    os << "smith_set:";
    for (int i : rep.smith) os << " " << i;
    os << "\n";
    if (rep.order) {
        os << "order:";
        for (int i : *rep.order) os << " " << i;
        os << (rep.has_ties ? " (with ties)" : "") << "\n";
    }
    if (!rep.cycle.empty()) {
        os << "cycle:";
        for (int i : rep.cycle) os << " " << i;
        os << "\n";
    }
    return os.str();
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    int K = traj.policies.front().k();
    std::vector<std::string> header{"t"};
    for (int i = 1; i <= K; ++i) header.push_back("pi_" + std::to_string(i));
    header.push_back("entropy");
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.policies.size());
    for (size_t t = 0; t < traj.policies.size(); ++t) {
        std::vector<double> row{static_cast<double>(t + 1)};
        row.insert(row.end(), traj.policies[t].w.begin(), traj.policies[t].w.end());
        row.push_back(entropy(traj.policies[t]));
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

// ---------------------------------------------------------------- ingest ---

int cmd_ingest(const std::string& input, int k, uint64_t seed, const std::string& out) {
    std::vector<ScoredInstance> instances = load_instances(input);
    std::vector<CollectionEntry> entries;
    int skipped = 0;
    std::vector<PreferenceMatrix> matrices;
    for (size_t idx = 0; idx < instances.size(); ++idx) {
        if (static_cast<int>(instances[idx].responses.size()) < k) {
            ++skipped;
            continue;
        }
        BuiltMatrix bm = build_preference(instances[idx], k, mix_seed(seed, idx));
        if (bm.large_score_gap) {
            std::cerr << "warning: |score gap| > 10 in prompt " << instances[idx].prompt_id
                      << " (near-degenerate preference)\n";
        }
        CollectionEntry e;
        e.prompt_id = instances[idx].prompt_id;
        e.response_ids = bm.response_ids;
        e.P = bm.P;
        matrices.push_back(bm.P);
        entries.push_back(std::move(e));
    }
    CorpusPartition part = classify_corpus(matrices);
    for (size_t i : part.st) {
        StructureReport r = classify(matrices[i]);
        entries[i].cls = pref_class_name(r.cls);
        entries[i].order = r.order;
    }
    for (size_t i : part.cyclic) entries[i].cls = "cyclic";
    for (const auto& [i, reason] : part.excluded) entries[i].cls = "excluded:" + reason;

    write_collection(out, entries);
    std::cout << "instances: " << instances.size() << "\n"
              << "skipped (fewer than " << k << " responses): " << skipped << "\n"
              << "st: " << part.st.size() << "\n"
              << "cyclic: " << part.cyclic.size() << "\n"
              << "excluded: " << part.excluded.size() << "\n";
    return 0;
}

// -------------------------------------------------------------- simulate ---

int cmd_simulate(const std::string& matrix_path, double alpha, double beta, double lambda,
                 int iters, const std::string& solver, int noise_n, uint64_t seed,
                 double tol, const std::string& out, const std::string& svg) {
    PreferenceMatrix P = read_matrix_file(matrix_path);
    if (noise_n > 0) {
        P = noisy_realization(P, NoiseConfig{noise_n, seed});
    }
    StepContext ctx;
    ctx.preference = P;
    ctx.config.alpha = alpha;
    ctx.config.beta = beta;
    ctx.config.lambda = lambda;
    ctx.config.horizon = iters;
    ctx.config.tolerance = tol;
    ctx.config.solver = solver == "dpo" ? SolverKind::dpo : SolverKind::ipo;
    ctx.config.pi_ref = uniform_simplex(P.k, SimplexRole::reference);
    ctx.config.pi_0 = uniform_simplex(P.k, SimplexRole::anchor);
    ctx.config.pi_1 = uniform_simplex(P.k, SimplexRole::policy);

    Trajectory traj = run_dynamics(ctx);
    write_trajectory_csv(out, traj);
    if (!svg.empty()) {
        int K = P.k;
        std::vector<std::vector<double>> series(K);
        std::vector<std::string> labels;
        for (int i = 0; i < K; ++i) {
            labels.push_back("pi_" + std::to_string(i + 1));
            for (const auto& pi : traj.policies) series[i].push_back(pi.w[i]);
        }
        write_svg_lines(svg, series, labels, "policy trajectory");
    }
    if (traj.converged_at) {
        std::cout << "converged_at: " << *traj.converged_at << "\n";
    } else {
        std::cout << "converged_at: none\n";
    }
    if (traj.collapsed_to_boundary) std::cout << "collapsed_to_boundary: true\n";
    std::cout << "steps: " << traj.policies.size() << "\n";
    return 0;
}

// ----------------------------------------------------------------- sweep ---

struct SweepTask {
    size_t cell;
    size_t inst;
    int realization;
};

int cmd_sweep(const std::string& collection_path, std::vector<double> alphas,
              std::vector<double> beta_lambdas, double lambda, int iters,
              const std::string& metric, int noise_n, int realizations, uint64_t seed,
              int threads, const std::string& out, const std::string& svg) {
    std::vector<CollectionEntry> coll = read_collection(collection_path);
    bool want_cyclic = metric == "cycle-strength";
    std::vector<PreferenceMatrix> mats;
    for (const auto& e : coll) {
        if (want_cyclic ? e.cls == "cyclic" : (e.cls.rfind("excluded", 0) != 0 && e.cls != "cyclic" && e.cls != "?")) {
            mats.push_back(e.P);
        }
    }
    if (mats.empty()) throw ValidationError("InvalidInput", "no matrices of the metric-appropriate class");
    if (alphas.empty() || beta_lambdas.empty()) {
        throw ValidationError("InvalidInput", "empty sweep grid");
    }
    int reals = noise_n > 0 ? realizations : 1;

    struct Cell {
        double alpha, bl;
    };
    std::vector<Cell> cells;
    for (double a : alphas)
        for (double bl : beta_lambdas) cells.push_back({a, bl});

    // value[cell][inst] = metric averaged over realizations; nonconv counts runs
    std::vector<std::vector<double>> value(cells.size(), std::vector<double>(mats.size(), 0.0));
    std::vector<std::atomic<long>> nonconv(cells.size());
    for (auto& a : nonconv) a = 0;

    std::vector<SweepTask> tasks;
    for (size_t c = 0; c < cells.size(); ++c)
        for (size_t m = 0; m < mats.size(); ++m)
            for (int r = 0; r < reals; ++r) tasks.push_back({c, m, r});

    std::atomic<size_t> next{0};
    std::mutex value_mtx;
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const SweepTask& tk = tasks[i];
            const Cell& cell = cells[tk.cell];

            PreferenceMatrix P = mats[tk.inst];
            uint64_t run_seed =
                mix_seed(seed, (tk.cell * 1000003ull + tk.inst) * 1009ull + static_cast<uint64_t>(tk.realization));
            if (noise_n > 0) P = noisy_realization(P, NoiseConfig{noise_n, run_seed});

            StepContext ctx;
            ctx.preference = P;
            ctx.config.alpha = cell.alpha;
            ctx.config.lambda = lambda;
            ctx.config.beta = cell.bl / lambda;
            ctx.config.horizon = iters;
            ctx.config.tolerance = 1e-12;
            ctx.config.pi_ref = uniform_simplex(P.k, SimplexRole::reference);
            ctx.config.pi_0 = uniform_simplex(P.k, SimplexRole::anchor);
            ctx.config.pi_1 = uniform_simplex(P.k, SimplexRole::policy);

            double v = 0.0;
            bool converged = true;
            try {
                Trajectory traj = run_dynamics(ctx);
                converged = traj.converged_at.has_value();
                v = want_cyclic ? cycle_strength(traj) : entropy(traj.policies.back());
            } catch (const Error&) {
                converged = false; // counted, not fatal
            }
            {
                std::lock_guard<std::mutex> lk(value_mtx);
                value[tk.cell][tk.inst] += v / reals;
            }
            if (!converged) nonconv[tk.cell].fetch_add(1);
        }
    };
    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nthreads < 1) nthreads = 1;
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::vector<std::vector<double>> rows;
    for (size_t c = 0; c < cells.size(); ++c) {
        double mean = std::accumulate(value[c].begin(), value[c].end(), 0.0) / mats.size();
        double var = 0.0;
        for (double v : value[c]) var += (v - mean) * (v - mean);
        double sd = std::sqrt(var / mats.size());
        rows.push_back({cells[c].alpha, cells[c].bl, mean, sd, static_cast<double>(mats.size()),
                        static_cast<double>(nonconv[c].load())});
    }
    write_csv(out, {"alpha", "beta_lambda", "metric_mean", "metric_std", "n", "nonconverged"}, rows);

    if (!svg.empty()) {
        // one polyline per alpha, x = beta-lambda grid index
        std::vector<std::vector<double>> series(alphas.size());
        std::vector<std::string> labels;
        for (size_t a = 0; a < alphas.size(); ++a) {
            labels.push_back("alpha=" + format_double(alphas[a]));
            for (size_t b = 0; b < beta_lambdas.size(); ++b)
                series[a].push_back(rows[a * beta_lambdas.size() + b][2]);
        }
        write_svg_lines(svg, series, labels, metric + " vs beta-lambda");
    }
    std::cout << "cells: " << cells.size() << ", instances per cell: " << mats.size() << "\n";
    return 0;
}

// ------------------------------------------------------------- stability ---

int cmd_stability(const std::string& matrix_path, double alpha, double beta, double lambda,
                  const std::string& family) {
    PreferenceMatrix P = read_matrix_file(matrix_path);
    StabilityReport rep = ipo_stability(P, alpha, beta, lambda);
    std::cout << "tilde_norm: " << format_double(rep.tilde_norm) << "\n";
    std::cout << "ipo_margin: " << format_double(rep.ipo_margin) << "\n";
    std::cout << "sparse_margin: " << format_double(rep.sparse_margin) << " (d=" << rep.sparse_d
              << ")\n";
    std::cout << "ipo_stable: " << (rep.ipo_stable ? "yes" : "no") << "\n";

    SimplexVector uni = uniform_simplex(P.k, SimplexRole::anchor);
    if (family == "dpo") {
        if (lambda < 1.0) {
            double B = estimate_logit_bound(P, lambda, uni);
            DpoStabilityInputs in = make_dpo_stability_inputs(B, lambda, uni);
            StabilityReport dr = dpo_stability(P, alpha, beta, lambda, uni, in);
            std::cout << "dpo_B_estimate: " << format_double(B) << "\n";
            std::cout << "dpo_margin: " << format_double(dr.dpo_margin) << "\n";
            std::cout << "dpo_stable: " << (dr.dpo_stable ? "yes" : "no") << "\n";
        } else {
            std::cout << "dpo_margin: not certified (lambda = 1)\n";
        }
    }

    // Jacobian radius at uniform when the step map actually fixes it
    StepContext ctx;
    ctx.preference = P;
    ctx.config.alpha = alpha;
    ctx.config.beta = beta;
    ctx.config.lambda = lambda;
    ctx.config.solver = family == "dpo" ? SolverKind::dpo : SolverKind::ipo;
    ctx.config.pi_ref = uniform_simplex(P.k, SimplexRole::reference);
    ctx.config.pi_0 = uni;
    try {
        auto step = [&](const SimplexVector& pi) {
            return ctx.config.solver == SolverKind::ipo ? mrs_ipo_step(pi, ctx)
                                                        : mrs_dpo_step(pi, ctx);
        };
        double radius = jacobian_spectral_radius(step, uniform_simplex(P.k));
        std::cout << "jacobian_radius_at_uniform: " << format_double(radius) << "\n";
    } catch (const Error&) {
        std::cout << "jacobian_radius_at_uniform: n/a (uniform is not a fixed point)\n";
    }
    return 0;
}

// ----------------------------------------------------------------- solve ---

int cmd_solve(const std::string& matrix_path, const std::string& solver, double beta,
              const std::string& mu_arg, const std::string& ref_arg) {
    PreferenceMatrix P = read_matrix_file(matrix_path);
    SimplexVector mu = parse_simplex_arg(mu_arg, P.k, SimplexRole::sampling);
    SimplexVector ref = parse_simplex_arg(ref_arg, P.k, SimplexRole::reference);
    if (solver == "dpo") {
        DpoSolution sol = dpo_solve(P, mu);
        if (sol.clamped) std::cerr << "warning: matrix entries clamped away from {0,1}\n";
        std::cout << "theta:";
        for (double v : sol.theta.theta) std::cout << " " << format_double(v);
        std::cout << "\nfoc_residual: " << format_double(sol.foc_residual) << "\n"
                  << "iterations: " << sol.iterations << "\n"
                  << "converged: " << (sol.converged ? "yes" : "no") << "\n";
        SimplexVector pol = dpo_policy(sol.theta, ref, beta);
        std::cout << "policy:";
        for (double v : pol.w) std::cout << " " << format_double(v);
        std::cout << "\n";
        if (!sol.converged) return 3;
    } else {
        IpoSolution sol = ipo_solve(P, mu, ref, beta);
        std::cout << "policy:";
        for (double v : sol.policy.w) std::cout << " " << format_double(v);
        std::cout << "\ntheta:";
        for (double v : sol.theta.theta) std::cout << " " << format_double(v);
        std::cout << "\nobjective: " << format_double(sol.objective) << "\n"
                  << "foc_residual: " << format_double(sol.foc_residual) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- axioms ---

// exhaustive full-support grid search (step 0.02) for a sampling that makes
// the IPO ranking match the transitive order
bool order_preserving_grid_search(const PreferenceMatrix& P, const std::vector<int>& order,
                                  std::vector<double>& found) {
    int K = P.k;
    int steps = 50; // 1/0.02
    std::vector<int> parts(K, 0);
    std::vector<double> mu(K);

    // iterate compositions of `steps` into K positive parts
    std::function<bool(int, int)> rec = [&](int pos, int remaining) -> bool {
        if (pos == K - 1) {
            if (remaining < 1) return false;
            parts[pos] = remaining;
            for (int i = 0; i < K; ++i) mu[i] = static_cast<double>(parts[i]) / steps;
            std::vector<double> pm =
                mat_vec(P, SimplexVector{mu, SimplexRole::sampling});
            for (size_t a = 0; a + 1 < order.size(); ++a) {
                if (pm[order[a]] < pm[order[a + 1]] - 1e-12) return false;
            }
            found = mu;
            return true;
        }
        for (int v = 1; v <= remaining - (K - 1 - pos); ++v) {
            parts[pos] = v;
            if (rec(pos + 1, remaining - v)) return true;
        }
        return false;
    };
    return rec(0, steps);
}

// strict-beat total order (Copeland-sorted and verified), if one exists
std::optional<std::vector<int>> dominance_order(const PreferenceMatrix& P) {
    std::vector<int> wins(P.k, 0);
    for (int i = 0; i < P.k; ++i)
        for (int j = 0; j < P.k; ++j)
            if (i != j && P(i, j) > 0.5) ++wins[i];
    std::vector<int> ord(P.k);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return wins[a] > wins[b]; });
    for (int a = 0; a < P.k; ++a)
        for (int b = a + 1; b < P.k; ++b)
            if (P(ord[a], ord[b]) < 0.5) return std::nullopt;
    return ord;
}

int cmd_axioms(const std::string& matrix_path) {
    PreferenceMatrix P = read_matrix_file(matrix_path);
    std::optional<StructureReport> maybe_rep;
    try {
        maybe_rep = classify(P);
        std::cout << report_to_text(*maybe_rep);
    } catch (const ValidationError& e) {
        std::cout << "class: unclassifiable (" << e.what() << ")\n";
    }
    StructureReport rep;
    if (maybe_rep) rep = *maybe_rep;
    else rep.condorcet = condorcet_winner(P);

    if (rep.condorcet) {
        try {
            SamplingDesign d = condorcet_top_sampling(P);
            std::cout << "condorcet_top: mu =";
            for (double v : d.mu.w) std::cout << " " << format_double(v);
            std::cout << " (epsilon " << format_double(d.epsilon) << ", margin "
                      << format_double(d.margin) << ")\n";
        } catch (const NumericError& e) {
            std::cout << "condorcet_top: search failed (" << e.what() << ")\n";
        }
    } else {
        std::cout << "condorcet_top: no winner\n";
    }

    try {
        SamplingDesign d = smith_top_sampling(P);
        if (std::isinf(d.margin)) {
            std::cout << "smith_top: vacuous (smith set is everything), uniform mu\n";
        } else {
            std::cout << "smith_top: mu =";
            for (double v : d.mu.w) std::cout << " " << format_double(v);
            std::cout << " (epsilon " << format_double(d.epsilon) << ", margin "
                      << format_double(d.margin) << ")\n";
        }
    } catch (const NumericError& e) {
        std::cout << "smith_top: search failed (" << e.what() << ")\n";
    }

    std::optional<std::vector<int>> search_order = rep.order;
    if (!search_order) search_order = dominance_order(P);
    if (search_order) {
        std::vector<double> mu;
        if (order_preserving_grid_search(P, *search_order, mu)) {
            std::cout << "order_preserving: mu =";
            for (double v : mu) std::cout << " " << format_double(v);
            std::cout << "\n";
        } else {
            std::cout << "order_preserving: no order-preserving mu found on grid\n";
        }
    }
    return 0;
}

int cmd_classify(const std::string& matrix_path, const std::string& collection_path) {
    if (!matrix_path.empty()) {
        PreferenceMatrix P = read_matrix_file(matrix_path);
        std::cout << report_to_text(classify(P));
        return 0;
    }
    std::vector<CollectionEntry> coll = read_collection(collection_path);
    std::vector<PreferenceMatrix> mats;
    for (const auto& e : coll) mats.push_back(e.P);
    CorpusPartition part = classify_corpus(mats);
    std::cout << "st: " << part.st.size() << "\ncyclic: " << part.cyclic.size()
              << "\nexcluded: " << part.excluded.size() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"preference-optimization lab"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config mirroring flag names");

    // ingest
    auto* s_ing = app.add_subcommand("ingest", "build a matrix collection from a JSONL corpus");
    std::string ing_input, ing_out = "collection.json";
    int ing_k = 4;
    uint64_t ing_seed = 0;
    auto* o_ing_input = s_ing->add_option("--input", ing_input, "JSONL corpus path");
    auto* o_ing_k = s_ing->add_option("--k", ing_k, "responses per matrix");
    auto* o_ing_seed = s_ing->add_option("--seed", ing_seed, "base seed");
    auto* o_ing_out = s_ing->add_option("--out", ing_out, "collection output path");

    // classify
    auto* s_cls = app.add_subcommand("classify", "structure report for a matrix or collection");
    std::string cls_matrix, cls_collection;
    auto* o_cls_matrix = s_cls->add_option("--matrix", cls_matrix, "matrix JSON file");
    auto* o_cls_coll = s_cls->add_option("--collection", cls_collection, "collection file");

    // solve
    auto* s_sol = app.add_subcommand("solve", "single IPO/DPO population solve");
    std::string sol_matrix, sol_solver = "ipo", sol_mu = "uniform", sol_ref = "uniform";
    double sol_beta = 1.0;
    auto* o_sol_matrix = s_sol->add_option("--matrix", sol_matrix, "matrix JSON file");
    auto* o_sol_solver = s_sol->add_option("--solver", sol_solver, "ipo|dpo");
    auto* o_sol_beta = s_sol->add_option("--beta", sol_beta, "beta > 0");
    auto* o_sol_mu = s_sol->add_option("--mu", sol_mu, "sampling (JSON array or 'uniform')");
    auto* o_sol_ref = s_sol->add_option("--ref", sol_ref, "reference (JSON array or 'uniform')");

    // simulate
    auto* s_sim = app.add_subcommand("simulate", "run the MRS dynamics, write trajectory CSV");
    std::string sim_matrix, sim_solver = "ipo", sim_out = "trajectory.csv", sim_svg;
    double sim_alpha = 0.0, sim_beta = 1.0, sim_lambda = 1.0, sim_tol = 1e-12;
    int sim_iters = 3000, sim_noise_n = 0;
    uint64_t sim_seed = 0;
    auto* o_sim_matrix = s_sim->add_option("--matrix", sim_matrix, "matrix JSON file");
    auto* o_sim_alpha = s_sim->add_option("--alpha", sim_alpha, "reference mixing weight");
    auto* o_sim_beta = s_sim->add_option("--beta", sim_beta, "beta > 0");
    auto* o_sim_lambda = s_sim->add_option("--lambda", sim_lambda, "sampling mixing weight");
    auto* o_sim_iters = s_sim->add_option("--iters", sim_iters, "horizon T");
    auto* o_sim_solver = s_sim->add_option("--solver", sim_solver, "ipo|dpo");
    auto* o_sim_noise = s_sim->add_option("--noise-n", sim_noise_n, "comparisons per pair");
    auto* o_sim_seed = s_sim->add_option("--seed", sim_seed, "noise seed");
    auto* o_sim_tol = s_sim->add_option("--tol", sim_tol, "convergence tolerance");
    auto* o_sim_out = s_sim->add_option("--out", sim_out, "trajectory CSV path");
    auto* o_sim_svg = s_sim->add_option("--svg", sim_svg, "optional SVG chart path");

    // sweep
    auto* s_swp = app.add_subcommand("sweep", "grid sweep over (alpha, beta-lambda)");
    std::string swp_collection, swp_metric = "entropy", swp_out = "sweep.csv", swp_svg;
    std::vector<double> swp_alphas, swp_bls;
    double swp_lambda = 0.5;
    int swp_iters = 3000, swp_noise_n = 0, swp_reals = 50, swp_threads = 0;
    uint64_t swp_seed = 0;
    auto* o_swp_coll = s_swp->add_option("--collection", swp_collection, "collection file");
    auto* o_swp_alphas = s_swp->add_option("--alphas", swp_alphas, "alpha grid")->delimiter(',');
    auto* o_swp_bls = s_swp->add_option("--beta-lambdas", swp_bls, "beta*lambda grid")->delimiter(',');
    auto* o_swp_lambda = s_swp->add_option("--lambda", swp_lambda, "fixed lambda (beta = v/lambda)");
    auto* o_swp_iters = s_swp->add_option("--iters", swp_iters, "horizon T");
    auto* o_swp_metric = s_swp->add_option("--metric", swp_metric, "entropy|cycle-strength");
    auto* o_swp_noise = s_swp->add_option("--noise-n", swp_noise_n, "comparisons per pair");
    auto* o_swp_reals = s_swp->add_option("--realizations", swp_reals, "noise realizations per matrix");
    auto* o_swp_seed = s_swp->add_option("--seed", swp_seed, "base seed");
    auto* o_swp_threads = s_swp->add_option("--threads", swp_threads, "worker count (0 = auto)");
    auto* o_swp_out = s_swp->add_option("--out", swp_out, "sweep CSV path");
    auto* o_swp_svg = s_swp->add_option("--svg", swp_svg, "optional SVG chart path");

    // stability
    auto* s_stb = app.add_subcommand("stability", "stability margins and verdicts");
    std::string stb_matrix, stb_family = "ipo";
    double stb_alpha = 0.0, stb_beta = 1.0, stb_lambda = 1.0;
    auto* o_stb_matrix = s_stb->add_option("--matrix", stb_matrix, "matrix JSON file");
    auto* o_stb_alpha = s_stb->add_option("--alpha", stb_alpha, "alpha");
    auto* o_stb_beta = s_stb->add_option("--beta", stb_beta, "beta");
    auto* o_stb_lambda = s_stb->add_option("--lambda", stb_lambda, "lambda");
    auto* o_stb_family = s_stb->add_option("--family", stb_family, "ipo|dpo");

    // axioms
    auto* s_axm = app.add_subcommand("axioms", "structure report + sampling designs");
    std::string axm_matrix;
    auto* o_axm_matrix = s_axm->add_option("--matrix", axm_matrix, "matrix JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1; // any usage problem maps to exit 1
    }

    try {
        json cfg = load_config(config_path);

        if (s_ing->parsed()) {
            from_config(ing_input, o_ing_input, cfg, "input");
            from_config(ing_k, o_ing_k, cfg, "k");
            from_config(ing_seed, o_ing_seed, cfg, "seed");
            from_config(ing_out, o_ing_out, cfg, "out");
            if (ing_input.empty()) throw CLI::RequiredError("--input");
            return cmd_ingest(ing_input, ing_k, ing_seed, ing_out);
        }
        if (s_cls->parsed()) {
            from_config(cls_matrix, o_cls_matrix, cfg, "matrix");
            from_config(cls_collection, o_cls_coll, cfg, "collection");
            if (cls_matrix.empty() && cls_collection.empty()) throw CLI::RequiredError("--matrix");
            return cmd_classify(cls_matrix, cls_collection);
        }
        if (s_sol->parsed()) {
            from_config(sol_matrix, o_sol_matrix, cfg, "matrix");
            from_config(sol_solver, o_sol_solver, cfg, "solver");
            from_config(sol_beta, o_sol_beta, cfg, "beta");
            from_config(sol_mu, o_sol_mu, cfg, "mu");
            from_config(sol_ref, o_sol_ref, cfg, "ref");
            if (sol_matrix.empty()) throw CLI::RequiredError("--matrix");
            return cmd_solve(sol_matrix, sol_solver, sol_beta, sol_mu, sol_ref);
        }
        if (s_sim->parsed()) {
            from_config(sim_matrix, o_sim_matrix, cfg, "matrix");
            from_config(sim_alpha, o_sim_alpha, cfg, "alpha");
            from_config(sim_beta, o_sim_beta, cfg, "beta");
            from_config(sim_lambda, o_sim_lambda, cfg, "lambda");
            from_config(sim_iters, o_sim_iters, cfg, "iters");
            from_config(sim_solver, o_sim_solver, cfg, "solver");
            from_config(sim_noise_n, o_sim_noise, cfg, "noise-n");
            from_config(sim_seed, o_sim_seed, cfg, "seed");
            from_config(sim_tol, o_sim_tol, cfg, "tol");
            from_config(sim_out, o_sim_out, cfg, "out");
            from_config(sim_svg, o_sim_svg, cfg, "svg");
            if (sim_matrix.empty()) throw CLI::RequiredError("--matrix");
            return cmd_simulate(sim_matrix, sim_alpha, sim_beta, sim_lambda, sim_iters, sim_solver,
                                sim_noise_n, sim_seed, sim_tol, sim_out, sim_svg);
        }
        if (s_swp->parsed()) {
            from_config(swp_collection, o_swp_coll, cfg, "collection");
            from_config(swp_alphas, o_swp_alphas, cfg, "alphas");
            from_config(swp_bls, o_swp_bls, cfg, "beta-lambdas");
            from_config(swp_lambda, o_swp_lambda, cfg, "lambda");
            from_config(swp_iters, o_swp_iters, cfg, "iters");
            from_config(swp_metric, o_swp_metric, cfg, "metric");
            from_config(swp_noise_n, o_swp_noise, cfg, "noise-n");
            from_config(swp_reals, o_swp_reals, cfg, "realizations");
            from_config(swp_seed, o_swp_seed, cfg, "seed");
            from_config(swp_threads, o_swp_threads, cfg, "threads");
            from_config(swp_out, o_swp_out, cfg, "out");
            from_config(swp_svg, o_swp_svg, cfg, "svg");
            if (swp_collection.empty()) throw CLI::RequiredError("--collection");
            return cmd_sweep(swp_collection, swp_alphas, swp_bls, swp_lambda, swp_iters, swp_metric,
                             swp_noise_n, swp_reals, swp_seed, swp_threads, swp_out, swp_svg);
        }
        if (s_stb->parsed()) {
            from_config(stb_matrix, o_stb_matrix, cfg, "matrix");
            from_config(stb_alpha, o_stb_alpha, cfg, "alpha");
            from_config(stb_beta, o_stb_beta, cfg, "beta");
            from_config(stb_lambda, o_stb_lambda, cfg, "lambda");
            from_config(stb_family, o_stb_family, cfg, "family");
            if (stb_matrix.empty()) throw CLI::RequiredError("--matrix");
            return cmd_stability(stb_matrix, stb_alpha, stb_beta, stb_lambda, stb_family);
        }
        if (s_axm->parsed()) {
            from_config(axm_matrix, o_axm_matrix, cfg, "matrix");
            if (axm_matrix.empty()) throw CLI::RequiredError("--matrix");
            return cmd_axioms(axm_matrix);
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
