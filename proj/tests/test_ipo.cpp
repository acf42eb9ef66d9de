#include <doctest.h>

#include <cmath>
#include <random>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/errors.hpp"
#include "prefdyn/ipo.hpp"
#include "prefdyn/sampling.hpp"
#include "oracles.hpp"

using namespace prefdyn;

namespace {
PreferenceMatrix rps(double a) {
    return validate_preference({{0.5, 0.5 + a, 0.5 - a},
                                {0.5 - a, 0.5, 0.5 + a},
                                {0.5 + a, 0.5 - a, 0.5}});
}
} // namespace

TEST_SUITE("ipo") {

TEST_CASE("uniform sampling on the cyclic matrix gives the uniform policy") {
    for (double a : {0.1, 0.3, 0.45}) {
        IpoSolution sol = ipo_solve(rps(a), uniform_simplex(3), uniform_simplex(3), 2.5);
        for (double v : sol.policy.w) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
        CHECK(sol.foc_residual <= 1e-12);
    }
}

TEST_CASE("beta -> 0 recovers the reference policy") {
    std::mt19937_64 rng(23);
    PreferenceMatrix P = oracles::random_pref_matrix(rng, 4);
    SimplexVector mu = oracles::random_simplex(rng, 4);
    SimplexVector ref = oracles::random_simplex(rng, 4);
    IpoSolution sol = ipo_solve(P, mu, ref, 1e-9);
    for (int i = 0; i < 4; ++i) CHECK(sol.policy.w[i] == doctest::Approx(ref.w[i]).epsilon(1e-8));
}

TEST_CASE("the three-response counterexample ranks the runner-up above the winner") {
    SimplexVector mu = uniform_simplex(3, SimplexRole::sampling);
    PreferenceMatrix P = prop2_counterexample(mu);
    std::vector<double> pm = mat_vec(P, mu);
    CHECK(pm[1] - pm[0] == doctest::Approx(1.0 / 18.0).epsilon(1e-14));
    IpoSolution sol = ipo_solve(P, mu, uniform_simplex(3), 1.0);
    CHECK(sol.policy.w[1] > sol.policy.w[0]);
}

TEST_CASE("objective: solver output beats random simplex points") {
    std::mt19937_64 rng(31);
    PreferenceMatrix P = oracles::random_pref_matrix(rng, 4);
    SimplexVector mu = oracles::random_simplex(rng, 4);
    SimplexVector ref = oracles::random_simplex(rng, 4);
    double beta = 1.7;
    IpoSolution sol = ipo_solve(P, mu, ref, beta);
    for (int t = 0; t < 1000; ++t) {
        SimplexVector probe = oracles::random_simplex(rng, 4, 4.0);
        CHECK(sol.objective <= ipo_objective(probe, P, mu, ref, beta) + 1e-12);
    }
}

TEST_CASE("objective closed forms") {
    PreferenceMatrix half = validate_preference({{0.5, 0.5}, {0.5, 0.5}});
    SimplexVector u2 = uniform_simplex(2);
    for (double beta : {0.5, 1.0, 4.0}) {
        CHECK(ipo_objective(u2, half, u2, u2, beta) ==
              doctest::Approx(beta * beta / 8.0).epsilon(1e-14));
    }

    // K=2 value vs direct summation by the independent oracle
    PreferenceMatrix P = validate_preference({{0.5, 0.75}, {0.25, 0.5}});
    SimplexVector pi = validate_simplex({0.6, 0.4});
    double direct = oracles::ipo_objective_direct(pi.w, P, u2, u2, 1.0);
    CHECK(ipo_objective(pi, P, u2, u2, 1.0) == doctest::Approx(direct).epsilon(1e-14));

    CHECK_THROWS_AS(ipo_objective(SimplexVector{{1.0, 0.0}, SimplexRole::policy}, P, u2, u2, 1.0),
                    ValidationError);
}

TEST_CASE("first-order condition residual behavior") {
    std::mt19937_64 rng(37);
    PreferenceMatrix P = oracles::random_pref_matrix(rng, 3);
    SimplexVector mu = oracles::random_simplex(rng, 3);
    SimplexVector ref = oracles::random_simplex(rng, 3);

    IpoSolution sol = ipo_solve(P, mu, ref, 2.0);
    CHECK(sol.foc_residual <= 1e-10);

    // at the (non-optimal) reference the residual is positive
    CHECK(ipo_foc_residual(ref, P, mu, ref, 2.0) > 1e-6);

    // degenerate all-half matrix: any pi = ref is stationary
    PreferenceMatrix half = bt_matrix({0.0, 0.0, 0.0});
    CHECK(ipo_foc_residual(ref, half, mu, ref, 2.0) <= 1e-14);
}

TEST_CASE("matches the mirror-descent oracle on random instances") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 10; ++t) {
        int K = 2 + static_cast<int>(rng() % 5);
        PreferenceMatrix P = oracles::random_pref_matrix(rng, K);
        SimplexVector mu = oracles::random_simplex(rng, K, 1.5);
        SimplexVector ref = oracles::random_simplex(rng, K, 1.5);
        std::uniform_real_distribution<double> ub(0.1, 5.0);
        double beta = ub(rng);
        IpoSolution sol = ipo_solve(P, mu, ref, beta);
        oracles::DescentResult md = oracles::mirror_descent_minimize_ipo(P, mu, ref, beta);
        for (int i = 0; i < K; ++i) {
            CHECK(sol.policy.w[i] == doctest::Approx(md.pi[i]).epsilon(2e-6));
        }
    }
}

TEST_CASE("pooling consistency over preferences and data") {
    // P2 = P1 + skew pattern annihilated by uniform mu: identical solutions,
    // and mixtures of the two matrices keep them
    SimplexVector mu = uniform_simplex(3, SimplexRole::sampling);
    SimplexVector ref = validate_simplex({0.5, 0.3, 0.2});
    PreferenceMatrix P1 = bt_matrix({0.8, 0.1, -0.9});
    PreferenceMatrix P2 = P1;
    double c = 0.05;
    P2.at(0, 1) += c; P2.at(1, 0) -= c;
    P2.at(1, 2) += c; P2.at(2, 1) -= c;
    P2.at(2, 0) += c; P2.at(0, 2) -= c;
    check_preference(P2);

    IpoSolution s1 = ipo_solve(P1, mu, ref, 1.3);
    IpoSolution s2 = ipo_solve(P2, mu, ref, 1.3);
    for (int i = 0; i < 3; ++i) CHECK(s1.policy.w[i] == doctest::Approx(s2.policy.w[i]).epsilon(1e-12));

    for (double lam : {0.25, 0.5, 0.75}) {
        PreferenceMatrix mix{3, std::vector<double>(9)};
        for (int i = 0; i < 9; ++i) mix.p[i] = lam * P1.p[i] + (1.0 - lam) * P2.p[i];
        IpoSolution sm = ipo_solve(mix, mu, ref, 1.3);
        for (int i = 0; i < 3; ++i)
            CHECK(sm.policy.w[i] == doctest::Approx(s1.policy.w[i]).epsilon(1e-12));
    }

    // data pooling: with a flat matrix every sampling gives the same solution
    PreferenceMatrix half = bt_matrix({0.0, 0.0, 0.0});
    SimplexVector mu2 = validate_simplex({0.2, 0.5, 0.3});
    IpoSolution d1 = ipo_solve(half, mu, ref, 1.3);
    IpoSolution d2 = ipo_solve(half, mu2, ref, 1.3);
    for (double lam : {0.25, 0.5, 0.75}) {
        SimplexVector mix = validate_simplex({lam * mu.w[0] + (1 - lam) * mu2.w[0],
                                              lam * mu.w[1] + (1 - lam) * mu2.w[1],
                                              lam * mu.w[2] + (1 - lam) * mu2.w[2]});
        IpoSolution dm = ipo_solve(half, mix, ref, 1.3);
        for (int i = 0; i < 3; ++i) {
            CHECK(dm.policy.w[i] == doctest::Approx(d1.policy.w[i]).epsilon(1e-12));
            CHECK(dm.policy.w[i] == doctest::Approx(d2.policy.w[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("pairwise monotonicity: raising P_ij raises the i/j policy ratio") {
    std::mt19937_64 rng(47);
    for (int t = 0; t < 20; ++t) {
        PreferenceMatrix P = oracles::random_pref_matrix(rng, 4, 0.1, 0.85);
        SimplexVector mu = oracles::random_simplex(rng, 4, 1.0);
        SimplexVector ref = oracles::random_simplex(rng, 4, 1.0);
        IpoSolution before = ipo_solve(P, mu, ref, 1.0);
        PreferenceMatrix Q = P;
        Q.at(0, 1) += 0.05;
        Q.at(1, 0) -= 0.05;
        IpoSolution after = ipo_solve(Q, mu, ref, 1.0);
        double r0 = before.policy.w[0] / before.policy.w[1];
        double r1 = after.policy.w[0] / after.policy.w[1];
        CHECK(r1 > r0);
    }
}

TEST_CASE("permutation equivariance") {
    std::mt19937_64 rng(53);
    PreferenceMatrix P = oracles::random_pref_matrix(rng, 4);
    SimplexVector mu = oracles::random_simplex(rng, 4);
    SimplexVector ref = oracles::random_simplex(rng, 4);
    IpoSolution base = ipo_solve(P, mu, ref, 2.0);

    std::vector<int> perm{2, 0, 3, 1};
    PreferenceMatrix Pp{4, std::vector<double>(16)};
    SimplexVector mup = mu, refp = ref;
    for (int i = 0; i < 4; ++i) {
        mup.w[i] = mu.w[perm[i]];
        refp.w[i] = ref.w[perm[i]];
        for (int j = 0; j < 4; ++j) Pp.at(i, j) = P(perm[i], perm[j]);
    }
    IpoSolution got = ipo_solve(Pp, mup, refp, 2.0);
    for (int i = 0; i < 4; ++i) {
        CHECK(got.policy.w[i] == doctest::Approx(base.policy.w[perm[i]]).epsilon(1e-13));
    }
}

} // TEST_SUITE
