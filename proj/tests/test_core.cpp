#include <doctest.h>

#include <cmath>
#include <random>

#include "prefdyn/core_ops.hpp"
#include "prefdyn/errors.hpp"
#include "prefdyn/structure.hpp"
#include "oracles.hpp"

using namespace prefdyn;

namespace {
PreferenceMatrix rps(double a) {
    return validate_preference({{0.5, 0.5 + a, 0.5 - a},
                                {0.5 - a, 0.5, 0.5 + a},
                                {0.5 + a, 0.5 - a, 0.5}});
}
} // namespace

TEST_SUITE("core") {

TEST_CASE("validate_preference accepts the cyclic 3x3 pattern") {
    PreferenceMatrix P = rps(0.2);
    CHECK(P.k == 3);
    CHECK(P(0, 1) == doctest::Approx(0.7));
}

TEST_CASE("validate_preference rejects a bad diagonal") {
    CHECK_THROWS_WITH_AS(validate_preference({{1.0, 0.5}, {0.5, 0.5}}),
                         doctest::Contains("DiagonalNotHalf"), ValidationError);
}

TEST_CASE("validate_preference rejects asymmetric pairs and range violations") {
    CHECK_THROWS_WITH_AS(validate_preference({{0.5, 0.6}, {0.6, 0.5}}),
                         doctest::Contains("RowColumnSumViolation"), ValidationError);
    CHECK_THROWS_WITH_AS(validate_preference({{0.5, 1.2}, {-0.2, 0.5}}),
                         doctest::Contains("EntryOutOfRange"), ValidationError);
}

TEST_CASE("validate_preference accepts the 4x4 ordered example matrix") {
    // sigma(1)=0.731..., sigma(2)=0.881... pattern with two identical rows
    PreferenceMatrix P = validate_preference({{0.5, 0.731, 0.269, 0.5},
                                              {0.269, 0.5, 0.119, 0.269},
                                              {0.731, 0.881, 0.5, 0.731},
                                              {0.5, 0.731, 0.269, 0.5}});
    CHECK(P.k == 4);
}

TEST_CASE("round trip: validated matrix revalidates unchanged") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        PreferenceMatrix P = oracles::random_pref_matrix(rng, 2 + static_cast<int>(rng() % 5));
        PreferenceMatrix Q = validate_preference(P.k, P.p);
        CHECK(Q.p == P.p);
    }
}

TEST_CASE("softmax basics") {
    SimplexVector s = softmax({0.0, 0.0, 0.0});
    CHECK(s.w[0] == doctest::Approx(1.0 / 3.0));

    SimplexVector t = softmax({0.625, 0.375});
    CHECK(t.w[0] == doctest::Approx(sigmoid(0.25)).epsilon(1e-12));
    CHECK(t.w[0] == doctest::Approx(0.56218).epsilon(1e-4));

    SimplexVector a = softmax({0.3, -1.2, 0.9});
    SimplexVector b = softmax({7.3, 5.8, 7.9});
    for (int i = 0; i < 3; ++i) CHECK(a.w[i] == doctest::Approx(b.w[i]).epsilon(1e-14));

    CHECK_THROWS_AS(softmax({0.0, std::nan("")}), ValidationError);
}

TEST_CASE("softmax output is a strictly positive simplex point") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-300.0, 300.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> z(4);
        for (double& v : z) v = u(rng);
        SimplexVector s = softmax(z);
        double sum = 0.0;
        for (double v : s.w) {
            CHECK(v > 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("geometric_mix endpoints and symmetry") {
    SimplexVector pi = validate_simplex({0.8, 0.2});
    SimplexVector ref = validate_simplex({0.2, 0.8});
    CHECK(geometric_mix(pi, ref, 1.0).w == pi.w);
    CHECK(geometric_mix(pi, ref, 0.0).w == ref.w);
    SimplexVector mid = geometric_mix(pi, ref, 0.5);
    CHECK(mid.w[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("geometric_mix is idempotent on equal arguments") {
    std::mt19937_64 rng(5);
    for (double alpha : {0.0, 0.25, 0.5, 0.9, 1.0}) {
        SimplexVector pi = oracles::random_simplex(rng, 4);
        SimplexVector out = geometric_mix(pi, pi, alpha);
        for (int i = 0; i < 4; ++i) CHECK(out.w[i] == doctest::Approx(pi.w[i]).epsilon(1e-13));
    }
}

TEST_CASE("geometric_mix survives near-vertex policies (log-space)") {
    std::vector<double> w{1.0 - 3e-280, 1e-280, 1e-280, 1e-280};
    SimplexVector pi{w, SimplexRole::policy};
    SimplexVector ref = uniform_simplex(4);
    SimplexVector out = geometric_mix(pi, ref, 0.5);
    for (double v : out.w) CHECK(v > 0.0);
}

TEST_CASE("affine_mix endpoints and arithmetic") {
    SimplexVector pi = validate_simplex({1.0, 0.0});
    SimplexVector anchor = validate_simplex({0.5, 0.5});
    CHECK(affine_mix(pi, anchor, 0.0).w == anchor.w);
    CHECK(affine_mix(pi, anchor, 1.0).w == pi.w);
    SimplexVector mid = affine_mix(pi, anchor, 0.5);
    CHECK(mid.w[0] == doctest::Approx(0.75));
    CHECK(mid.w[1] == doctest::Approx(0.25));
}

TEST_CASE("bt_matrix values and validity") {
    PreferenceMatrix P0 = bt_matrix({0.0, 0.0});
    CHECK(P0(0, 1) == doctest::Approx(0.5));

    PreferenceMatrix P1 = bt_matrix({1.0, 0.0});
    CHECK(P1(0, 1) == doctest::Approx(0.731).epsilon(1e-3));

    PreferenceMatrix P2 = bt_matrix({1.0, 0.0, -1.0});
    CHECK(P2(0, 2) == doctest::Approx(0.881).epsilon(1e-3));
    CHECK_NOTHROW(check_preference(P2));
    CHECK_THROWS_AS(bt_matrix({1.0, std::nan("")}), ValidationError);
}

TEST_CASE("bt_matrix with distinct scores is strictly transitive") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> r(5);
        for (double& v : r) v = u(rng);
        std::sort(r.begin(), r.end(), std::greater<double>());
        for (int i = 0; i < 5; ++i) r[i] -= 0.05 * i; // keep scores clearly distinct
        StructureReport rep = classify(bt_matrix(r));
        CHECK(rep.cls == PrefClass::strictly_strongly_transitive);
    }
}

TEST_CASE("simplex validation tolerances") {
    CHECK_THROWS_AS(validate_simplex({0.5, 0.6}), ValidationError);
    CHECK_THROWS_AS(validate_simplex({-0.1, 1.1}), ValidationError);
    CHECK_THROWS_AS(validate_simplex({1.0, 0.0}, SimplexRole::policy, true), ValidationError);
    CHECK_NOTHROW(validate_simplex({0.5, 0.5 + 5e-11}));
}

TEST_CASE("gauge projection produces sum-zero logits") {
    LogitVector th = gauge_project({3.0, 1.0, -1.0, 2.0});
    double sum = 0.0;
    for (double v : th.theta) sum += v;
    CHECK(std::abs(sum) < 1e-12);
}

} // TEST_SUITE
