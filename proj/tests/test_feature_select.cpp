#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "quboml/errors.hpp"
#include "quboml/feature_selection.hpp"
#include "test_util.hpp"

using namespace quboml;

TEST_CASE("discretize assigns equal-frequency codes with tie grouping") {
    CHECK(discretize({3.0, 1.0, 2.0, 4.0}, 2) == std::vector<int>{1, 0, 0, 1});
    // Ties share the bin of their lowest rank.
    CHECK(discretize({1.0, 1.0, 1.0, 2.0}, 2) == std::vector<int>{0, 0, 0, 1});
    // A constant column collapses to a single code.
    CHECK(discretize({5.0, 5.0, 5.0}, 4) == std::vector<int>{0, 0, 0});
    CHECK_THROWS_AS(discretize({1.0, 2.0}, 1), InvalidArgument);
}

TEST_CASE("mutual information on hand-computed tables") {
    // 10 samples, joint counts [[4,1],[1,4]]: MI = 0.8 ln 1.6 + 0.2 ln 0.4.
    const std::vector<int> x{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const std::vector<int> y{0, 0, 0, 0, 1, 0, 1, 1, 1, 1};
    CHECK(mutual_information(x, y) ==
          doctest::Approx(0.8 * std::log(1.6) + 0.2 * std::log(0.4)).epsilon(1e-12));

    // Identical variables: MI = H(X) = ln 2 for a balanced binary.
    CHECK(mutual_information(x, x) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // Independent-looking table: MI clamps at >= 0.
    const std::vector<int> a{0, 0, 1, 1};
    const std::vector<int> b{0, 1, 0, 1};
    CHECK(mutual_information(a, b) == 0.0);
    CHECK_THROWS_AS(mutual_information({0}, {0, 1}), InvalidArgument);
}

TEST_CASE("conditional mutual information strata behavior") {
    // xi == xj inside each stratum: CMI = weighted H within strata.
    const std::vector<int> xi{0, 1, 0, 1, 0, 1, 0, 1};
    const std::vector<int> y{0, 0, 0, 0, 1, 1, 1, 1};
    CHECK(conditional_mutual_information(xi, xi, y) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));

    // xj constant within each stratum: zero conditional dependence.
    const std::vector<int> xj{0, 0, 0, 0, 1, 1, 1, 1};
    CHECK(conditional_mutual_information(xi, xj, y) == doctest::Approx(0.0));
}

TEST_CASE("permutation importance separates signal from noise") {
    const auto ds = testutil::synthetic_ranking(200, 3);
    const double informative = permutation_importance(ds, 0, 5, 7);
    const double noise = permutation_importance(ds, 9, 5, 7);
    CHECK(informative > noise);
    CHECK(informative > 0.0);
    // Deterministic for a fixed seed.
    CHECK(permutation_importance(ds, 0, 5, 7) == informative);
    CHECK_THROWS_AS(conditional_permutation_importance(ds, 2, 2, 5, 7), InvalidArgument);
}

TEST_CASE("joint permutation with a constant partner reduces to single-feature PFI") {
    // The permutation stream depends on (seed, repeat) only, so permuting a
    // constant column alongside feature 0 changes nothing.
    auto ds = testutil::synthetic_ranking(200, 5);
    for (std::size_t r = 0; r < ds.rows.rows; ++r) ds.rows(r, 11) = 1.0;
    const double joint = conditional_permutation_importance(ds, 0, 11, 5, 11);
    const double solo = permutation_importance(ds, 0, 5, 11);
    CHECK(joint == solo);
}

TEST_CASE("joint permutation of an informative pair beats a noise pair") {
    const auto ds = testutil::synthetic_ranking(200, 5);
    CHECK(conditional_permutation_importance(ds, 0, 1, 5, 11) >
          conditional_permutation_importance(ds, 8, 9, 5, 11));
}

TEST_CASE("build_feature_qubo composes data term with k-hot") {
    const std::vector<double> imp{1.0, 0.5, 0.0};
    Matrix red(3, 3);
    red(0, 1) = red(1, 0) = 0.8;
    const auto p = build_feature_qubo(imp, red, 1, 10.0, 1.0);
    // Most important feature alone should be the ground state.
    Assignment best{1, 0, 0};
    for (std::uint64_t v = 0; v < 8; ++v) {
        Assignment x{static_cast<std::uint8_t>(v & 1), static_cast<std::uint8_t>((v >> 1) & 1),
                     static_cast<std::uint8_t>((v >> 2) & 1)};
        if (x != best) CHECK(energy(p, x) > energy(p, best));
    }

    Matrix bad(3, 3);
    bad(0, 0) = 1.0;
    CHECK_THROWS_AS(build_feature_qubo(imp, bad, 1), InvalidArgument);
}

TEST_CASE("select_features finds the informative block with MI+CMI") {
    const auto ds = testutil::synthetic_ranking(400, 17);
    FeatureQuboSpec spec;
    spec.k = 4;
    // A penalty just above the feasibility threshold keeps the constrained
    // optimum identical (brute-force checked in the acceptance gate) while
    // staying well inside the sampler's mixing range.
    spec.lambda = 2.0;
    AnnealConfig cfg;
    cfg.seed = 1;
    cfg.reads = 100;
    cfg.sweeps = 500;
    const auto report = select_features(ds, spec, cfg);
    CHECK(report.selected == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(report.k == 4);
    CHECK(report.importance_measure == "mi");
    CHECK(report.redundancy_measure == "cmi");
    CHECK(report.lambda > 0.0);
    CHECK(report.importance_scores.size() == 12);
}

TEST_CASE("select_features with PFI+CPFI also prefers informative features") {
    const auto ds = testutil::synthetic_ranking(240, 23);
    FeatureQuboSpec spec;
    spec.importance = ImportanceMeasure::PFI;
    spec.redundancy = RedundancyMeasure::CPFI;
    spec.k = 4;
    AnnealConfig cfg;
    cfg.seed = 2;
    cfg.reads = 40;
    cfg.sweeps = 300;
    const auto report = select_features(ds, spec, cfg);
    REQUIRE(report.selected.size() == 4);
    // At least 3 of the 4 picks come from the informative-or-duplicate pool,
    // and pure-noise features are mostly excluded.
    int signalish = 0;
    for (auto f : report.selected) {
        if (f < 8) ++signalish;
    }
    CHECK(signalish >= 3);
}

TEST_CASE("select_features validates k") {
    const auto ds = testutil::synthetic_ranking(60, 1);
    FeatureQuboSpec spec;
    spec.k = 0;
    CHECK_THROWS_AS(select_features(ds, spec, AnnealConfig{}), InvalidArgument);
    spec.k = 13;
    CHECK_THROWS_AS(select_features(ds, spec, AnnealConfig{}), InvalidArgument);
}
