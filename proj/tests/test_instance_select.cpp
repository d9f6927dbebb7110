#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "quboml/errors.hpp"
#include "quboml/instance_selection.hpp"
#include "test_util.hpp"

using namespace quboml;

TEST_CASE("cosine spot values") {
    CHECK(cosine({1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(0.0));
    CHECK(cosine({1.0, 1.0}, {2.0, 2.0}) == doctest::Approx(1.0));
    CHECK(cosine({1.0, 0.0}, {-1.0, 0.0}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(cosine({0.0, 0.0}, {1.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(cosine({1.0}, {1.0, 0.0}), InvalidArgument);
}

TEST_CASE("bcos off-diagonals sign by label agreement and flip antisymmetry") {
    EmbeddingCorpus batch;
    batch.vectors = Matrix(3, 2);
    batch.vectors(0, 0) = 1.0;
    batch.vectors(1, 0) = 1.0;
    batch.vectors(1, 1) = 1.0;
    batch.vectors(2, 1) = 1.0;
    batch.labels = {0, 0, 1};
    batch.has_labels = true;
    batch.ids = {"a", "b", "c"};

    const auto m = bcos_offdiagonals(batch);
    CHECK(m(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));   // same label
    CHECK(m(1, 2) == doctest::Approx(-1.0 / std::sqrt(2.0)));  // different label
    CHECK(m(0, 2) == doctest::Approx(0.0));
    CHECK(m(1, 0) == m(0, 1));

    // Flipping one label negates exactly the pairs that involve it.
    auto flipped = batch;
    flipped.labels[2] = 0;
    const auto f = bcos_offdiagonals(flipped);
    CHECK(f(0, 1) == m(0, 1));
    CHECK(f(1, 2) == -m(1, 2));
    CHECK(f(0, 2) == -m(0, 2));

    // Flipping every label leaves the matrix unchanged.
    auto all = batch;
    for (auto& l : all.labels) l = 1 - l;
    const auto g = bcos_offdiagonals(all);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(g(i, j) == m(i, j));
    }

    EmbeddingCorpus unlabeled = batch;
    unlabeled.has_labels = false;
    CHECK_THROWS_AS(bcos_offdiagonals(unlabeled), DataError);
}

TEST_CASE("svc diagonals rank boundary-near instances as most important") {
    // Symmetric 1-D fold keeps the boundary at x = 0 exactly.
    EmbeddingCorpus fold;
    fold.vectors = Matrix(4, 1);
    fold.vectors(0, 0) = -1.0;
    fold.vectors(1, 0) = -0.5;
    fold.vectors(2, 0) = 0.5;
    fold.vectors(3, 0) = 1.0;
    fold.labels = {0, 0, 1, 1};
    fold.has_labels = true;
    fold.ids = {"a", "b", "c", "d"};

    const auto d = svc_diagonals(fold, {2, 3});
    REQUIRE(d.size() == 2);
    // Nearer the boundary => larger raw importance => more negative diagonal.
    CHECK(d[0] == doctest::Approx(-1.0));
    CHECK(d[1] == doctest::Approx(0.0));
}

TEST_CASE("deletion influence marks degenerate deletions maximal") {
    // One record of class 0: deleting it leaves a one-class batch, so it
    // takes the batch maximum influence (most negative diagonal).
    auto batch = testutil::separable_corpus(4, 13);
    std::vector<std::size_t> keep{0, 4, 5, 6, 7};
    batch = subset(batch, keep);
    const auto d = deletion_influence_diagonals(batch, 0);
    REQUIRE(d.size() == 5);
    const double lo = *std::min_element(d.begin(), d.end());
    CHECK(d[0] == doctest::Approx(lo));
    for (double v : d) {
        CHECK(v <= 0.0);
        CHECK(v >= -1.0);
    }
}

TEST_CASE("batch partition covers the corpus in order") {
    const auto parts = batch_partition(170, 80);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].begin == 0);
    CHECK(parts[0].end == 80);
    CHECK(parts[1].end == 160);
    CHECK(parts[2].end == 170);
    CHECK_THROWS_AS(batch_partition(0, 80), InvalidArgument);
    CHECK_THROWS_AS(batch_partition(10, 1), InvalidArgument);
}

TEST_CASE("retained_count rounds half to even") {
    CHECK(retained_count(0.75, 80) == 60);
    CHECK(retained_count(0.5, 5) == 2);   // 2.5 -> 2
    CHECK(retained_count(0.5, 7) == 4);   // 3.5 -> 4
    CHECK(retained_count(1.0, 9) == 9);
    CHECK(retained_count(0.1, 3) == 0);
}

TEST_CASE("select_instances keeps exactly the per-batch targets") {
    const auto corpus = testutil::separable_corpus(55, 3);  // 110 records
    InstanceSpec spec;
    spec.batch_size = 40;
    spec.retain_fraction = 0.75;
    AnnealConfig cfg;
    cfg.reads = 20;
    cfg.sweeps = 200;
    cfg.seed = 5;
    const auto report = select_instances(corpus, spec, cfg);

    std::size_t expect = 0;
    for (const auto& range : batch_partition(110, 40)) {
        expect += retained_count(0.75, range.size());
    }
    CHECK(report.kept.size() == expect);
    CHECK(report.kept_ids.size() == expect);
    for (std::size_t i = 1; i < report.kept.size(); ++i) {
        CHECK(report.kept[i - 1] < report.kept[i]);
    }
    CHECK(report.achieved_fraction == doctest::Approx(static_cast<double>(expect) / 110.0));
    CHECK(report.method == "bcos");
    REQUIRE(report.per_batch.size() == 3);

    // Determinism.
    const auto again = select_instances(corpus, spec, cfg);
    CHECK(again.kept == report.kept);
}

TEST_CASE("all three methods run end to end on labeled data") {
    const auto corpus = testutil::separable_corpus(20, 9);
    AnnealConfig cfg;
    cfg.reads = 10;
    cfg.sweeps = 100;
    cfg.seed = 2;
    // Batch size spans the whole corpus so every batch holds both classes,
    // which the model-based diagonal schemes require.
    for (auto m : {InstanceMethod::bcos, InstanceMethod::svc, InstanceMethod::instance_deletion}) {
        InstanceSpec spec;
        spec.method = m;
        spec.batch_size = 40;
        spec.retain_fraction = 0.5;
        const auto report = select_instances(corpus, spec, cfg);
        CHECK(report.kept.size() == 20);
        CHECK(report.method == to_string(m));
    }
}

TEST_CASE("method name round trip and invalid fraction") {
    CHECK(instance_method_from_string("svc") == InstanceMethod::svc);
    CHECK_THROWS_AS(instance_method_from_string("rbf"), InvalidArgument);
    InstanceSpec spec;
    spec.retain_fraction = 0.0;
    CHECK_THROWS_AS(select_instances(testutil::separable_corpus(5, 0), spec, AnnealConfig{}),
                    InvalidArgument);
}
