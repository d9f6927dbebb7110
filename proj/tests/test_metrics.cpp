#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "quboml/errors.hpp"
#include "quboml/metrics.hpp"

using namespace quboml;

TEST_CASE("ndcg hand-computed cases") {
    const std::map<std::string, int> rel{{"a", 1}, {"b", 0}};
    CHECK(ndcg_at({"a", "b"}, rel, 10) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ndcg_at({"b", "a"}, rel, 10) ==
          doctest::Approx(1.0 / std::log2(3.0)).epsilon(1e-12));

    // Graded gains: 2^rel - 1.
    const std::map<std::string, int> graded{{"x", 2}, {"y", 1}, {"z", 0}};
    const double ideal = 3.0 / std::log2(2.0) + 1.0 / std::log2(3.0);
    const double got = 1.0 / std::log2(2.0) + 3.0 / std::log2(3.0);
    CHECK(ndcg_at({"y", "x", "z"}, graded, 10) == doctest::Approx(got / ideal).epsilon(1e-12));

    // All-zero relevance gives 0, not NaN.
    CHECK(ndcg_at({"b"}, {{"b", 0}}, 10) == 0.0);

    // Depth truncation: relevant item below the cutoff contributes nothing.
    CHECK(ndcg_at({"b", "a"}, rel, 1) == 0.0);
}

TEST_CASE("f1 spot checks") {
    CHECK(f1({1, 1, 0, 0}, {1, 1, 0, 0}) == 1.0);
    CHECK(f1({0, 0, 0, 0}, {1, 1, 0, 0}) == 0.0);
    // tp=1 fp=1 fn=1 -> precision=recall=0.5 -> f1=0.5
    CHECK(f1({1, 1, 0, 0}, {1, 0, 1, 0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(f1({1}, {1, 0}), InvalidArgument);
}

TEST_CASE("macro f1 averages both classes") {
    // Class 1: tp=1 fp=0 fn=1 -> f1 = 2/3. Class 0: tp=1 fp=1 fn=0 -> 2/3.
    CHECK(macro_f1({1, 0, 0}, {1, 1, 0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(macro_f1({1, 0}, {1, 0}) == 1.0);
}

TEST_CASE("make_folds partitions with near-equal sizes deterministically") {
    const auto plan = make_folds(10, 3, 42);
    REQUIRE(plan.fold_of.size() == 10);
    std::vector<int> counts(3, 0);
    for (int f : plan.fold_of) {
        REQUIRE(f >= 0);
        REQUIRE(f < 3);
        ++counts[f];
    }
    CHECK(counts[0] == 4);  // 10 % 3 extra record goes to fold 0
    CHECK(counts[1] == 3);
    CHECK(counts[2] == 3);

    const auto again = make_folds(10, 3, 42);
    CHECK(plan.fold_of == again.fold_of);
    const auto other = make_folds(10, 3, 43);
    CHECK(plan.fold_of != other.fold_of);

    // indices_in and indices_not_in are complementary and sorted.
    const auto in = plan.indices_in(1);
    const auto out = plan.indices_not_in(1);
    CHECK(in.size() + out.size() == 10);
    for (std::size_t i = 1; i < in.size(); ++i) CHECK(in[i - 1] < in[i]);
    for (auto idx : in) CHECK(plan.fold_of[idx] == 1);
    for (auto idx : out) CHECK(plan.fold_of[idx] != 1);
}

TEST_CASE("make_folds validates arguments") {
    CHECK_THROWS_AS(make_folds(3, 5, 0), InvalidArgument);
    CHECK_THROWS_AS(make_folds(3, 0, 0), InvalidArgument);
}
