#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quboml/anneal.hpp"
#include "quboml/errors.hpp"
#include "quboml/qubo.hpp"
#include "test_util.hpp"

using namespace quboml;

namespace {
// Independent oracle: enumerate all assignments of p.
std::pair<double, double> brute_range(const BinaryQuadraticProblem& p) {
    const std::size_t n = p.num_variables();
    double lo = 1e300, hi = -1e300;
    for (std::uint64_t v = 0; v < (1ULL << n); ++v) {
        Assignment x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = (v >> i) & 1u;
        const double e = energy(p, x);
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    return {lo, hi};
}
}  // namespace

TEST_CASE("energy evaluates the quadratic form") {
    BinaryQuadraticProblem p(3);
    p.set_linear(0, 2.5);
    p.add_quadratic(0, 1, -4.0);
    CHECK(energy(p, {0, 0, 0}) == 0.0);

    BinaryQuadraticProblem single(1);
    single.set_linear(0, -1.0);
    CHECK(energy(single, {1}) == -1.0);

    BinaryQuadraticProblem pair(2);
    pair.set_linear(0, 1.0);
    pair.set_linear(1, 1.0);
    pair.add_quadratic(0, 1, -2.0);
    CHECK(energy(pair, {1, 1}) == 0.0);
}

TEST_CASE("energy rejects length mismatch") {
    BinaryQuadraticProblem p(2);
    CHECK_THROWS_AS(energy(p, {1}), InvalidArgument);
}

TEST_CASE("quadratic terms normalize to unordered pairs") {
    BinaryQuadraticProblem p(3);
    p.add_quadratic(2, 0, 1.5);
    p.add_quadratic(0, 2, 0.5);
    CHECK(p.quadratic_at(0, 2) == 2.0);
    CHECK(p.quadratic_at(2, 0) == 2.0);
    CHECK_THROWS_AS(p.add_quadratic(1, 1, 1.0), InvalidArgument);
}

TEST_CASE("k_hot_constraint matches the quadratic penalty formula") {
    const auto p = k_hot_constraint(3, 2, 1.0);
    CHECK(energy(p, {1, 1, 0}) == 0.0);
    CHECK(energy(p, {0, 0, 0}) == 4.0);
    CHECK(energy(p, {1, 1, 1}) == 1.0);
    CHECK_THROWS_AS(k_hot_constraint(3, 4, 1.0), InvalidArgument);
    CHECK_THROWS_AS(k_hot_constraint(3, 2, 0.0), InvalidArgument);
}

TEST_CASE("k_hot energy equals strength*(popcount-k)^2 exhaustively") {
    for (std::size_t n = 1; n <= 12; n += 3) {
        for (std::size_t k = 0; k <= n; k += 2) {
            const double s = 0.75;
            const auto p = k_hot_constraint(n, k, s);
            for (std::uint64_t v = 0; v < (1ULL << n); ++v) {
                Assignment x(n);
                int pc = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    x[i] = (v >> i) & 1u;
                    pc += x[i];
                }
                const double want = s * (pc - static_cast<double>(k)) * (pc - static_cast<double>(k));
                CHECK(energy(p, x) == doctest::Approx(want).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("compose adds energies everywhere") {
    const auto a = testutil::random_problem(6, 11);
    const auto b = testutil::random_problem(6, 22);
    const auto c = testutil::random_problem(6, 33);
    const auto ab = compose(a, b);
    const auto ba = compose(b, a);
    const auto abc1 = compose(compose(a, b), c);
    const auto abc2 = compose(a, compose(b, c));
    std::mt19937_64 g(7);
    for (std::uint64_t v = 0; v < (1ULL << 6); ++v) {
        Assignment x(6);
        for (std::size_t i = 0; i < 6; ++i) x[i] = (v >> i) & 1u;
        CHECK(energy(ab, x) == doctest::Approx(energy(a, x) + energy(b, x)).epsilon(1e-12));
        CHECK(energy(ab, x) == doctest::Approx(energy(ba, x)).epsilon(1e-12));
        CHECK(energy(abc1, x) == doctest::Approx(energy(abc2, x)).epsilon(1e-12));
    }
    BinaryQuadraticProblem zero(6);
    const auto zb = compose(zero, b);
    CHECK(energy(zb, Assignment(6, 1)) == doctest::Approx(energy(b, Assignment(6, 1))));
    CHECK_THROWS_AS(compose(zero, testutil::random_problem(5, 1)), InvalidArgument);
}

TEST_CASE("compose adds coefficients") {
    BinaryQuadraticProblem a(1), b(1);
    a.set_linear(0, 1.0);
    b.set_linear(0, 2.0);
    CHECK(compose(a, b).linear()[0] == 3.0);
}

TEST_CASE("energy_delta_bound basics") {
    CHECK(energy_delta_bound(BinaryQuadraticProblem(3)) == 0.0);
    BinaryQuadraticProblem p(1);
    p.set_linear(0, -3.0);
    CHECK(energy_delta_bound(p) == 3.0);

    BinaryQuadraticProblem q(2);
    q.set_linear(0, 1.0);
    q.set_linear(1, -1.0);
    q.add_quadratic(0, 1, 2.0);
    CHECK(energy_delta_bound(q) == 4.0);
    const auto [lo, hi] = brute_range(q);
    CHECK(hi - lo == doctest::Approx(3.0));
    CHECK(energy_delta_bound(q) >= hi - lo);
}

TEST_CASE("energy_delta_bound dominates the brute-force range") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 3 + seed % 10;
        const auto p = testutil::random_problem(n, 1000 + seed);
        const auto [lo, hi] = brute_range(p);
        CHECK(energy_delta_bound(p) >= hi - lo - 1e-12);
    }
}
