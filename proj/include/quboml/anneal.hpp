#ifndef QUBOML_ANNEAL_HPP
#define QUBOML_ANNEAL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "quboml/qubo.hpp"

namespace quboml {

struct AnnealConfig {
    int reads = 100;
    int sweeps = 1000;
    // Inverse-temperature endpoints; derived from coefficient magnitudes
    // when unset. Requires 0 < beta_hot < beta_cold when both are given.
    std::optional<double> beta_hot;
    std::optional<double> beta_cold;
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = auto
};

struct Sample {
    Assignment bits;
    double energy = 0.0;
    int occurrences = 1;
};

struct SampleSet {
    // Sorted ascending by energy, ties by lexicographic bits.
    std::vector<Sample> samples;
    double solve_time_ms = 0.0;

    const Sample& best() const { return samples.front(); }
};

// Metropolis single-bit-flip simulated annealing under a geometric
// inverse-temperature schedule. Each read restarts from a uniformly random
// assignment; identical (problem, config) including seed gives a
// bit-identical SampleSet.
SampleSet simulated_anneal(const BinaryQuadraticProblem& p, const AnnealConfig& cfg);

// Exhaustive minimization oracle for n <= 25 variables. Ties are broken by
// the lowest assignment read as an integer (bit 0 = variable 0, LSB).
std::pair<Assignment, double> brute_force_solve(const BinaryQuadraticProblem& p);

// Flip bits of x greedily (smallest energy increase first, ties to the
// lowest index) until the assignment has exactly k ones.
void repair_to_k(const BinaryQuadraticProblem& p, Assignment& x, std::size_t k);

// Lowest-energy sample with popcount k, or the overall best sample repaired
// toward k. Returns the chosen bits and whether repair fired.
std::pair<Assignment, bool> best_feasible(const BinaryQuadraticProblem& p,
                                          const SampleSet& set, std::size_t k);

}  // namespace quboml

#endif
