#ifndef QUBOML_FEATURE_SELECTION_HPP
#define QUBOML_FEATURE_SELECTION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quboml/anneal.hpp"
#include "quboml/dataset.hpp"
#include "quboml/qubo.hpp"

namespace quboml {

enum class ImportanceMeasure { MI, PFI };
enum class RedundancyMeasure { CMI, CPFI };

std::string to_string(ImportanceMeasure m);
std::string to_string(RedundancyMeasure m);

struct FeatureQuboSpec {
    ImportanceMeasure importance = ImportanceMeasure::MI;
    RedundancyMeasure redundancy = RedundancyMeasure::CMI;
    std::size_t k = 1;
    std::optional<double> lambda;  // defaults to 2x the data-term energy span bound
    int bins = 10;
    double blend = 1.0;            // redundancy weight relative to importance
    int pfi_repeats = 5;
    double pfi_l2 = 1e-3;
};

// Equal-frequency binning; ties share the bin of their lowest rank.
// A constant column maps to the single code 0.
std::vector<int> discretize(const std::vector<double>& column, int bins);

// Plug-in MI estimate in nats over observed contingency cells.
double mutual_information(const std::vector<int>& x, const std::vector<int>& y);

// CMI(xi; xj | y) = sum_z p(z) MI(xi; xj | z), plug-in estimates.
double conditional_mutual_information(const std::vector<int>& xi,
                                      const std::vector<int>& xj,
                                      const std::vector<int>& y);

// Mean increase in held-out MSE of a ridge relevance model after permuting
// the feature within the evaluation split. Seeded and deterministic.
double permutation_importance(const RankingDataset& dataset, std::size_t feature,
                              int repeats, std::uint64_t seed,
                              double l2 = 1e-3);

// Joint variant: features i and j permuted with the same row permutation.
double conditional_permutation_importance(const RankingDataset& dataset,
                                          std::size_t i, std::size_t j,
                                          int repeats, std::uint64_t seed,
                                          double l2 = 1e-3);

// Diagonal = -importance (min-max normalized), off-diagonal = +redundancy
// (min-max normalized, scaled by blend), composed with a k-hot penalty.
BinaryQuadraticProblem build_feature_qubo(const std::vector<double>& importance,
                                          const Matrix& redundancy, std::size_t k,
                                          std::optional<double> lambda = std::nullopt,
                                          double blend = 1.0);

struct FeatureReport {
    std::vector<std::size_t> selected;
    std::size_t k = 0;
    std::string importance_measure;
    std::string redundancy_measure;
    double energy = 0.0;
    double lambda = 0.0;
    bool repaired = false;
    std::vector<double> importance_scores;
    Matrix redundancy_matrix;
    double build_ms = 0.0;
    double solve_ms = 0.0;
};

FeatureReport select_features(const RankingDataset& dataset, const FeatureQuboSpec& spec,
                              const AnnealConfig& cfg);

}  // namespace quboml

#endif
