#ifndef QUBOML_CLUSTERING_HPP
#define QUBOML_CLUSTERING_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quboml/anneal.hpp"
#include "quboml/dataset.hpp"
#include "quboml/qubo.hpp"

namespace quboml {

struct MedoidCandidates {
    std::vector<std::size_t> indices;  // unique positions into the corpus
    std::size_t source_k = 0;          // classical cluster count used
};

struct ClusteringResult {
    std::vector<std::size_t> medoids;       // exactly k corpus indices
    std::vector<std::size_t> assignments;   // medoid corpus index per document
    double dbi = 0.0;
    bool feasible = true;  // sampler returned exactly k without repair
};

Matrix euclidean_sq_distances(const Matrix& points);

// PAM-style k-medoids: greedy seeding (total-distance minimizer, then
// farthest-point additions), assignment, and best-improving swaps until
// convergence or max_iter.
std::vector<std::size_t> kmedoids(const Matrix& points, std::size_t k,
                                  std::uint64_t seed, int max_iter = 100);

// Mean silhouette coefficient over all points for the given assignments.
double silhouette(const Matrix& points, const std::vector<std::size_t>& assignments);

// Picks the k in [k_min, k_max] maximizing silhouette minus range-normalized
// Davies-Bouldin index; ties go to the smaller k.
std::size_t auto_k(const Matrix& points, std::size_t k_min, std::size_t k_max,
                   std::uint64_t seed);

// Welsch/correntropy transform: 1 - exp(-D/2) elementwise on a symmetric
// nonnegative squared-distance matrix with zero diagonal.
Matrix welsch_dissimilarity(const Matrix& D);

// Medoid-refinement objective without the exact-k penalty:
//   x^T (gamma 11^T - (alpha/2) Delta) x + x^T (beta Delta 1 - 2 gamma k 1)
// with alpha = 1/k, beta = 1/n, gamma = 2.
BinaryQuadraticProblem build_medoid_objective(const Matrix& delta, std::size_t k);

// Objective composed with a k-hot constraint at twice the objective's
// energy span bound.
BinaryQuadraticProblem build_medoid_qubo(const Matrix& delta, std::size_t k);

struct RefinedMedoids {
    std::vector<std::size_t> indices;  // corpus indices
    bool feasible = true;
    double energy = 0.0;
    double solve_ms = 0.0;
};

// Squared distances among candidates are divided by their median before the
// Welsch transform so the dissimilarities do not saturate.
RefinedMedoids refine_medoids(const Matrix& points, const MedoidCandidates& candidates,
                              std::size_t k, const AnnealConfig& cfg);

// Nearest selected medoid per document; ties to the lowest medoid index.
std::vector<std::size_t> assign_to_medoids(const Matrix& points,
                                           const std::vector<std::size_t>& medoid_indices);

double davies_bouldin(const Matrix& points, const std::vector<std::size_t>& assignments);

// Per query: pick the cluster whose medoid maximizes cosine similarity,
// then rank that cluster's documents by descending cosine (ties to the
// lower document index), truncated at depth.
std::vector<std::vector<std::size_t>> retrieve(const Matrix& queries, const Matrix& docs,
                                               const ClusteringResult& result,
                                               std::size_t depth = 10);

struct PipelineOutput {
    ClusteringResult result;
    MedoidCandidates candidates;
    double ndcg10_mean = -1.0;  // negative when no queries were evaluated
    double solve_ms = 0.0;
};

// Full two-stage pipeline: classical candidate generation with
// source_k = min(4k, n/2) (at least k), QUBO refinement, full-space
// reassignment, DBI, and optional retrieval scoring against labeled queries.
PipelineOutput cluster_pipeline(const EmbeddingCorpus& docs, const EmbeddingCorpus* queries,
                                std::size_t k, const AnnealConfig& cfg);

}  // namespace quboml

#endif
