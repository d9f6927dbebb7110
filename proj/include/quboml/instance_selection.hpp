#ifndef QUBOML_INSTANCE_SELECTION_HPP
#define QUBOML_INSTANCE_SELECTION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quboml/anneal.hpp"
#include "quboml/dataset.hpp"
#include "quboml/qubo.hpp"

namespace quboml {

enum class InstanceMethod { bcos, svc, instance_deletion };

std::string to_string(InstanceMethod m);
InstanceMethod instance_method_from_string(const std::string& s);

struct InstanceSpec {
    InstanceMethod method = InstanceMethod::bcos;
    double retain_fraction = 0.75;
    std::size_t batch_size = 80;
    std::optional<double> penalty;  // defaults to 2x the data-term energy span bound
    bool repair = true;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);
double cosine(const double* a, const double* b, std::size_t d);

// Signed cosine coefficients for i<j: +cos for same-label pairs, -cos for
// different-label pairs.
Matrix bcos_offdiagonals(const EmbeddingCorpus& batch);

// Margin-based importance: fit one large-margin classifier on the whole
// fold, take 1/(distance + 1e-12) per batch member, min-max normalize
// within the batch, negate (importance must lower energy under
// minimization).
std::vector<double> svc_diagonals(const EmbeddingCorpus& fold,
                                  const std::vector<std::size_t>& batch_indices);

// Deletion influence: mean |yhat_k - yhat_k^(-i)| over the batch after
// refitting without instance i; min-max normalized within the batch and
// negated. An i whose deletion leaves a single class is assigned the batch
// maximum influence.
std::vector<double> deletion_influence_diagonals(const EmbeddingCorpus& batch,
                                                 std::uint64_t seed);

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;  // exclusive
    std::size_t size() const { return end - begin; }
};

std::vector<IndexRange> batch_partition(std::size_t n, std::size_t batch_size);

// Round-half-to-even retained count for a batch of size n_b.
std::size_t retained_count(double retain_fraction, std::size_t n_b);

BinaryQuadraticProblem build_instance_qubo(const EmbeddingCorpus& batch,
                                           const InstanceSpec& spec,
                                           const std::vector<double>* diagonals = nullptr);

struct BatchOutcome {
    std::size_t k_b = 0;
    double energy = 0.0;
    bool repaired = false;
};

struct InstanceReport {
    std::vector<std::size_t> kept;  // corpus indices, ascending
    std::vector<std::string> kept_ids;
    double target_fraction = 0.0;
    double achieved_fraction = 0.0;
    std::string method;
    std::vector<BatchOutcome> per_batch;
    double build_ms = 0.0;
    double solve_ms = 0.0;
};

InstanceReport select_instances(const EmbeddingCorpus& corpus, const InstanceSpec& spec,
                                const AnnealConfig& cfg);

struct SweepRow {
    double fraction = 0.0;
    std::string method;
    double f1_mean = 0.0;
    double f1_std = 0.0;
};

// Fold-averaged downstream F1 of a logistic model trained on the kept
// instances, for each fraction and method (including a seeded random-drop
// baseline).
std::vector<SweepRow> reduction_sweep(const EmbeddingCorpus& corpus, const InstanceSpec& spec,
                                      const std::vector<double>& fractions, int eval_folds,
                                      const AnnealConfig& cfg);

}  // namespace quboml

#endif
