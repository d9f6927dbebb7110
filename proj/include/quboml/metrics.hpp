#ifndef QUBOML_METRICS_HPP
#define QUBOML_METRICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace quboml {

// DCG with 2^rel - 1 gain and log2(rank+1) discount (standard LETOR
// convention). Returns 0 when the ideal DCG is zero.
double ndcg_at(const std::vector<std::string>& ranking,
               const std::map<std::string, int>& relevance, std::size_t depth);

// Positive-class binary F1; 0 when precision + recall is 0.
double f1(const std::vector<int>& preds, const std::vector<int>& labels);

// Unweighted mean of per-class F1 over both classes.
double macro_f1(const std::vector<int>& preds, const std::vector<int>& labels);

struct FoldPlan {
    std::vector<int> fold_of;  // fold id per record
    int n_folds = 0;
    std::uint64_t seed = 0;

    std::vector<std::size_t> indices_in(int fold) const;
    std::vector<std::size_t> indices_not_in(int fold) const;
};

// Seeded shuffle into near-equal folds (size difference at most 1; the
// first n % n_folds folds take the extra record).
FoldPlan make_folds(std::size_t n, int n_folds, std::uint64_t seed);

}  // namespace quboml

#endif
