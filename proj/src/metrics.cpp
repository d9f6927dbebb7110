#include "quboml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "quboml/errors.hpp"
#include "quboml/rng.hpp"

namespace quboml {

namespace {
double dcg(const std::vector<int>& grades, std::size_t depth) {
    double s = 0.0;
    const std::size_t top = std::min(depth, grades.size());
    for (std::size_t r = 0; r < top; ++r) {
        s += (std::pow(2.0, grades[r]) - 1.0) / std::log2(static_cast<double>(r) + 2.0);
    }
    return s;
}
}  // namespace

double ndcg_at(const std::vector<std::string>& ranking,
               const std::map<std::string, int>& relevance, std::size_t depth) {
    if (depth < 1) throw InvalidArgument("ndcg depth must be at least 1");
    std::vector<int> grades;
    grades.reserve(ranking.size());
    for (const auto& id : ranking) {
        auto it = relevance.find(id);
        grades.push_back(it == relevance.end() ? 0 : it->second);
    }
    std::vector<int> ideal;
    ideal.reserve(relevance.size());
    for (const auto& [id, g] : relevance) {
        (void)id;
        ideal.push_back(g);
    }
    std::sort(ideal.rbegin(), ideal.rend());
    const double idcg = dcg(ideal, depth);
    if (idcg <= 0.0) return 0.0;
    return dcg(grades, depth) / idcg;
}

namespace {
double class_f1(const std::vector<int>& preds, const std::vector<int>& labels, int positive) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const bool p = preds[i] == positive;
        const bool l = labels[i] == positive;
        if (p && l) ++tp;
        else if (p) ++fp;
        else if (l) ++fn;
    }
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}
}  // namespace

double f1(const std::vector<int>& preds, const std::vector<int>& labels) {
    if (preds.size() != labels.size()) throw InvalidArgument("f1: length mismatch");
    return class_f1(preds, labels, 1);
}

double macro_f1(const std::vector<int>& preds, const std::vector<int>& labels) {
    if (preds.size() != labels.size()) throw InvalidArgument("macro_f1: length mismatch");
    return 0.5 * (class_f1(preds, labels, 1) + class_f1(preds, labels, 0));
}

std::vector<std::size_t> FoldPlan::indices_in(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::indices_not_in(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (fold_of[i] != fold) out.push_back(i);
    }
    return out;
}

FoldPlan make_folds(std::size_t n, int n_folds, std::uint64_t seed) {
    if (n_folds < 1 || static_cast<std::size_t>(n_folds) > n) {
        throw InvalidArgument("make_folds: need 1 <= n_folds <= n");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(derive_seed(seed, "folds", 0));
    seeded_shuffle(order, rng);

    FoldPlan plan;
    plan.fold_of.assign(n, 0);
    plan.n_folds = n_folds;
    plan.seed = seed;
    const std::size_t base = n / static_cast<std::size_t>(n_folds);
    const std::size_t extra = n % static_cast<std::size_t>(n_folds);
    std::size_t pos = 0;
    for (int f = 0; f < n_folds; ++f) {
        const std::size_t sz = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        for (std::size_t i = 0; i < sz; ++i) plan.fold_of[order[pos++]] = f;
    }
    return plan;
}

}  // namespace quboml
