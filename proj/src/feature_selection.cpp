#include "quboml/feature_selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "quboml/errors.hpp"
#include "quboml/linear_models.hpp"
#include "quboml/rng.hpp"

namespace quboml {

std::string to_string(ImportanceMeasure m) {
    return m == ImportanceMeasure::MI ? "mi" : "pfi";
}

std::string to_string(RedundancyMeasure m) {
    return m == RedundancyMeasure::CMI ? "cmi" : "cpfi";
}

std::vector<int> discretize(const std::vector<double>& column, int bins) {
    if (bins < 2) throw InvalidArgument("discretize needs at least 2 bins");
    const std::size_t n = column.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return column[a] < column[b]; });
    std::vector<int> codes(n, 0);
    std::size_t group_start = 0;
    for (std::size_t pos = 0; pos < n; ++pos) {
        if (pos > 0 && column[order[pos]] != column[order[pos - 1]]) group_start = pos;
        codes[order[pos]] = static_cast<int>(group_start * static_cast<std::size_t>(bins) / n);
    }
    return codes;
}

double mutual_information(const std::vector<int>& x, const std::vector<int>& y) {
    if (x.size() != y.size() || x.empty()) {
        throw InvalidArgument("mutual_information: equal nonempty lengths required");
    }
    const double n = static_cast<double>(x.size());
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> px, py;
    for (std::size_t i = 0; i < x.size(); ++i) {
        joint[{x[i], y[i]}] += 1.0;
        px[x[i]] += 1.0;
        py[y[i]] += 1.0;
    }
    double mi = 0.0;
    for (const auto& [cell, c] : joint) {
        mi += (c / n) * std::log(c * n / (px[cell.first] * py[cell.second]));
    }
    return std::max(mi, 0.0);
}

double conditional_mutual_information(const std::vector<int>& xi,
                                      const std::vector<int>& xj,
                                      const std::vector<int>& y) {
    if (xi.size() != xj.size() || xi.size() != y.size() || xi.empty()) {
        throw InvalidArgument("conditional_mutual_information: equal nonempty lengths required");
    }
    std::map<int, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < y.size(); ++i) strata[y[i]].push_back(i);
    double cmi = 0.0;
    std::vector<int> a, b;
    for (const auto& [z, idx] : strata) {
        (void)z;
        a.clear();
        b.clear();
        for (std::size_t i : idx) {
            a.push_back(xi[i]);
            b.push_back(xj[i]);
        }
        const double pz = static_cast<double>(idx.size()) / static_cast<double>(y.size());
        cmi += pz * mutual_information(a, b);
    }
    return cmi;
}

namespace {

struct PfiContext {
    Matrix eval_x;
    std::vector<double> eval_y;
    LinearModel model;
    double baseline_mse = 0.0;
};

double mse(const LinearModel& m, const Matrix& X, const std::vector<double>& y) {
    const auto pred = predict_linear(m, X);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = pred[i] - y[i];
        s += d * d;
    }
    return s / static_cast<double>(y.size());
}

// Shared seeded 75/25 split + ridge relevance model. The split depends only
// on the master seed, so PFI and CPFI see identical evaluation data.
PfiContext make_pfi_context(const RankingDataset& dataset, std::uint64_t seed, double l2) {
    const std::size_t n = dataset.rows.rows;
    if (n < 4) throw InvalidArgument("permutation importance needs at least 4 rows");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(derive_seed(seed, "pfi-split", 0));
    seeded_shuffle(order, rng);
    const std::size_t n_eval = std::max<std::size_t>(1, n / 4);

    PfiContext ctx;
    ctx.eval_x = Matrix(n_eval, dataset.rows.cols);
    ctx.eval_y.resize(n_eval);
    Matrix train_x(n - n_eval, dataset.rows.cols);
    std::vector<double> train_y(n - n_eval);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        if (i < n_eval) {
            std::copy_n(dataset.rows.row(src), dataset.rows.cols, ctx.eval_x.row(i));
            ctx.eval_y[i] = static_cast<double>(dataset.labels[src]);
        } else {
            std::copy_n(dataset.rows.row(src), dataset.rows.cols, train_x.row(i - n_eval));
            train_y[i - n_eval] = static_cast<double>(dataset.labels[src]);
        }
    }
    ctx.model = fit_ridge(train_x, train_y, l2);
    ctx.baseline_mse = mse(ctx.model, ctx.eval_x, ctx.eval_y);
    return ctx;
}

double permuted_error_increase(const PfiContext& ctx, const std::vector<std::size_t>& features,
                               int repeats, std::uint64_t seed) {
    const std::size_t n_eval = ctx.eval_x.rows;
    double acc = 0.0;
    Matrix work = ctx.eval_x;
    for (int r = 0; r < repeats; ++r) {
        std::vector<std::size_t> perm(n_eval);
        std::iota(perm.begin(), perm.end(), 0);
        // Permutation depends on (seed, repeat) only, so the joint variant
        // with a degenerate second feature reproduces the single-feature run.
        std::mt19937_64 rng(derive_seed(seed, "pfi-perm", static_cast<std::uint64_t>(r)));
        seeded_shuffle(perm, rng);
        for (std::size_t f : features) {
            for (std::size_t i = 0; i < n_eval; ++i) work(i, f) = ctx.eval_x(perm[i], f);
        }
        acc += mse(ctx.model, work, ctx.eval_y) - ctx.baseline_mse;
        for (std::size_t f : features) {
            for (std::size_t i = 0; i < n_eval; ++i) work(i, f) = ctx.eval_x(i, f);
        }
    }
    return acc / static_cast<double>(repeats);
}

std::vector<double> minmax_normalize(std::vector<double> v) {
    if (v.empty()) return v;
    const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo;
    for (double& x : v) x = span > 0.0 ? (x - lo) / span : 0.0;
    return v;
}

// Relevance/redundancy data term: normalized importance negated on the
// diagonal, normalized redundancy (scaled by blend) off-diagonal.
BinaryQuadraticProblem feature_data_term(const std::vector<double>& importance,
                                         const Matrix& redundancy, double blend) {
    const std::size_t n = importance.size();
    if (redundancy.rows != n || redundancy.cols != n) {
        throw InvalidArgument("redundancy matrix shape does not match importance length");
    }
    std::vector<double> red_vals;
    for (std::size_t i = 0; i < n; ++i) {
        if (redundancy(i, i) != 0.0) throw InvalidArgument("redundancy diagonal must be zero");
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(redundancy(i, j) - redundancy(j, i)) > 1e-12) {
                throw InvalidArgument("redundancy matrix must be symmetric");
            }
            red_vals.push_back(redundancy(i, j));
        }
    }
    const auto imp = minmax_normalize(importance);
    const auto red = minmax_normalize(red_vals);

    BinaryQuadraticProblem data(n);
    for (std::size_t i = 0; i < n; ++i) data.set_linear(i, -imp[i]);
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++p) {
            if (red[p] != 0.0) data.add_quadratic(i, j, blend * red[p]);
        }
    }
    return data;
}

double feature_lambda(const BinaryQuadraticProblem& data, std::optional<double> lambda) {
    if (lambda) return *lambda;
    const double strength = 2.0 * energy_delta_bound(data);
    return strength > 0.0 ? strength : 1.0;
}

}  // namespace

double permutation_importance(const RankingDataset& dataset, std::size_t feature,
                              int repeats, std::uint64_t seed, double l2) {
    if (feature >= dataset.rows.cols) throw InvalidArgument("permutation_importance: bad feature index");
    if (repeats < 1) throw InvalidArgument("permutation_importance: repeats must be >= 1");
    const auto ctx = make_pfi_context(dataset, seed, l2);
    return permuted_error_increase(ctx, {feature}, repeats, seed);
}

double conditional_permutation_importance(const RankingDataset& dataset,
                                          std::size_t i, std::size_t j,
                                          int repeats, std::uint64_t seed, double l2) {
    if (i >= dataset.rows.cols || j >= dataset.rows.cols) {
        throw InvalidArgument("conditional_permutation_importance: bad feature index");
    }
    if (i == j) throw InvalidArgument("conditional_permutation_importance: i and j must differ");
    const auto ctx = make_pfi_context(dataset, seed, l2);
    return permuted_error_increase(ctx, {i, j}, repeats, seed);
}

BinaryQuadraticProblem build_feature_qubo(const std::vector<double>& importance,
                                          const Matrix& redundancy, std::size_t k,
                                          std::optional<double> lambda, double blend) {
    const auto data = feature_data_term(importance, redundancy, blend);
    return compose(data, k_hot_constraint(importance.size(), k, feature_lambda(data, lambda)));
}

FeatureReport select_features(const RankingDataset& dataset, const FeatureQuboSpec& spec,
                              const AnnealConfig& cfg) {
    const std::size_t nf = dataset.rows.cols;
    if (spec.k < 1 || spec.k > nf) throw InvalidArgument("feature spec: need 1 <= k <= n_features");
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<std::vector<int>> codes(nf);
    for (std::size_t f = 0; f < nf; ++f) codes[f] = discretize(dataset.rows.column(f), spec.bins);

    std::vector<double> importance(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        importance[f] = spec.importance == ImportanceMeasure::MI
                            ? mutual_information(codes[f], dataset.labels)
                            : permutation_importance(dataset, f, spec.pfi_repeats, cfg.seed,
                                                     spec.pfi_l2);
    }
    Matrix redundancy(nf, nf);
    for (std::size_t i = 0; i < nf; ++i) {
        for (std::size_t j = i + 1; j < nf; ++j) {
            const double r = spec.redundancy == RedundancyMeasure::CMI
                                 ? conditional_mutual_information(codes[i], codes[j], dataset.labels)
                                 : conditional_permutation_importance(dataset, i, j,
                                                                      spec.pfi_repeats, cfg.seed,
                                                                      spec.pfi_l2);
            redundancy(i, j) = r;
            redundancy(j, i) = r;
        }
    }

    const auto data = feature_data_term(importance, redundancy, spec.blend);
    const double lambda = feature_lambda(data, spec.lambda);
    const auto qubo = compose(data, k_hot_constraint(nf, spec.k, lambda));
    const auto t1 = std::chrono::steady_clock::now();

    const auto set = simulated_anneal(qubo, cfg);
    auto [bits, repaired] = best_feasible(qubo, set, spec.k);

    FeatureReport report;
    report.k = spec.k;
    report.importance_measure = to_string(spec.importance);
    report.redundancy_measure = to_string(spec.redundancy);
    report.energy = energy(qubo, bits);
    report.lambda = lambda;
    report.repaired = repaired;
    report.importance_scores = importance;
    report.redundancy_matrix = redundancy;
    for (std::size_t i = 0; i < nf; ++i) {
        if (bits[i]) report.selected.push_back(i);
    }
    report.build_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    report.solve_ms = set.solve_time_ms;
    return report;
}

}  // namespace quboml
