#include "quboml/instance_selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "quboml/errors.hpp"
#include "quboml/linear_models.hpp"
#include "quboml/metrics.hpp"
#include "quboml/rng.hpp"

namespace quboml {

std::string to_string(InstanceMethod m) {
    switch (m) {
        case InstanceMethod::bcos: return "bcos";
        case InstanceMethod::svc: return "svc";
        case InstanceMethod::instance_deletion: return "instance_deletion";
    }
    return "bcos";
}

InstanceMethod instance_method_from_string(const std::string& s) {
    if (s == "bcos") return InstanceMethod::bcos;
    if (s == "svc") return InstanceMethod::svc;
    if (s == "instance_deletion") return InstanceMethod::instance_deletion;
    throw InvalidArgument("unknown instance method: " + s);
}

double cosine(const double* a, const double* b, std::size_t d) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) throw InvalidArgument("cosine of a zero vector is undefined");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw InvalidArgument("cosine: dimension mismatch");
    return cosine(a.data(), b.data(), a.size());
}

namespace {

void require_labels(const EmbeddingCorpus& c, const char* who) {
    if (!c.has_labels) {
        throw DataError(std::string(who) + " requires labeled records, but the corpus has no labels");
    }
}

void require_both_classes(const EmbeddingCorpus& c, const char* who) {
    require_labels(c, who);
    bool pos = false, neg = false;
    for (int v : c.labels) (v ? pos : neg) = true;
    if (!pos || !neg) {
        throw DataError(std::string(who) + " requires both classes to be present");
    }
}

std::vector<double> minmax_negate(std::vector<double> raw) {
    const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo;
    for (double& v : raw) v = span > 0.0 ? -(v - lo) / span : 0.0;
    return raw;
}

}  // namespace

Matrix bcos_offdiagonals(const EmbeddingCorpus& batch) {
    if (batch.size() < 2) throw InvalidArgument("bcos needs a batch of at least 2 records");
    require_labels(batch, "bcos");
    const std::size_t n = batch.size();
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double c = cosine(batch.vectors.row(i), batch.vectors.row(j), batch.dim());
            const double v = batch.labels[i] == batch.labels[j] ? c : -c;
            m(i, j) = v;
            m(j, i) = v;
        }
    }
    return m;
}

std::vector<double> svc_diagonals(const EmbeddingCorpus& fold,
                                  const std::vector<std::size_t>& batch_indices) {
    require_both_classes(fold, "svc diagonals");
    const auto model = fit_linear_margin(fold.vectors, fold.labels, 1.0, 500, 0);
    std::vector<double> raw(batch_indices.size());
    for (std::size_t b = 0; b < batch_indices.size(); ++b) {
        const double d = margin_distance(model, fold.vectors.row(batch_indices[b]), fold.dim());
        raw[b] = 1.0 / (d + 1e-12);
    }
    return minmax_negate(std::move(raw));
}

std::vector<double> deletion_influence_diagonals(const EmbeddingCorpus& batch,
                                                 std::uint64_t seed) {
    const std::size_t n = batch.size();
    if (n < 3) throw InvalidArgument("deletion influence needs a batch of at least 3 records");
    require_both_classes(batch, "deletion influence");

    const auto baseline = fit_logistic(batch.vectors, batch.labels, 1e-3, 2000, seed);
    const auto yhat = predict_proba(baseline, batch.vectors);

    std::vector<double> influence(n, 0.0);
    std::vector<bool> degenerate(n, false);
    Matrix reduced(n - 1, batch.dim());
    std::vector<int> reduced_y(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        bool pos = false, neg = false;
        std::size_t w = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == i) continue;
            std::copy_n(batch.vectors.row(r), batch.dim(), reduced.row(w));
            reduced_y[w++] = batch.labels[r];
            (batch.labels[r] ? pos : neg) = true;
        }
        if (!pos || !neg) {
            // Deleting i breaks the model entirely; treat i as maximally
            // influential within this batch.
            degenerate[i] = true;
            continue;
        }
        const auto refit = fit_logistic(reduced, reduced_y, 1e-3, 2000, seed);
        const auto yref = predict_proba(refit, batch.vectors);
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += std::abs(yhat[k] - yref[k]);
        influence[i] = s / static_cast<double>(n);
    }
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!degenerate[i]) mx = std::max(mx, influence[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (degenerate[i]) influence[i] = mx;
    }
    return minmax_negate(std::move(influence));
}

std::vector<IndexRange> batch_partition(std::size_t n, std::size_t batch_size) {
    if (n < 1) throw InvalidArgument("batch_partition: empty corpus");
    if (batch_size < 2) throw InvalidArgument("batch_partition: batch size must be >= 2");
    std::vector<IndexRange> out;
    for (std::size_t begin = 0; begin < n; begin += batch_size) {
        out.push_back({begin, std::min(n, begin + batch_size)});
    }
    return out;
}

std::size_t retained_count(double retain_fraction, std::size_t n_b) {
    // std::nearbyint under the default rounding mode is round-half-to-even.
    return static_cast<std::size_t>(
        std::nearbyint(retain_fraction * static_cast<double>(n_b)));
}

BinaryQuadraticProblem build_instance_qubo(const EmbeddingCorpus& batch,
                                           const InstanceSpec& spec,
                                           const std::vector<double>* diagonals) {
    const std::size_t n = batch.size();
    const std::size_t k_b = retained_count(spec.retain_fraction, n);
    if (k_b == 0) throw InvalidArgument("retention target rounds to zero instances");

    const Matrix off = bcos_offdiagonals(batch);
    BinaryQuadraticProblem data(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (off(i, j) != 0.0) data.add_quadratic(i, j, off(i, j));
        }
    }
    if (diagonals) {
        if (diagonals->size() != n) throw InvalidArgument("diagonal vector length mismatch");
        for (std::size_t i = 0; i < n; ++i) data.set_linear(i, (*diagonals)[i]);
    }
    double penalty = spec.penalty ? *spec.penalty : 2.0 * energy_delta_bound(data);
    if (penalty <= 0.0) penalty = 1.0;
    return compose(data, k_hot_constraint(n, k_b, penalty));
}

InstanceReport select_instances(const EmbeddingCorpus& corpus, const InstanceSpec& spec,
                                const AnnealConfig& cfg) {
    if (!(spec.retain_fraction > 0.0 && spec.retain_fraction <= 1.0)) {
        throw InvalidArgument("retain_fraction must be in (0, 1]");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto batches = batch_partition(corpus.size(), spec.batch_size);

    InstanceReport report;
    report.method = to_string(spec.method);
    report.target_fraction = spec.retain_fraction;
    double solve_ms = 0.0;

    for (std::size_t b = 0; b < batches.size(); ++b) {
        const auto& range = batches[b];
        std::vector<std::size_t> idx(range.size());
        std::iota(idx.begin(), idx.end(), range.begin);
        const auto batch = subset(corpus, idx);

        std::vector<double> diag;
        const std::vector<double>* diag_ptr = nullptr;
        if (spec.method == InstanceMethod::svc) {
            diag = svc_diagonals(corpus, idx);
            diag_ptr = &diag;
        } else if (spec.method == InstanceMethod::instance_deletion) {
            diag = deletion_influence_diagonals(batch, derive_seed(cfg.seed, "instance-del", b));
            diag_ptr = &diag;
        }

        const auto qubo = build_instance_qubo(batch, spec, diag_ptr);
        AnnealConfig batch_cfg = cfg;
        batch_cfg.seed = derive_seed(cfg.seed, "instance-batch", b);
        const auto set = simulated_anneal(qubo, batch_cfg);
        solve_ms += set.solve_time_ms;

        const std::size_t k_b = retained_count(spec.retain_fraction, range.size());
        Assignment bits;
        bool repaired = false;
        if (spec.repair) {
            std::tie(bits, repaired) = best_feasible(qubo, set, k_b);
        } else {
            bits = set.best().bits;
        }
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i]) report.kept.push_back(range.begin + i);
        }
        report.per_batch.push_back({k_b, energy(qubo, bits), repaired});
    }

    for (std::size_t i : report.kept) report.kept_ids.push_back(corpus.ids[i]);
    report.achieved_fraction =
        static_cast<double>(report.kept.size()) / static_cast<double>(corpus.size());
    report.solve_ms = solve_ms;
    report.build_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() -
        solve_ms;
    return report;
}

namespace {

double downstream_f1(const EmbeddingCorpus& train, const std::vector<std::size_t>& kept,
                     const EmbeddingCorpus& test, std::uint64_t seed) {
    const auto sub = subset(train, kept);
    const auto model = fit_logistic(sub.vectors, sub.labels, 1e-3, 2000, seed);
    const auto proba = predict_proba(model, test.vectors);
    std::vector<int> preds(proba.size());
    for (std::size_t i = 0; i < proba.size(); ++i) preds[i] = proba[i] >= 0.5 ? 1 : 0;
    return f1(preds, test.labels);
}

}  // namespace

std::vector<SweepRow> reduction_sweep(const EmbeddingCorpus& corpus, const InstanceSpec& spec,
                                      const std::vector<double>& fractions, int eval_folds,
                                      const AnnealConfig& cfg) {
    require_both_classes(corpus, "reduction sweep");
    for (double f : fractions) {
        if (!(f > 0.0 && f <= 1.0)) throw InvalidArgument("sweep fractions must lie in (0, 1]");
    }
    const auto plan = make_folds(corpus.size(), eval_folds, cfg.seed);
    const std::vector<std::string> methods = {"random", "bcos", "svc", "instance_deletion"};

    std::vector<SweepRow> rows;
    for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
        const double fraction = fractions[fi];
        for (const auto& method : methods) {
            std::vector<double> scores;
            for (int fold = 0; fold < eval_folds; ++fold) {
                const auto train_idx = plan.indices_not_in(fold);
                const auto test_idx = plan.indices_in(fold);
                const auto train = subset(corpus, train_idx);
                const auto test = subset(corpus, test_idx);

                std::vector<std::size_t> kept;
                if (method == "random") {
                    std::vector<std::size_t> order(train.size());
                    std::iota(order.begin(), order.end(), 0);
                    std::mt19937_64 rng(derive_seed(
                        cfg.seed, "random-drop",
                        fi * static_cast<std::size_t>(eval_folds) + static_cast<std::size_t>(fold)));
                    seeded_shuffle(order, rng);
                    const std::size_t keep_n = retained_count(fraction, train.size());
                    kept.assign(order.begin(), order.begin() + static_cast<long>(keep_n));
                    std::sort(kept.begin(), kept.end());
                } else {
                    InstanceSpec run = spec;
                    run.method = instance_method_from_string(method);
                    run.retain_fraction = fraction;
                    AnnealConfig run_cfg = cfg;
                    run_cfg.seed = derive_seed(cfg.seed, "sweep-" + method,
                                               fi * static_cast<std::size_t>(eval_folds) +
                                                   static_cast<std::size_t>(fold));
                    kept = select_instances(train, run, run_cfg).kept;
                }
                scores.push_back(downstream_f1(train, kept, test,
                                               derive_seed(cfg.seed, "sweep-eval", fold)));
            }
            double mean = std::accumulate(scores.begin(), scores.end(), 0.0) /
                          static_cast<double>(scores.size());
            double var = 0.0;
            for (double s : scores) var += (s - mean) * (s - mean);
            var /= static_cast<double>(scores.size());
            rows.push_back({fraction, method, mean, std::sqrt(var)});
        }
    }
    return rows;
}

}  // namespace quboml
