#include "quboml/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "quboml/errors.hpp"
#include "quboml/instance_selection.hpp"  // cosine
#include "quboml/metrics.hpp"
#include "quboml/rng.hpp"

namespace quboml {

Matrix euclidean_sq_distances(const Matrix& points) {
    const std::size_t n = points.rows;
    Matrix D(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            const double* a = points.row(i);
            const double* b = points.row(j);
            for (std::size_t c = 0; c < points.cols; ++c) {
                const double d = a[c] - b[c];
                s += d * d;
            }
            D(i, j) = s;
            D(j, i) = s;
        }
    }
    return D;
}

namespace {

Matrix euclidean_distances(const Matrix& points) {
    Matrix D = euclidean_sq_distances(points);
    for (double& v : D.data) v = std::sqrt(v);
    return D;
}

double total_cost(const Matrix& D, const std::vector<std::size_t>& medoids) {
    double cost = 0.0;
    for (std::size_t i = 0; i < D.rows; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m : medoids) best = std::min(best, D(i, m));
        cost += best;
    }
    return cost;
}

}  // namespace

std::vector<std::size_t> kmedoids(const Matrix& points, std::size_t k,
                                  std::uint64_t seed, int max_iter) {
    (void)seed;  // seeding is deterministic; kept for interface stability
    const std::size_t n = points.rows;
    if (k > n) throw InvalidArgument("kmedoids: k exceeds point count");
    if (k == 0) throw InvalidArgument("kmedoids: k must be positive");
    std::vector<std::size_t> medoids;
    if (k == n) {
        medoids.resize(n);
        std::iota(medoids.begin(), medoids.end(), 0);
        return medoids;
    }
    const Matrix D = euclidean_distances(points);

    // Greedy seeding: total-distance minimizer first, then farthest-point.
    std::size_t first = 0;
    double best_total = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += D(i, j);
        if (s < best_total) {
            best_total = s;
            first = i;
        }
    }
    medoids.push_back(first);
    std::vector<double> nearest(n);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = D(i, first);
    while (medoids.size() < k) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (nearest[i] > far_d) {
                far_d = nearest[i];
                far = i;
            }
        }
        medoids.push_back(far);
        for (std::size_t i = 0; i < n; ++i) nearest[i] = std::min(nearest[i], D(i, far));
    }

    // Swap phase: apply the best improving (medoid, candidate) exchange.
    double cost = total_cost(D, medoids);
    for (int iter = 0; iter < max_iter; ++iter) {
        double best_cost = cost;
        std::size_t best_slot = 0, best_cand = 0;
        bool improved = false;
        std::vector<bool> is_medoid(n, false);
        for (std::size_t m : medoids) is_medoid[m] = true;
        for (std::size_t slot = 0; slot < medoids.size(); ++slot) {
            const std::size_t old = medoids[slot];
            for (std::size_t cand = 0; cand < n; ++cand) {
                if (is_medoid[cand]) continue;
                medoids[slot] = cand;
                const double c = total_cost(D, medoids);
                if (c < best_cost - 1e-12) {
                    best_cost = c;
                    best_slot = slot;
                    best_cand = cand;
                    improved = true;
                }
            }
            medoids[slot] = old;
        }
        if (!improved) break;
        medoids[best_slot] = best_cand;
        cost = best_cost;
    }
    std::sort(medoids.begin(), medoids.end());
    return medoids;
}

double silhouette(const Matrix& points, const std::vector<std::size_t>& assignments) {
    const std::size_t n = points.rows;
    if (assignments.size() != n) throw InvalidArgument("silhouette: assignment length mismatch");
    const Matrix D = euclidean_distances(points);
    std::map<std::size_t, std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) clusters[assignments[i]].push_back(i);
    if (clusters.size() < 2) throw InvalidArgument("silhouette needs at least 2 clusters");

    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& own = clusters[assignments[i]];
        if (own.size() == 1) continue;  // convention: s = 0 for singletons
        double a = 0.0;
        for (std::size_t j : own) {
            if (j != i) a += D(i, j);
        }
        a /= static_cast<double>(own.size() - 1);
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [cid, members] : clusters) {
            if (cid == assignments[i]) continue;
            double m = 0.0;
            for (std::size_t j : members) m += D(i, j);
            b = std::min(b, m / static_cast<double>(members.size()));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) acc += (b - a) / denom;
    }
    return acc / static_cast<double>(n);
}

std::size_t auto_k(const Matrix& points, std::size_t k_min, std::size_t k_max,
                   std::uint64_t seed) {
    if (k_min < 2 || k_max + 1 > points.rows || k_min > k_max) {
        throw InvalidArgument("auto_k: range must satisfy 2 <= k_min <= k_max <= n-1");
    }
    struct Entry {
        std::size_t k;
        double sil;
        double dbi;
    };
    std::vector<Entry> entries;
    double dbi_max = 0.0;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        const auto medoids = kmedoids(points, k, derive_seed(seed, "auto-k", k));
        const auto assignments = assign_to_medoids(points, medoids);
        entries.push_back({k, silhouette(points, assignments),
                           davies_bouldin(points, assignments)});
        dbi_max = std::max(dbi_max, entries.back().dbi);
    }
    std::size_t best_k = k_min;
    double best_score = -std::numeric_limits<double>::infinity();
    for (const auto& e : entries) {
        const double score = e.sil - (dbi_max > 0.0 ? e.dbi / dbi_max : 0.0);
        if (score > best_score) {  // strict: ties keep the smaller k
            best_score = score;
            best_k = e.k;
        }
    }
    return best_k;
}

Matrix welsch_dissimilarity(const Matrix& D) {
    if (D.rows != D.cols) throw InvalidArgument("welsch: matrix must be square");
    Matrix out(D.rows, D.cols);
    for (std::size_t i = 0; i < D.rows; ++i) {
        if (D(i, i) != 0.0) throw InvalidArgument("welsch: diagonal must be zero");
        for (std::size_t j = 0; j < D.cols; ++j) {
            if (D(i, j) < 0.0) throw InvalidArgument("welsch: negative squared distance");
            if (std::abs(D(i, j) - D(j, i)) > 1e-9) {
                throw InvalidArgument("welsch: matrix must be symmetric");
            }
            out(i, j) = 1.0 - std::exp(-0.5 * D(i, j));
        }
    }
    return out;
}

BinaryQuadraticProblem build_medoid_objective(const Matrix& delta, std::size_t k) {
    const std::size_t n = delta.rows;
    if (k < 1 || k > n) throw InvalidArgument("medoid objective: need 1 <= k <= n");
    const double alpha = 1.0 / static_cast<double>(k);
    const double beta = 1.0 / static_cast<double>(n);
    const double gamma = 2.0;

    BinaryQuadraticProblem p(n);
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) row_sum += delta(i, j);
        // Diagonal of the quadratic form folds into the linear term
        // (x_i^2 = x_i): M_ii = gamma, plus the linear part.
        p.set_linear(i, gamma + beta * row_sum - 2.0 * gamma * static_cast<double>(k));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // M_ij + M_ji for the symmetric form.
            p.add_quadratic(i, j, 2.0 * (gamma - 0.5 * alpha * delta(i, j)));
        }
    }
    return p;
}

BinaryQuadraticProblem build_medoid_qubo(const Matrix& delta, std::size_t k) {
    const auto objective = build_medoid_objective(delta, k);
    double strength = 2.0 * energy_delta_bound(objective);
    if (strength <= 0.0) strength = 1.0;
    return compose(objective, k_hot_constraint(delta.rows, k, strength));
}

RefinedMedoids refine_medoids(const Matrix& points, const MedoidCandidates& candidates,
                              std::size_t k, const AnnealConfig& cfg) {
    const std::size_t m = candidates.indices.size();
    if (m < k) throw InvalidArgument("refine_medoids: fewer candidates than k");
    Matrix cand_points(m, points.cols);
    for (std::size_t i = 0; i < m; ++i) {
        std::copy_n(points.row(candidates.indices[i]), points.cols, cand_points.row(i));
    }
    Matrix D = euclidean_sq_distances(cand_points);

    // Scale by the median pairwise squared distance so the Welsch transform
    // stays informative regardless of raw embedding scale.
    std::vector<double> offdiag;
    offdiag.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) offdiag.push_back(D(i, j));
    }
    if (!offdiag.empty()) {
        const std::size_t mid = offdiag.size() / 2;
        std::nth_element(offdiag.begin(), offdiag.begin() + static_cast<long>(mid), offdiag.end());
        const double median = offdiag[mid];
        if (median > 0.0) {
            for (double& v : D.data) v /= median;
        }
    }

    const auto delta = welsch_dissimilarity(D);
    const auto qubo = build_medoid_qubo(delta, k);
    const auto set = simulated_anneal(qubo, cfg);
    auto [bits, repaired] = best_feasible(qubo, set, k);

    RefinedMedoids out;
    out.feasible = !repaired;
    out.energy = energy(qubo, bits);
    out.solve_ms = set.solve_time_ms;
    for (std::size_t i = 0; i < m; ++i) {
        if (bits[i]) out.indices.push_back(candidates.indices[i]);
    }
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

std::vector<std::size_t> assign_to_medoids(const Matrix& points,
                                           const std::vector<std::size_t>& medoid_indices) {
    if (medoid_indices.empty()) throw InvalidArgument("assign_to_medoids: no medoids");
    std::vector<std::size_t> medoids = medoid_indices;
    std::sort(medoids.begin(), medoids.end());
    std::vector<std::size_t> assignments(points.rows);
    for (std::size_t i = 0; i < points.rows; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_m = medoids.front();
        for (std::size_t m : medoids) {
            double s = 0.0;
            for (std::size_t c = 0; c < points.cols; ++c) {
                const double d = points(i, c) - points(m, c);
                s += d * d;
            }
            if (s < best) {  // strict: ties keep the lowest medoid index
                best = s;
                best_m = m;
            }
        }
        assignments[i] = best_m;
    }
    return assignments;
}

double davies_bouldin(const Matrix& points, const std::vector<std::size_t>& assignments) {
    if (assignments.size() != points.rows) {
        throw InvalidArgument("davies_bouldin: assignment length mismatch");
    }
    std::map<std::size_t, std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < points.rows; ++i) clusters[assignments[i]].push_back(i);
    if (clusters.size() < 2) throw InvalidArgument("davies_bouldin needs at least 2 clusters");

    const std::size_t nc = clusters.size();
    Matrix centroids(nc, points.cols);
    std::vector<double> scatter(nc, 0.0);
    std::size_t ci = 0;
    for (const auto& [cid, members] : clusters) {
        (void)cid;
        for (std::size_t i : members) {
            for (std::size_t c = 0; c < points.cols; ++c) centroids(ci, c) += points(i, c);
        }
        for (std::size_t c = 0; c < points.cols; ++c) {
            centroids(ci, c) /= static_cast<double>(members.size());
        }
        for (std::size_t i : members) {
            double s = 0.0;
            for (std::size_t c = 0; c < points.cols; ++c) {
                const double d = points(i, c) - centroids(ci, c);
                s += d * d;
            }
            scatter[ci] += std::sqrt(s);
        }
        scatter[ci] /= static_cast<double>(members.size());
        ++ci;
    }

    double dbi = 0.0;
    for (std::size_t i = 0; i < nc; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < nc; ++j) {
            if (j == i) continue;
            double s = 0.0;
            for (std::size_t c = 0; c < points.cols; ++c) {
                const double d = centroids(i, c) - centroids(j, c);
                s += d * d;
            }
            const double sep = std::sqrt(s);
            if (sep <= 0.0) {
                throw InvalidArgument("davies_bouldin: coincident centroids, separation undefined");
            }
            worst = std::max(worst, (scatter[i] + scatter[j]) / sep);
        }
        dbi += worst;
    }
    return dbi / static_cast<double>(nc);
}

std::vector<std::vector<std::size_t>> retrieve(const Matrix& queries, const Matrix& docs,
                                               const ClusteringResult& result,
                                               std::size_t depth) {
    if (queries.cols != docs.cols) throw InvalidArgument("retrieve: dimension mismatch");
    // Cluster membership by medoid corpus index.
    std::map<std::size_t, std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < result.assignments.size(); ++i) {
        clusters[result.assignments[i]].push_back(i);
    }
    std::vector<std::vector<std::size_t>> out(queries.rows);
    for (std::size_t q = 0; q < queries.rows; ++q) {
        std::size_t best_medoid = result.medoids.front();
        double best_sim = -std::numeric_limits<double>::infinity();
        for (std::size_t m : result.medoids) {
            const double sim = cosine(queries.row(q), docs.row(m), docs.cols);
            if (sim > best_sim) {
                best_sim = sim;
                best_medoid = m;
            }
        }
        auto members = clusters[best_medoid];
        std::vector<double> sims(members.size());
        for (std::size_t i = 0; i < members.size(); ++i) {
            sims[i] = cosine(queries.row(q), docs.row(members[i]), docs.cols);
        }
        std::vector<std::size_t> order(members.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (sims[a] != sims[b]) return sims[a] > sims[b];
            return members[a] < members[b];
        });
        const std::size_t top = std::min(depth, order.size());
        for (std::size_t i = 0; i < top; ++i) out[q].push_back(members[order[i]]);
    }
    return out;
}

PipelineOutput cluster_pipeline(const EmbeddingCorpus& docs, const EmbeddingCorpus* queries,
                                std::size_t k, const AnnealConfig& cfg) {
    const std::size_t n = docs.size();
    if (k < 1 || k > n) throw InvalidArgument("cluster pipeline: need 1 <= k <= n");
    std::size_t source_k = std::min(4 * k, n / 2);
    source_k = std::max(source_k, k);
    source_k = std::min(source_k, n);

    PipelineOutput out;
    out.candidates.indices = kmedoids(docs.vectors, source_k, derive_seed(cfg.seed, "classical", 0));
    out.candidates.source_k = source_k;

    const auto refined = refine_medoids(docs.vectors, out.candidates, k, cfg);
    out.result.medoids = refined.indices;
    out.result.feasible = refined.feasible;
    out.result.assignments = assign_to_medoids(docs.vectors, refined.indices);
    out.result.dbi = k >= 2 ? davies_bouldin(docs.vectors, out.result.assignments) : 0.0;
    out.solve_ms = refined.solve_ms;

    if (queries && queries->size() > 0) {
        const auto rankings = retrieve(queries->vectors, docs.vectors, out.result, 10);
        double acc = 0.0;
        for (std::size_t q = 0; q < rankings.size(); ++q) {
            std::map<std::string, int> rel;
            for (const auto& id : queries->relevant_ids[q]) rel[id] = 1;
            std::vector<std::string> ids;
            for (std::size_t d : rankings[q]) ids.push_back(docs.ids[d]);
            acc += ndcg_at(ids, rel, 10);
        }
        out.ndcg10_mean = acc / static_cast<double>(rankings.size());
    }
    return out;
}

}  // namespace quboml
