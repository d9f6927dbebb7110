#include "quboml/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "quboml/clustering.hpp"
#include "quboml/errors.hpp"
#include "quboml/feature_selection.hpp"
#include "quboml/instance_selection.hpp"
#include "quboml/io.hpp"
#include "quboml/linear_models.hpp"
#include "quboml/metrics.hpp"
#include "quboml/rng.hpp"

namespace quboml {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct CommonOpts {
    int reads = 100;
    int sweeps = 1000;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out_dir = ".";

    AnnealConfig anneal() const {
        AnnealConfig cfg;
        cfg.reads = reads;
        cfg.sweeps = sweeps;
        cfg.seed = seed;
        cfg.threads = threads;
        return cfg;
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--reads", opts.reads, "Anneal restarts per solve");
    cmd->add_option("--sweeps", opts.sweeps, "Metropolis sweeps per read");
    cmd->add_option("--seed", opts.seed, "Master seed; all randomness derives from it");
    cmd->add_option("--threads", opts.threads, "Worker thread cap (0 = auto)");
    cmd->add_option("--out", opts.out_dir, "Output directory");
}

void emit(const CommonOpts& opts, const std::optional<json>& result, const RunManifest& manifest) {
    fs::create_directories(opts.out_dir);
    if (result) write_json((fs::path(opts.out_dir) / "result.json").string(), *result);
    write_json((fs::path(opts.out_dir) / "manifest.json").string(), manifest.to_json());
}

double timed_ms(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

// Held-out nDCG@10 of a ridge ranker restricted to the selected features;
// queries are split 75/25 on the master seed.
double validation_ndcg(const RankingDataset& dataset, const std::vector<std::size_t>& selected,
                       std::uint64_t seed) {
    std::vector<int> qids;
    {
        std::set<int> uniq(dataset.query_ids.begin(), dataset.query_ids.end());
        qids.assign(uniq.begin(), uniq.end());
    }
    std::mt19937_64 rng(derive_seed(seed, "ndcg-split", 0));
    seeded_shuffle(qids, rng);
    const std::size_t n_eval = std::max<std::size_t>(1, qids.size() / 4);
    std::set<int> eval_q(qids.begin(), qids.begin() + static_cast<long>(n_eval));

    std::vector<std::size_t> train_rows, eval_rows;
    for (std::size_t r = 0; r < dataset.rows.rows; ++r) {
        (eval_q.count(dataset.query_ids[r]) ? eval_rows : train_rows).push_back(r);
    }
    if (train_rows.empty() || eval_rows.empty()) return 0.0;

    auto project = [&](const std::vector<std::size_t>& rows) {
        Matrix X(rows.size(), selected.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t c = 0; c < selected.size(); ++c) {
                X(i, c) = dataset.rows(rows[i], selected[c]);
            }
        }
        return X;
    };
    std::vector<double> train_y;
    for (std::size_t r : train_rows) train_y.push_back(static_cast<double>(dataset.labels[r]));
    const auto model = fit_ridge(project(train_rows), train_y, 1e-3);
    const auto scores = predict_linear(model, project(eval_rows));

    std::map<int, std::vector<std::size_t>> by_query;  // positions into eval_rows
    for (std::size_t i = 0; i < eval_rows.size(); ++i) {
        by_query[dataset.query_ids[eval_rows[i]]].push_back(i);
    }
    double acc = 0.0;
    for (const auto& [q, members] : by_query) {
        (void)q;
        auto order = members;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (scores[a] != scores[b]) return scores[a] > scores[b];
            return a < b;
        });
        std::vector<std::string> ranking;
        std::map<std::string, int> rel;
        for (std::size_t i : members) {
            rel[std::to_string(i)] = dataset.labels[eval_rows[i]];
        }
        for (std::size_t i : order) ranking.push_back(std::to_string(i));
        acc += ndcg_at(ranking, rel, 10);
    }
    return acc / static_cast<double>(by_query.size());
}

// First two principal components via power iteration with deflation; used
// only for plot data.
void write_projection(const std::string& path, const EmbeddingCorpus& docs,
                      const std::vector<std::size_t>& assignments) {
    const std::size_t n = docs.size(), d = docs.dim();
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) mean[c] += docs.vectors(r, c);
    }
    for (double& m : mean) m /= static_cast<double>(n);

    auto centered_dot = [&](std::size_t r, const std::vector<double>& v) {
        double s = 0.0;
        for (std::size_t c = 0; c < d; ++c) s += (docs.vectors(r, c) - mean[c]) * v[c];
        return s;
    };
    std::vector<std::vector<double>> comps;
    for (int pc = 0; pc < 2 && static_cast<std::size_t>(pc) < d; ++pc) {
        std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
        v[static_cast<std::size_t>(pc) % d] += 0.5;  // break symmetry deterministically
        for (int it = 0; it < 200; ++it) {
            std::vector<double> next(d, 0.0);
            for (std::size_t r = 0; r < n; ++r) {
                double proj = centered_dot(r, v);
                for (const auto& prev : comps) {
                    double pd = centered_dot(r, prev);
                    proj -= pd * std::inner_product(prev.begin(), prev.end(), v.begin(), 0.0);
                }
                for (std::size_t c = 0; c < d; ++c) {
                    next[c] += proj * (docs.vectors(r, c) - mean[c]);
                }
            }
            double norm = std::sqrt(std::inner_product(next.begin(), next.end(), next.begin(), 0.0));
            if (norm <= 0.0) break;
            for (std::size_t c = 0; c < d; ++c) v[c] = next[c] / norm;
        }
        // Orthogonalize against earlier components.
        for (const auto& prev : comps) {
            const double dp = std::inner_product(prev.begin(), prev.end(), v.begin(), 0.0);
            for (std::size_t c = 0; c < d; ++c) v[c] -= dp * prev[c];
        }
        double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        if (norm > 0.0) {
            for (double& x : v) x /= norm;
        }
        comps.push_back(std::move(v));
    }

    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    out << "id,pc1,pc2,medoid_id\n";
    for (std::size_t r = 0; r < n; ++r) {
        const double x = centered_dot(r, comps[0]);
        const double y = comps.size() > 1 ? centered_dot(r, comps[1]) : 0.0;
        out << docs.ids[r] << "," << x << "," << y << "," << docs.ids[assignments[r]] << "\n";
    }
}

int run_features(const std::string& data_path, const std::string& importance,
                 const std::string& redundancy, std::size_t k, int bins,
                 std::optional<double> lambda, double blend, bool validate,
                 const CommonOpts& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto dataset = parse_letor(data_path);

    FeatureQuboSpec spec;
    if (importance == "mi") spec.importance = ImportanceMeasure::MI;
    else if (importance == "pfi") spec.importance = ImportanceMeasure::PFI;
    else throw DataError("unknown importance measure: " + importance);
    if (redundancy == "cmi") spec.redundancy = RedundancyMeasure::CMI;
    else if (redundancy == "cpfi") spec.redundancy = RedundancyMeasure::CPFI;
    else throw DataError("unknown redundancy measure: " + redundancy);
    spec.k = k;
    spec.bins = bins;
    spec.lambda = lambda;
    spec.blend = blend;

    const auto report = select_features(dataset, spec, opts.anneal());

    json result;
    result["selected"] = report.selected;
    result["feature_id_base"] = 0;  // LETOR ids are 1-based in the input file
    result["k"] = report.k;
    result["method"] = report.importance_measure + "+" + report.redundancy_measure;
    result["energy"] = report.energy;
    result["lambda"] = report.lambda;
    result["repaired"] = report.repaired;
    const auto t_eval = std::chrono::steady_clock::now();
    if (validate) {
        result["ndcg10_validation"] = validation_ndcg(dataset, report.selected, opts.seed);
    }

    RunManifest manifest;
    manifest.command = "features";
    manifest.config = {{"data", data_path}, {"importance", importance},
                       {"redundancy", redundancy}, {"k", k}, {"bins", bins},
                       {"blend", blend}, {"reads", opts.reads}, {"sweeps", opts.sweeps},
                       {"validate", validate}};
    if (lambda) manifest.config["lambda"] = *lambda;
    manifest.seed = opts.seed;
    manifest.input_digests = {{data_path, fnv1a_file_digest(data_path)}};
    if (spec.importance == ImportanceMeasure::PFI || spec.redundancy == RedundancyMeasure::CPFI) {
        manifest.deviations.push_back("ridge ranker substituted for gradient-boosted models");
    }
    manifest.build_ms = report.build_ms;
    manifest.solve_ms = report.solve_ms;
    manifest.eval_ms = timed_ms(t_eval);
    (void)t0;
    emit(opts, result, manifest);
    return 0;
}

int run_instances(const std::string& data_path, const std::string& method, double retain,
                  std::size_t batch_size, std::optional<double> penalty, bool no_repair,
                  const CommonOpts& opts) {
    const auto corpus = parse_embeddings(data_path);
    if (!corpus.has_labels) {
        throw DataError("instance selection methods require labeled records; '" + data_path +
                        "' has no labels");
    }
    InstanceSpec spec;
    spec.method = instance_method_from_string(method);
    spec.retain_fraction = retain;
    spec.batch_size = batch_size;
    spec.penalty = penalty;
    spec.repair = !no_repair;

    const auto report = select_instances(corpus, spec, opts.anneal());

    json per_batch = json::array();
    for (const auto& b : report.per_batch) {
        per_batch.push_back({{"k_b", b.k_b}, {"energy", b.energy}, {"repaired", b.repaired}});
    }
    json result;
    result["kept_ids"] = report.kept_ids;
    result["target_fraction"] = report.target_fraction;
    result["achieved_fraction"] = report.achieved_fraction;
    result["method"] = report.method;
    result["per_batch"] = std::move(per_batch);

    RunManifest manifest;
    manifest.command = "instances";
    manifest.config = {{"data", data_path}, {"method", method}, {"retain", retain},
                       {"batch_size", batch_size}, {"repair", !no_repair},
                       {"reads", opts.reads}, {"sweeps", opts.sweeps}};
    if (penalty) manifest.config["penalty"] = *penalty;
    manifest.seed = opts.seed;
    manifest.input_digests = {{data_path, fnv1a_file_digest(data_path)}};
    if (spec.method == InstanceMethod::svc) {
        manifest.deviations.push_back("linear margin classifier substituted for rbf SVC");
    }
    manifest.build_ms = report.build_ms;
    manifest.solve_ms = report.solve_ms;
    emit(opts, result, manifest);
    return 0;
}

int run_cluster(const std::string& docs_path, const std::string& queries_path, std::size_t k,
                std::size_t auto_k_min, std::size_t auto_k_max, const std::string& projection,
                const CommonOpts& opts) {
    const auto docs = parse_embeddings(docs_path);
    std::optional<EmbeddingCorpus> queries;
    if (!queries_path.empty()) queries = parse_embeddings(queries_path);

    std::size_t effective_k = k;
    if (auto_k_min > 0) {
        if (auto_k_max < auto_k_min) throw DataError("auto-k range is empty");
        effective_k = auto_k(docs.vectors, auto_k_min, auto_k_max,
                             derive_seed(opts.seed, "auto-k-run", 0));
    }
    if (effective_k == 0) throw DataError("cluster: provide --k or an --auto-k range");

    const auto t0 = std::chrono::steady_clock::now();
    const auto out = cluster_pipeline(docs, queries ? &*queries : nullptr, effective_k,
                                      opts.anneal());
    const double total_ms = timed_ms(t0);

    json assignments = json::object();
    for (std::size_t i = 0; i < out.result.assignments.size(); ++i) {
        assignments[docs.ids[i]] = docs.ids[out.result.assignments[i]];
    }
    json medoid_ids = json::array();
    for (std::size_t m : out.result.medoids) medoid_ids.push_back(docs.ids[m]);
    json result;
    result["medoid_ids"] = std::move(medoid_ids);
    result["k"] = effective_k;
    result["dbi"] = out.result.dbi;
    result["feasible"] = out.result.feasible;
    if (out.ndcg10_mean >= 0.0) result["ndcg10_mean"] = out.ndcg10_mean;
    else result["ndcg10_mean"] = nullptr;
    result["assignments"] = std::move(assignments);

    if (!projection.empty()) {
        fs::create_directories(opts.out_dir);
        write_projection((fs::path(opts.out_dir) / projection).string(), docs,
                         out.result.assignments);
    }

    RunManifest manifest;
    manifest.command = "cluster";
    manifest.config = {{"docs", docs_path}, {"queries", queries_path}, {"k", k},
                       {"auto_k_min", auto_k_min}, {"auto_k_max", auto_k_max},
                       {"effective_k", effective_k}, {"reads", opts.reads},
                       {"sweeps", opts.sweeps}};
    manifest.seed = opts.seed;
    manifest.input_digests = {{docs_path, fnv1a_file_digest(docs_path)}};
    if (!queries_path.empty()) {
        manifest.input_digests.emplace_back(queries_path, fnv1a_file_digest(queries_path));
    }
    manifest.solve_ms = out.solve_ms;
    manifest.build_ms = total_ms - out.solve_ms;
    emit(opts, result, manifest);
    return 0;
}

int run_sweep(const std::string& data_path, const std::string& fractions_csv, int folds,
              std::size_t batch_size, const CommonOpts& opts) {
    const auto corpus = parse_embeddings(data_path);
    std::vector<double> fractions;
    {
        std::stringstream ss(fractions_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) fractions.push_back(std::stod(tok));
        }
    }
    if (fractions.empty()) throw DataError("sweep: no fractions given");

    InstanceSpec spec;
    spec.batch_size = batch_size;
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = reduction_sweep(corpus, spec, fractions, folds, opts.anneal());

    fs::create_directories(opts.out_dir);
    const auto csv_path = (fs::path(opts.out_dir) / "sweep.csv").string();
    {
        std::ofstream out(csv_path);
        if (!out) throw DataError("cannot open output file: " + csv_path);
        out << "fraction,method,f1_mean,f1_std\n";
        for (const auto& r : rows) {
            out << r.fraction << "," << r.method << "," << r.f1_mean << "," << r.f1_std << "\n";
        }
    }

    RunManifest manifest;
    manifest.command = "sweep";
    manifest.config = {{"data", data_path}, {"fractions", fractions}, {"folds", folds},
                       {"batch_size", batch_size}, {"reads", opts.reads},
                       {"sweeps", opts.sweeps}};
    manifest.seed = opts.seed;
    manifest.input_digests = {{data_path, fnv1a_file_digest(data_path)}};
    manifest.deviations.push_back("linear margin classifier substituted for rbf SVC");
    manifest.build_ms = timed_ms(t0);
    emit(opts, std::nullopt, manifest);
    return 0;
}

int run_solve(const std::string& problem_path, const CommonOpts& opts) {
    const auto problem = load_problem(problem_path);
    const auto set = simulated_anneal(problem, opts.anneal());

    RunManifest manifest;
    manifest.command = "solve";
    manifest.config = {{"problem", problem_path}, {"reads", opts.reads},
                       {"sweeps", opts.sweeps}};
    manifest.seed = opts.seed;
    manifest.input_digests = {{problem_path, fnv1a_file_digest(problem_path)}};
    manifest.solve_ms = set.solve_time_ms;
    emit(opts, sampleset_to_json(set), manifest);
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"QUBO toolkit for feature selection, instance selection, and medoid clustering"};
    app.require_subcommand(1);

    // features
    auto* features = app.add_subcommand("features", "Select k features via a QUBO");
    std::string f_data, f_importance = "mi", f_redundancy = "cmi";
    std::size_t f_k = 10;
    int f_bins = 10;
    double f_blend = 1.0;
    double f_lambda = -1.0;
    bool f_validate = false;
    CommonOpts f_opts;
    features->add_option("--data", f_data, "LETOR/SVMlight ranking file")->required();
    features->add_option("--importance", f_importance, "mi or pfi");
    features->add_option("--redundancy", f_redundancy, "cmi or cpfi");
    features->add_option("--k", f_k, "Number of features to select")->required();
    features->add_option("--bins", f_bins, "Discretization bins for MI/CMI");
    features->add_option("--lambda", f_lambda, "Constraint penalty (auto if unset)");
    features->add_option("--blend", f_blend, "Redundancy weight relative to importance");
    features->add_flag("--validate", f_validate, "Report held-out nDCG@10 of the selection");
    add_common(features, f_opts);

    // instances
    auto* instances = app.add_subcommand("instances", "Select training instances via batched QUBOs");
    std::string i_data, i_method = "bcos";
    double i_retain = 0.75;
    std::size_t i_batch = 80;
    double i_penalty = -1.0;
    bool i_no_repair = false;
    CommonOpts i_opts;
    instances->add_option("--data", i_data, "JSONL embedding corpus")->required();
    instances->add_option("--method", i_method, "bcos, svc, or instance_deletion");
    instances->add_option("--retain", i_retain, "Fraction of instances to keep");
    instances->add_option("--batch-size", i_batch, "Batch size per QUBO");
    instances->add_option("--penalty", i_penalty, "Constraint penalty (auto if unset)");
    instances->add_flag("--no-repair", i_no_repair, "Report infeasible samples as-is");
    add_common(instances, i_opts);

    // cluster
    auto* cluster = app.add_subcommand("cluster", "Two-stage medoid clustering pipeline");
    std::string c_docs, c_queries, c_projection;
    std::size_t c_k = 0, c_auto_min = 0, c_auto_max = 0;
    CommonOpts c_opts;
    cluster->add_option("--docs", c_docs, "JSONL document embeddings")->required();
    cluster->add_option("--queries", c_queries, "JSONL query embeddings with relevant_ids");
    cluster->add_option("--k", c_k, "Number of medoids");
    cluster->add_option("--auto-k-min", c_auto_min, "Lower bound for automatic k selection");
    cluster->add_option("--auto-k-max", c_auto_max, "Upper bound for automatic k selection");
    cluster->add_option("--projection", c_projection, "Write a 2-D PCA projection CSV (plot data)");
    add_common(cluster, c_opts);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Reduction-level sweep with downstream F1");
    std::string s_data, s_fractions = "0.25,0.5,0.75,1.0";
    int s_folds = 3;
    std::size_t s_batch = 80;
    CommonOpts s_opts;
    sweep->add_option("--data", s_data, "JSONL embedding corpus")->required();
    sweep->add_option("--fractions", s_fractions, "Comma-separated retain fractions");
    sweep->add_option("--folds", s_folds, "Evaluation folds");
    sweep->add_option("--batch-size", s_batch, "Batch size per QUBO");
    add_common(sweep, s_opts);

    // solve
    auto* solve = app.add_subcommand("solve", "Anneal a problem JSON directly");
    std::string p_path;
    CommonOpts p_opts;
    solve->add_option("--problem", p_path, "Problem JSON file")->required();
    add_common(solve, p_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (features->parsed()) {
            return run_features(f_data, f_importance, f_redundancy, f_k, f_bins,
                                f_lambda >= 0.0 ? std::optional<double>(f_lambda) : std::nullopt,
                                f_blend, f_validate, f_opts);
        }
        if (instances->parsed()) {
            return run_instances(i_data, i_method, i_retain, i_batch,
                                 i_penalty >= 0.0 ? std::optional<double>(i_penalty) : std::nullopt,
                                 i_no_repair, i_opts);
        }
        if (cluster->parsed()) {
            return run_cluster(c_docs, c_queries, c_k, c_auto_min, c_auto_max, c_projection,
                               c_opts);
        }
        if (sweep->parsed()) return run_sweep(s_data, s_fractions, s_folds, s_batch, s_opts);
        if (solve->parsed()) return run_solve(p_path, p_opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace quboml
