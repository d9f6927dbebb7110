#ifndef QUBOML_IO_HPP
#define QUBOML_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "quboml/anneal.hpp"
#include "quboml/dataset.hpp"
#include "quboml/qubo.hpp"

namespace quboml {

inline constexpr const char* kToolkitVersion = "quboml 0.1.0";

// LETOR/SVMlight ranking lines: `<rel> qid:<id> <fid>:<val> ... # comment`.
// Feature ids are 1-based in the file, 0-based in the returned dataset;
// missing ids densify to 0.0.
RankingDataset parse_letor(const std::string& path);

// JSONL, one record per line:
//   {"id": str, "vector": [floats], "label": 0|1, "relevant_ids": [str]}
// label and relevant_ids are optional; dimensions must be uniform and all
// values finite.
EmbeddingCorpus parse_embeddings(const std::string& path);

// Problem wire format: {"n", "linear": [...], "quadratic": [[i,j,v],...], "offset"}.
BinaryQuadraticProblem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const BinaryQuadraticProblem& p);
BinaryQuadraticProblem load_problem(const std::string& path);

nlohmann::json sampleset_to_json(const SampleSet& set);

// 64-bit FNV-1a over the raw bytes of a file, as a hex string.
std::string fnv1a_file_digest(const std::string& path);

struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> input_digests;  // (path, digest)
    std::vector<std::string> deviations;
    double build_ms = 0.0;
    double solve_ms = 0.0;
    double eval_ms = 0.0;

    nlohmann::json to_json() const;
};

// Pretty-printed with sorted keys for diffability.
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace quboml

#endif
