#include "quboml/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "quboml/errors.hpp"

namespace quboml {

using nlohmann::json;

EmbeddingCorpus subset(const EmbeddingCorpus& c, const std::vector<std::size_t>& indices) {
    EmbeddingCorpus out;
    out.has_labels = c.has_labels;
    out.vectors = Matrix(indices.size(), c.dim());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const std::size_t src = indices[i];
        out.ids.push_back(c.ids[src]);
        std::copy_n(c.vectors.row(src), c.dim(), out.vectors.row(i));
        if (c.has_labels) out.labels.push_back(c.labels[src]);
        if (!c.relevant_ids.empty()) out.relevant_ids.push_back(c.relevant_ids[src]);
    }
    return out;
}

namespace {
std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file: " + path);
    return in;
}
}  // namespace

RankingDataset parse_letor(const std::string& path) {
    auto in = open_input(path);
    std::vector<int> labels, query_ids;
    std::vector<std::vector<std::pair<std::size_t, double>>> sparse_rows;
    std::size_t width = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ss(line);
        int rel;
        if (!(ss >> rel)) continue;  // blank or comment-only line
        std::string tok;
        if (!(ss >> tok) || tok.rfind("qid:", 0) != 0) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected qid:<id>");
        }
        int qid;
        try {
            qid = std::stoi(tok.substr(4));
        } catch (const std::exception&) {
            throw DataError(path + ":" + std::to_string(line_no) + ": malformed qid");
        }
        std::vector<std::pair<std::size_t, double>> row;
        while (ss >> tok) {
            const auto colon = tok.find(':');
            if (colon == std::string::npos) {
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": malformed feature token '" + tok + "'");
            }
            try {
                const long fid = std::stol(tok.substr(0, colon));
                const double val = std::stod(tok.substr(colon + 1));
                if (fid < 1) throw DataError("feature ids are 1-based");
                row.emplace_back(static_cast<std::size_t>(fid - 1), val);
                width = std::max(width, static_cast<std::size_t>(fid));
            } catch (const DataError&) {
                throw;
            } catch (const std::exception&) {
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": malformed feature token '" + tok + "'");
            }
        }
        labels.push_back(rel);
        query_ids.push_back(qid);
        sparse_rows.push_back(std::move(row));
    }
    if (sparse_rows.empty()) throw DataError(path + ": no data rows found");

    RankingDataset out;
    out.labels = std::move(labels);
    out.query_ids = std::move(query_ids);
    out.rows = Matrix(sparse_rows.size(), width);
    for (std::size_t r = 0; r < sparse_rows.size(); ++r) {
        for (const auto& [f, v] : sparse_rows[r]) out.rows(r, f) = v;
    }
    return out;
}

EmbeddingCorpus parse_embeddings(const std::string& path) {
    auto in = open_input(path);
    EmbeddingCorpus out;
    std::vector<std::vector<double>> vectors;
    std::vector<int> labels;
    bool all_labeled = true;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (!rec.contains("id") || !rec.contains("vector") || !rec["vector"].is_array()) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": record needs 'id' and 'vector' fields");
        }
        std::vector<double> v = rec["vector"].get<std::vector<double>>();
        for (double x : v) {
            if (!std::isfinite(x)) {
                throw DataError(path + ":" + std::to_string(line_no) + ": non-finite vector value");
            }
        }
        if (!vectors.empty() && v.size() != vectors.front().size()) {
            throw DataError(path + ":" + std::to_string(line_no) + ": vector dimension " +
                            std::to_string(v.size()) + " differs from " +
                            std::to_string(vectors.front().size()));
        }
        out.ids.push_back(rec["id"].is_string() ? rec["id"].get<std::string>() : rec["id"].dump());
        vectors.push_back(std::move(v));
        if (rec.contains("label")) {
            labels.push_back(rec["label"].get<int>());
        } else {
            all_labeled = false;
        }
        if (rec.contains("relevant_ids")) {
            out.relevant_ids.push_back(rec["relevant_ids"].get<std::vector<std::string>>());
        } else {
            out.relevant_ids.push_back({});
        }
    }
    if (vectors.empty()) throw DataError(path + ": no records found");

    out.vectors = Matrix(vectors.size(), vectors.front().size());
    for (std::size_t r = 0; r < vectors.size(); ++r) {
        std::copy(vectors[r].begin(), vectors[r].end(), out.vectors.row(r));
    }
    out.has_labels = all_labeled && labels.size() == vectors.size();
    if (out.has_labels) out.labels = std::move(labels);
    bool any_relevant = false;
    for (const auto& r : out.relevant_ids) {
        if (!r.empty()) any_relevant = true;
    }
    if (!any_relevant) out.relevant_ids.clear();
    return out;
}

BinaryQuadraticProblem problem_from_json(const json& j) {
    if (!j.contains("n")) throw DataError("problem JSON missing 'n'");
    const std::size_t n = j["n"].get<std::size_t>();
    BinaryQuadraticProblem p(n);
    if (j.contains("linear")) {
        const auto lin = j["linear"].get<std::vector<double>>();
        if (lin.size() != n) throw DataError("problem JSON: linear length != n");
        for (std::size_t i = 0; i < n; ++i) p.set_linear(i, lin[i]);
    }
    if (j.contains("quadratic")) {
        for (const auto& entry : j["quadratic"]) {
            if (!entry.is_array() || entry.size() != 3) {
                throw DataError("problem JSON: quadratic entries must be [i, j, value]");
            }
            p.add_quadratic(entry[0].get<std::size_t>(), entry[1].get<std::size_t>(),
                            entry[2].get<double>());
        }
    }
    if (j.contains("offset")) p.add_offset(j["offset"].get<double>());
    return p;
}

json problem_to_json(const BinaryQuadraticProblem& p) {
    json j;
    j["n"] = p.num_variables();
    j["linear"] = p.linear();
    json quad = json::array();
    for (const auto& [pair, v] : p.quadratic()) {
        quad.push_back({pair.first, pair.second, v});
    }
    j["quadratic"] = std::move(quad);
    j["offset"] = p.offset();
    return j;
}

BinaryQuadraticProblem load_problem(const std::string& path) {
    return problem_from_json(read_json(path));
}

json sampleset_to_json(const SampleSet& set) {
    json samples = json::array();
    for (const auto& s : set.samples) {
        json rec;
        rec["bits"] = std::vector<int>(s.bits.begin(), s.bits.end());
        rec["energy"] = s.energy;
        rec["occurrences"] = s.occurrences;
        samples.push_back(std::move(rec));
    }
    json j;
    j["samples"] = std::move(samples);
    return j;
}

std::string fnv1a_file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + path);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ULL;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

json RunManifest::to_json() const {
    json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    json digests = json::object();
    for (const auto& [path, digest] : input_digests) digests[path] = digest;
    j["input_digests"] = std::move(digests);
    j["deviations"] = deviations;
    j["version"] = kToolkitVersion;
    j["timings"] = {{"build_ms", build_ms}, {"solve_ms", solve_ms}, {"eval_ms", eval_ms}};
    j["timestamp_unix_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::system_clock::now().time_since_epoch())
                                 .count();
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    auto in = open_input(path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

}  // namespace quboml
