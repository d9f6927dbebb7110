#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "quboml/errors.hpp"
#include "quboml/io.hpp"
#include "test_util.hpp"

using namespace quboml;

namespace {
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("io_test_" + name) {
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};
}  // namespace

TEST_CASE("parse_letor densifies 1-based sparse rows") {
    TempFile f("letor.txt",
               "2 qid:1 1:0.5 3:1.5 # doc-a\n"
               "0 qid:1 2:2.0\n"
               "\n"
               "1 qid:2 1:-1.0 2:0.25 3:0.75\n");
    const auto ds = parse_letor(f.path);
    REQUIRE(ds.rows.rows == 3);
    REQUIRE(ds.rows.cols == 3);
    CHECK(ds.labels == std::vector<int>{2, 0, 1});
    CHECK(ds.query_ids == std::vector<int>{1, 1, 2});
    CHECK(ds.rows(0, 0) == 0.5);
    CHECK(ds.rows(0, 1) == 0.0);  // missing id densifies to 0
    CHECK(ds.rows(0, 2) == 1.5);
    CHECK(ds.rows(1, 1) == 2.0);
    CHECK(ds.rows(2, 0) == -1.0);
}

TEST_CASE("parse_letor rejects malformed rows with path and line") {
    TempFile f("letor_bad.txt", "1 1:0.5\n");
    try {
        parse_letor(f.path);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find(f.path) != std::string::npos);
        CHECK(msg.find(":1") != std::string::npos);
    }
    TempFile g("letor_badtok.txt", "1 qid:3 junk\n");
    CHECK_THROWS_AS(parse_letor(g.path), DataError);
    CHECK_THROWS_AS(parse_letor("does_not_exist.txt"), DataError);
    TempFile h("letor_empty.txt", "# only a comment\n");
    CHECK_THROWS_AS(parse_letor(h.path), DataError);
}

TEST_CASE("parse_embeddings reads labeled JSONL") {
    TempFile f("emb.jsonl",
               "{\"id\": \"a\", \"vector\": [1.0, 2.0], \"label\": 0}\n"
               "{\"id\": \"b\", \"vector\": [3.0, 4.0], \"label\": 1}\n");
    const auto c = parse_embeddings(f.path);
    REQUIRE(c.size() == 2);
    CHECK(c.dim() == 2);
    CHECK(c.ids == std::vector<std::string>{"a", "b"});
    CHECK(c.has_labels);
    CHECK(c.labels == std::vector<int>{0, 1});
    CHECK(c.vectors(1, 0) == 3.0);
}

TEST_CASE("parse_embeddings marks partially labeled corpora unlabeled") {
    TempFile f("emb_part.jsonl",
               "{\"id\": \"a\", \"vector\": [1.0]}\n"
               "{\"id\": \"b\", \"vector\": [2.0], \"label\": 1}\n");
    const auto c = parse_embeddings(f.path);
    CHECK_FALSE(c.has_labels);
    CHECK(c.labels.empty());
}

TEST_CASE("parse_embeddings carries relevant_ids for query files") {
    TempFile f("queries.jsonl",
               "{\"id\": \"q\", \"vector\": [0.5], \"relevant_ids\": [\"a\", \"b\"]}\n");
    const auto c = parse_embeddings(f.path);
    REQUIRE(c.relevant_ids.size() == 1);
    CHECK(c.relevant_ids[0] == std::vector<std::string>{"a", "b"});
}

TEST_CASE("parse_embeddings rejects ragged and non-finite records") {
    TempFile ragged("emb_ragged.jsonl",
                    "{\"id\": \"a\", \"vector\": [1.0, 2.0]}\n"
                    "{\"id\": \"b\", \"vector\": [1.0]}\n");
    CHECK_THROWS_AS(parse_embeddings(ragged.path), DataError);
    TempFile nan("emb_nan.jsonl", "{\"id\": \"a\", \"vector\": [1e999]}\n");
    CHECK_THROWS_AS(parse_embeddings(nan.path), DataError);
    TempFile nofield("emb_nofield.jsonl", "{\"id\": \"a\"}\n");
    CHECK_THROWS_AS(parse_embeddings(nofield.path), DataError);
}

TEST_CASE("problem JSON round trip preserves energies") {
    const auto p = testutil::random_problem(7, 123);
    const auto j = problem_to_json(p);
    const auto q = problem_from_json(j);
    std::mt19937_64 g(0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = testutil::random_assignment(7, g);
        CHECK(energy(p, x) == energy(q, x));
    }
    CHECK_THROWS_AS(problem_from_json(nlohmann::json{{"linear", {1.0}}}), DataError);
}

TEST_CASE("write_json / read_json round trip") {
    nlohmann::json j{{"b", 2}, {"a", {1, 2, 3}}};
    TempFile f("round.json", "");
    write_json(f.path, j);
    CHECK(read_json(f.path) == j);
    TempFile bad("bad.json", "{not json");
    CHECK_THROWS_AS(read_json(bad.path), DataError);
}

TEST_CASE("fnv1a digest matches the reference value for known bytes") {
    TempFile f("digest.bin", "hello");
    // FNV-1a 64-bit of "hello".
    CHECK(fnv1a_file_digest(f.path) == "a430d84680aabd0b");
    TempFile e("digest_empty.bin", "");
    CHECK(fnv1a_file_digest(e.path) == "cbf29ce484222325");
}

TEST_CASE("sampleset serialization carries bits, energy, occurrences") {
    SampleSet set;
    set.samples.push_back({{1, 0, 1}, -2.5, 7});
    const auto j = sampleset_to_json(set);
    REQUIRE(j["samples"].size() == 1);
    CHECK(j["samples"][0]["bits"] == nlohmann::json({1, 0, 1}));
    CHECK(j["samples"][0]["energy"] == -2.5);
    CHECK(j["samples"][0]["occurrences"] == 7);
    CHECK_FALSE(j.contains("solve_time_ms"));
}

TEST_CASE("manifest JSON includes config, digests, and version") {
    RunManifest m;
    m.command = "features";
    m.config = {{"k", 4}};
    m.seed = 9;
    TempFile f("digest_input.txt", "data");
    m.input_digests.emplace_back(f.path, fnv1a_file_digest(f.path));
    const auto j = m.to_json();
    CHECK(j["command"] == "features");
    CHECK(j["seed"] == 9);
    CHECK(j["version"] == kToolkitVersion);
    CHECK(j["input_digests"].contains(f.path));
    CHECK(j.contains("timings"));
    CHECK(j.contains("timestamp_unix_ms"));
}

TEST_CASE("subset keeps ids, labels, and rows aligned") {
    const auto c = testutil::separable_corpus(3, 2);
    const auto s = subset(c, {5, 1});
    REQUIRE(s.size() == 2);
    CHECK(s.ids == std::vector<std::string>{"d5", "d1"});
    CHECK(s.labels == std::vector<int>{1, 0});
    CHECK(s.vectors(0, 0) == c.vectors(5, 0));
}
