#ifndef QUBOML_DATASET_HPP
#define QUBOML_DATASET_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace quboml {

// Dense row-major matrix; small enough for the problem sizes here.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    const double* row(std::size_t r) const { return data.data() + r * cols; }
    double* row(std::size_t r) { return data.data() + r * cols; }

    std::vector<double> column(std::size_t c) const {
        std::vector<double> out(rows);
        for (std::size_t r = 0; r < rows; ++r) out[r] = (*this)(r, c);
        return out;
    }
};

// Query-grouped feature vectors with graded relevance labels.
struct RankingDataset {
    Matrix rows;                    // n_samples x n_features
    std::vector<int> labels;        // relevance grade per row
    std::vector<int> query_ids;    // group id per row
};

// id/vector/label records for documents.
struct EmbeddingCorpus {
    std::vector<std::string> ids;
    Matrix vectors;                 // n x d
    std::vector<int> labels;        // binary; empty when unavailable
    bool has_labels = false;

    // Query-side extension: relevant document ids per query record.
    std::vector<std::vector<std::string>> relevant_ids;

    std::size_t size() const { return vectors.rows; }
    std::size_t dim() const { return vectors.cols; }
};

EmbeddingCorpus subset(const EmbeddingCorpus& c, const std::vector<std::size_t>& indices);

}  // namespace quboml

#endif
