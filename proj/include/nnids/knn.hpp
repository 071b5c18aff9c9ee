#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nnids {

/// Read-only view over a row-major float matrix.
struct ConstMatrixView {
    const float* data = nullptr;
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::span<const float> row(std::size_t i) const { return {data + i * cols, cols}; }
};

/// Immutable training set for nearest-neighbor classification: unit-norm rows
/// plus their binary labels. Safe to share read-only across threads.
struct TrainIndex {
    std::vector<float> matrix;  // rows * cols, row-major, unit (or zero) rows
    std::vector<std::uint8_t> labels;
    std::size_t columns = 0;

    std::size_t size() const { return labels.size(); }
    ConstMatrixView view() const { return {matrix.data(), labels.size(), columns}; }
};

struct Prediction {
    std::uint8_t label = 0;
    std::uint32_t neighbor_index = 0;
    double similarity = 0.0;
};

struct BatchStats {
    // Queries whose maximum similarity was attained by more than one
    // training row (the winner is always the smallest index).
    std::uint64_t tie_count = 0;
};

/// Dot product of two unit vectors, accumulated in 64-bit.
double similarity(std::span<const float> u, std::span<const float> v);

/// Projects x onto every training row and returns the argmax neighbor.
/// Ties break toward the smallest training index. Throws on an empty index.
Prediction classify_one(const TrainIndex& index, std::span<const float> x);

/// Batched classification. Queries are processed in blocks of block_rows
/// against the full training matrix, keeping a running (max, argmax) per
/// query; training rows are visited in ascending order, so the result is
/// identical to classify_one per query regardless of block size or worker
/// count. Throws if block_rows is 0.
std::vector<Prediction> classify_batch(const TrainIndex& index, ConstMatrixView queries,
                                       std::size_t block_rows = 256, int workers = 0,
                                       BatchStats* stats = nullptr);

/// Naive reference classifier: two nested loops, no blocking, no shared
/// kernel code with classify_batch. Exists to cross-check the fast path.
std::vector<Prediction> oracle_classify(const TrainIndex& index, ConstMatrixView queries);

}  // namespace nnids
