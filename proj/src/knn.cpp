#include "nnids/knn.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>

#include "nnids/parallel.hpp"

namespace nnids {

namespace {

// Training rows are visited in chunks of this many rows so a query block and
// a training chunk stay cache-resident together. Has no effect on results.
constexpr std::size_t kTrainChunk = 4096;

// Single dot-product kernel shared by similarity/classify_one/classify_batch.
// Eight independent 64-bit accumulators break the FP dependency chain that
// limits the naive loop; combined in a fixed order and marked noinline so
// every call site uses the exact same instruction sequence and scores are
// bit-identical across block sizes and worker counts.
__attribute__((noinline)) double dot_accum(const float* a, const float* b, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double s4 = 0.0, s5 = 0.0, s6 = 0.0, s7 = 0.0;
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        s0 += static_cast<double>(a[k]) * static_cast<double>(b[k]);
        s1 += static_cast<double>(a[k + 1]) * static_cast<double>(b[k + 1]);
        s2 += static_cast<double>(a[k + 2]) * static_cast<double>(b[k + 2]);
        s3 += static_cast<double>(a[k + 3]) * static_cast<double>(b[k + 3]);
        s4 += static_cast<double>(a[k + 4]) * static_cast<double>(b[k + 4]);
        s5 += static_cast<double>(a[k + 5]) * static_cast<double>(b[k + 5]);
        s6 += static_cast<double>(a[k + 6]) * static_cast<double>(b[k + 6]);
        s7 += static_cast<double>(a[k + 7]) * static_cast<double>(b[k + 7]);
    }
    for (; k < n; ++k) s0 += static_cast<double>(a[k]) * static_cast<double>(b[k]);
    return ((s0 + s1) + (s2 + s3)) + ((s4 + s5) + (s6 + s7));
}

struct Running {
    double best;
    std::uint32_t arg;
    std::uint32_t hits;  // training rows attaining best
};

}  // namespace

double similarity(std::span<const float> u, std::span<const float> v) {
    if (u.size() != v.size()) throw std::runtime_error("similarity: vector length mismatch");
    return dot_accum(u.data(), v.data(), u.size());
}

Prediction classify_one(const TrainIndex& index, std::span<const float> x) {
    if (index.size() == 0) throw std::runtime_error("classify: empty training index");
    if (x.size() != index.columns)
        throw std::runtime_error("classify: query length does not match index columns");

    double best = -std::numeric_limits<double>::infinity();
    std::uint32_t arg = 0;
    const float* rows = index.matrix.data();
    for (std::size_t t = 0; t < index.size(); ++t) {
        const double s = dot_accum(x.data(), rows + t * index.columns, index.columns);
        if (s > best) {
            best = s;
            arg = static_cast<std::uint32_t>(t);
        }
    }
    return {index.labels[arg], arg, best};
}

std::vector<Prediction> classify_batch(const TrainIndex& index, ConstMatrixView queries,
                                       std::size_t block_rows, int workers,
                                       BatchStats* stats) {
    if (index.size() == 0) throw std::runtime_error("classify: empty training index");
    if (block_rows == 0) throw std::runtime_error("classify: block_rows must be positive");
    if (queries.cols != index.columns)
        throw std::runtime_error("classify: query columns do not match index columns");

    std::vector<Prediction> out(queries.rows);
    if (queries.rows == 0) return out;

    block_rows = std::min(block_rows, queries.rows);
    const std::size_t blocks = (queries.rows + block_rows - 1) / block_rows;
    const std::size_t train_rows = index.size();
    const std::size_t cols = index.columns;
    const float* train = index.matrix.data();
    std::atomic<std::uint64_t> ties{0};

    parallel_for(blocks, workers, [&](std::size_t b0, std::size_t b1) {
        std::uint64_t local_ties = 0;
        std::vector<Running> running(block_rows);
        for (std::size_t b = b0; b < b1; ++b) {
            const std::size_t q0 = b * block_rows;
            const std::size_t q1 = std::min(q0 + block_rows, queries.rows);
            const std::size_t count = q1 - q0;
            for (std::size_t i = 0; i < count; ++i)
                running[i] = {-std::numeric_limits<double>::infinity(), 0, 0};

            for (std::size_t t0 = 0; t0 < train_rows; t0 += kTrainChunk) {
                const std::size_t t1 = std::min(t0 + kTrainChunk, train_rows);
                for (std::size_t i = 0; i < count; ++i) {
                    const float* query = queries.data + (q0 + i) * cols;
                    Running r = running[i];
                    for (std::size_t t = t0; t < t1; ++t) {
                        const double s = dot_accum(query, train + t * cols, cols);
                        if (s > r.best) {
                            r.best = s;
                            r.arg = static_cast<std::uint32_t>(t);
                            r.hits = 1;
                        } else if (s == r.best) {
                            ++r.hits;
                        }
                    }
                    running[i] = r;
                }
            }
            for (std::size_t i = 0; i < count; ++i) {
                const Running& r = running[i];
                out[q0 + i] = {index.labels[r.arg], r.arg, r.best};
                if (r.hits > 1) ++local_ties;
            }
        }
        ties.fetch_add(local_ties, std::memory_order_relaxed);
    });

    if (stats) stats->tie_count = ties.load();
    return out;
}

std::vector<Prediction> oracle_classify(const TrainIndex& index, ConstMatrixView queries) {
    if (index.size() == 0) throw std::runtime_error("classify: empty training index");
    if (queries.cols != index.columns)
        throw std::runtime_error("classify: query columns do not match index columns");

    std::vector<Prediction> out(queries.rows);
    for (std::size_t m = 0; m < queries.rows; ++m) {
        const float* query = queries.data + m * queries.cols;
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_index = 0;
        for (std::size_t t = 0; t < index.size(); ++t) {
            const float* row = index.matrix.data() + t * index.columns;
            double score = 0.0;
            for (std::size_t k = 0; k < index.columns; ++k)
                score += static_cast<double>(query[k]) * static_cast<double>(row[k]);
            if (score > best) {
                best = score;
                best_index = t;
            }
        }
        out[m] = {index.labels[best_index], static_cast<std::uint32_t>(best_index), best};
    }
    return out;
}

}  // namespace nnids
