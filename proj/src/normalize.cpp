#include "nnids/normalize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nnids/parallel.hpp"

namespace nnids {

const char* to_string(FitScope scope) {
    return scope == FitScope::WholeDataset ? "whole-dataset" : "train-fold-only";
}

FitScope fit_scope_from_string(std::string_view name) {
    if (name == "whole-dataset") return FitScope::WholeDataset;
    if (name == "train-fold-only") return FitScope::TrainFoldOnly;
    throw std::runtime_error("unknown fit scope: " + std::string(name));
}

namespace {

NormalizationStats compute_stats(const FlowDataset& dataset,
                                 std::span<const std::uint32_t> fit_rows, bool all_rows,
                                 FitScope scope, int workers) {
    const std::size_t cols = dataset.cols();
    const std::size_t n = all_rows ? dataset.rows() : fit_rows.size();
    if (n == 0) throw std::runtime_error("column_stats: no rows to fit on");

    NormalizationStats stats;
    stats.fit_scope = scope;
    stats.means.resize(cols);
    stats.stds.resize(cols);

    const float* data = dataset.features.data();
    // Two-pass mean/std per column, summed in a fixed sequential order so the
    // result does not depend on the worker count.
    parallel_for(cols, workers, [&](std::size_t k0, std::size_t k1) {
        for (std::size_t k = k0; k < k1; ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = all_rows ? i : fit_rows[i];
                sum += static_cast<double>(data[j * cols + k]);
            }
            const double mean = sum / static_cast<double>(n);
            double sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t j = all_rows ? i : fit_rows[i];
                const double d = static_cast<double>(data[j * cols + k]) - mean;
                sq += d * d;
            }
            stats.means[k] = mean;
            stats.stds[k] = std::sqrt(sq / static_cast<double>(n));
        }
    });

    for (std::size_t k = 0; k < cols; ++k) {
        if (stats.stds[k] < kDegenerateStd)
            stats.degenerate_columns.push_back(static_cast<std::uint32_t>(k));
    }
    return stats;
}

}  // namespace

NormalizationStats column_stats(const FlowDataset& dataset, int workers) {
    return compute_stats(dataset, {}, true, FitScope::WholeDataset, workers);
}

NormalizationStats column_stats(const FlowDataset& dataset,
                                std::span<const std::uint32_t> fit_rows, int workers) {
    return compute_stats(dataset, fit_rows, false, FitScope::TrainFoldOnly, workers);
}

std::vector<float> zscore(const FlowDataset& dataset, const NormalizationStats& stats,
                          int workers) {
    const std::size_t cols = dataset.cols();
    if (stats.means.size() != cols)
        throw std::runtime_error("zscore: stats fitted on " + std::to_string(stats.means.size()) +
                                 " columns, dataset has " + std::to_string(cols));

    std::vector<bool> degenerate(cols, false);
    for (const std::uint32_t k : stats.degenerate_columns) degenerate[k] = true;

    const std::size_t rows = dataset.rows();
    std::vector<float> out(rows * cols);
    const float* src = dataset.features.data();
    parallel_for(rows, workers, [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            const float* in_row = src + j * cols;
            float* out_row = out.data() + j * cols;
            for (std::size_t k = 0; k < cols; ++k) {
                out_row[k] = degenerate[k]
                                 ? 0.0f
                                 : static_cast<float>(
                                       (static_cast<double>(in_row[k]) - stats.means[k]) /
                                       stats.stds[k]);
            }
        }
    });
    return out;
}

std::vector<std::uint32_t> l2_normalize_rows(std::vector<float>& matrix, std::size_t columns,
                                             int workers) {
    if (columns == 0) return {};
    const std::size_t rows = matrix.size() / columns;
    std::vector<std::uint8_t> is_zero(rows, 0);
    parallel_for(rows, workers, [&](std::size_t j0, std::size_t j1) {
        for (std::size_t j = j0; j < j1; ++j) {
            float* row = matrix.data() + j * columns;
            double sq = 0.0;
            for (std::size_t k = 0; k < columns; ++k)
                sq += static_cast<double>(row[k]) * static_cast<double>(row[k]);
            const double norm = std::sqrt(sq);
            if (norm < kZeroRowNorm) {
                for (std::size_t k = 0; k < columns; ++k) row[k] = 0.0f;
                is_zero[j] = 1;
            } else {
                for (std::size_t k = 0; k < columns; ++k)
                    row[k] = static_cast<float>(static_cast<double>(row[k]) / norm);
            }
        }
    });
    std::vector<std::uint32_t> zero_rows;
    for (std::size_t j = 0; j < rows; ++j)
        if (is_zero[j]) zero_rows.push_back(static_cast<std::uint32_t>(j));
    return zero_rows;
}

UnitSphereDataset normalize(const FlowDataset& dataset, FitScope scope, int workers) {
    UnitSphereDataset out;
    out.stats = compute_stats(dataset, {}, true, scope, workers);
    out.features = zscore(dataset, out.stats, workers);
    out.columns = dataset.cols();
    out.zero_rows = l2_normalize_rows(out.features, out.columns, workers);
    out.labels = dataset.labels;
    return out;
}

UnitSphereDataset normalize_with_fit_rows(const FlowDataset& dataset,
                                          std::span<const std::uint32_t> fit_rows,
                                          int workers) {
    UnitSphereDataset out;
    out.stats = compute_stats(dataset, fit_rows, false, FitScope::TrainFoldOnly, workers);
    out.features = zscore(dataset, out.stats, workers);
    out.columns = dataset.cols();
    out.zero_rows = l2_normalize_rows(out.features, out.columns, workers);
    out.labels = dataset.labels;
    return out;
}

}  // namespace nnids
