#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "nnids/dataset.hpp"

namespace nnids {

/// Columns whose population standard deviation falls below this are treated
/// as degenerate: their Z-scores are defined as 0 for every row.
inline constexpr double kDegenerateStd = 1e-12;

/// Rows whose post-Z-score Euclidean norm falls below this are kept as exact
/// zero vectors instead of being scaled.
inline constexpr double kZeroRowNorm = 1e-12;

enum class FitScope { WholeDataset, TrainFoldOnly };

const char* to_string(FitScope scope);
FitScope fit_scope_from_string(std::string_view name);

/// Per-column mean and population standard deviation (divisor = row count).
struct NormalizationStats {
    std::vector<double> means;
    std::vector<double> stds;
    std::vector<std::uint32_t> degenerate_columns;  // stds[k] < kDegenerateStd
    FitScope fit_scope = FitScope::WholeDataset;
};

/// Dataset mapped onto the unit sphere: Z-scored columns, L2-normalized rows.
/// Rows listed in zero_rows are exact zero vectors (their similarity to
/// everything is 0); every other row has unit norm.
struct UnitSphereDataset {
    std::vector<float> features;  // rows * cols, row-major
    std::vector<std::uint8_t> labels;
    std::size_t columns = 0;
    std::vector<std::uint32_t> zero_rows;
    NormalizationStats stats;

    std::size_t rows() const { return labels.size(); }
    std::span<const float> row(std::size_t i) const {
        return {features.data() + i * columns, columns};
    }
};

/// Column means and population standard deviations over all rows.
/// Accumulation is in 64-bit, sequentially per column.
NormalizationStats column_stats(const FlowDataset& dataset, int workers = 0);

/// Same, fitted only on the given rows (train-fold-only scope).
NormalizationStats column_stats(const FlowDataset& dataset,
                                std::span<const std::uint32_t> fit_rows, int workers = 0);

/// Applies (value - mean) / std per cell; degenerate columns map to 0.
/// Throws if the column count does not match the stats.
std::vector<float> zscore(const FlowDataset& dataset, const NormalizationStats& stats,
                          int workers = 0);

/// Scales each row of the row-major matrix to unit Euclidean norm. Rows whose
/// norm is below kZeroRowNorm are set to exact zeros and their indices
/// returned.
std::vector<std::uint32_t> l2_normalize_rows(std::vector<float>& matrix, std::size_t columns,
                                             int workers = 0);

/// Full normalization: column_stats (on all rows) -> zscore -> row L2.
UnitSphereDataset normalize(const FlowDataset& dataset,
                            FitScope scope = FitScope::WholeDataset, int workers = 0);

/// Full normalization with statistics fitted on a row subset, applied to all
/// rows (used per fold in train-fold-only scope).
UnitSphereDataset normalize_with_fit_rows(const FlowDataset& dataset,
                                          std::span<const std::uint32_t> fit_rows,
                                          int workers = 0);

}  // namespace nnids
