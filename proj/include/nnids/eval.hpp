#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nnids/dataset.hpp"
#include "nnids/knn.hpp"
#include "nnids/normalize.hpp"

namespace nnids {

/// Deterministic partition of row indices into k folds. The assignment is a
/// pure function of (row count, labels, k, seed, stratified): indices are
/// permuted with a Fisher-Yates shuffle driven by std::mt19937_64 (rejection
/// sampling for the bounded draws) and dealt round-robin into the folds; in
/// stratified mode each class is permuted and dealt separately.
struct FoldPlan {
    std::vector<std::uint8_t> fold_assignment;  // per row, in [0, k)
    std::uint32_t k = 0;
    std::uint64_t seed = 0;
    bool stratified = false;
    // Set when stratification was requested but a class had fewer than k
    // members, forcing the unstratified path.
    bool fell_back_to_unstratified = false;

    std::vector<std::uint32_t> fold_indices(std::uint32_t fold) const;
    std::vector<std::uint32_t> complement_indices(std::uint32_t fold) const;
};

FoldPlan kfold_split(std::span<const std::uint8_t> labels, std::uint32_t k, std::uint64_t seed,
                     bool stratified);

/// Attack (label 1) is the positive class.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& other);
};

ConfusionCounts confusion(std::span<const std::uint8_t> predicted,
                          std::span<const std::uint8_t> truth);

struct Metrics {
    double precision = 0.0;
    double recall = 0.0;
    double accuracy = 0.0;
    double f_measure = 0.0;
};

/// Precision, recall, accuracy and F-measure from one confusion tally.
/// Zero-division policy: precision is 0 when tp+fp = 0, recall is 0 when
/// tp+fn = 0, and F is 0 when precision+recall = 0.
Metrics metrics(const ConfusionCounts& c);

struct CrossValidateOptions {
    std::uint32_t folds = 5;
    std::uint64_t seed = 42;
    FitScope fit_scope = FitScope::WholeDataset;
    bool stratified = true;
    std::size_t block_rows = 256;
    int workers = 0;
};

struct FoldResult {
    ConfusionCounts counts;
    Metrics scores;
};

struct EvalResult {
    std::vector<FoldResult> per_fold;
    Metrics averaged;                 // unweighted mean over folds
    ConfusionCounts pooled;           // summed over folds, reported for transparency
    Metrics pooled_metrics;
    std::uint64_t tie_count = 0;
    std::uint64_t zero_rows = 0;      // rows that normalized to the zero vector
    std::uint64_t rows = 0;
    std::uint64_t benign = 0;
    std::uint64_t attack = 0;
    bool stratified = false;          // what the fold plan actually did
    bool fell_back_to_unstratified = false;
    double wall_time_seconds = 0.0;
};

/// Full k-fold cross-validation of the nearest-neighbor classifier. In
/// whole-dataset scope the data is normalized once before splitting; in
/// train-fold-only scope statistics are refitted on each fold's training
/// rows. Folds are evaluated in order; all classification inside a fold runs
/// in parallel without affecting results.
EvalResult cross_validate(const FlowDataset& dataset, const CrossValidateOptions& options = {});

/// Cross-validation over rows that are already on the unit sphere (e.g. a
/// matrix loaded from a binary cache). Whole-dataset fit scope only: the
/// normalization is taken as given, so per-fold refitting is impossible.
EvalResult cross_validate_normalized(ConstMatrixView features,
                                     std::span<const std::uint8_t> labels,
                                     const CrossValidateOptions& options = {});

}  // namespace nnids
