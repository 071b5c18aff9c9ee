#include "nnids/eval.hpp"

#include <chrono>
#include <numeric>
#include <random>
#include <stdexcept>

#include "nnids/knn.hpp"
#include "nnids/rng.hpp"

namespace nnids {

std::vector<std::uint32_t> FoldPlan::fold_indices(std::uint32_t fold) const {
    std::vector<std::uint32_t> out;
    for (std::size_t j = 0; j < fold_assignment.size(); ++j)
        if (fold_assignment[j] == fold) out.push_back(static_cast<std::uint32_t>(j));
    return out;
}

std::vector<std::uint32_t> FoldPlan::complement_indices(std::uint32_t fold) const {
    std::vector<std::uint32_t> out;
    for (std::size_t j = 0; j < fold_assignment.size(); ++j)
        if (fold_assignment[j] != fold) out.push_back(static_cast<std::uint32_t>(j));
    return out;
}

FoldPlan kfold_split(std::span<const std::uint8_t> labels, std::uint32_t k, std::uint64_t seed,
                     bool stratified) {
    const std::size_t rows = labels.size();
    if (k < 2) throw std::runtime_error("kfold_split: need at least 2 folds");
    if (k > 255) throw std::runtime_error("kfold_split: more than 255 folds is not supported");
    if (rows < k)
        throw std::runtime_error("kfold_split: fewer rows (" + std::to_string(rows) +
                                 ") than folds (" + std::to_string(k) + ")");

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.fold_assignment.resize(rows);

    bool use_stratified = stratified;
    if (stratified) {
        std::size_t class_count[2] = {0, 0};
        for (const std::uint8_t label : labels) ++class_count[label != 0];
        for (const std::size_t count : class_count) {
            if (count > 0 && count < k) {
                use_stratified = false;
                plan.fell_back_to_unstratified = true;
                break;
            }
        }
    }
    plan.stratified = use_stratified;

    std::mt19937_64 rng(seed);
    if (use_stratified) {
        // Permute and deal each class separately, class 0 first.
        for (int cls = 0; cls < 2; ++cls) {
            std::vector<std::uint32_t> indices;
            for (std::size_t j = 0; j < rows; ++j)
                if ((labels[j] != 0) == (cls == 1)) indices.push_back(static_cast<std::uint32_t>(j));
            deterministic_shuffle(indices, rng);
            for (std::size_t i = 0; i < indices.size(); ++i)
                plan.fold_assignment[indices[i]] = static_cast<std::uint8_t>(i % k);
        }
    } else {
        std::vector<std::uint32_t> indices(rows);
        std::iota(indices.begin(), indices.end(), 0);
        deterministic_shuffle(indices, rng);
        for (std::size_t i = 0; i < rows; ++i)
            plan.fold_assignment[indices[i]] = static_cast<std::uint8_t>(i % k);
    }
    return plan;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) {
    tp += other.tp;
    tn += other.tn;
    fp += other.fp;
    fn += other.fn;
    return *this;
}

ConfusionCounts confusion(std::span<const std::uint8_t> predicted,
                          std::span<const std::uint8_t> truth) {
    if (predicted.size() != truth.size())
        throw std::runtime_error("confusion: prediction/truth length mismatch");
    ConfusionCounts c;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool p = predicted[i] != 0;
        const bool t = truth[i] != 0;
        if (p && t) ++c.tp;
        else if (!p && !t) ++c.tn;
        else if (p && !t) ++c.fp;
        else ++c.fn;
    }
    return c;
}

Metrics metrics(const ConfusionCounts& c) {
    if (c.total() == 0) throw std::runtime_error("metrics: empty confusion counts");
    Metrics m;
    const double tp = static_cast<double>(c.tp);
    m.precision = (c.tp + c.fp) > 0 ? tp / static_cast<double>(c.tp + c.fp) : 0.0;
    m.recall = (c.tp + c.fn) > 0 ? tp / static_cast<double>(c.tp + c.fn) : 0.0;
    m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    m.f_measure = (m.precision + m.recall) > 0.0
                      ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                      : 0.0;
    return m;
}

namespace {

struct GatheredFold {
    TrainIndex train;
    std::vector<float> queries;
    std::vector<std::uint8_t> truth;
};

GatheredFold gather_fold(const float* features, const std::uint8_t* labels, std::size_t cols,
                         const FoldPlan& plan, std::uint32_t fold) {
    GatheredFold g;
    g.train.columns = cols;
    for (std::size_t j = 0; j < plan.fold_assignment.size(); ++j) {
        const float* row = features + j * cols;
        if (plan.fold_assignment[j] == fold) {
            g.queries.insert(g.queries.end(), row, row + cols);
            g.truth.push_back(labels[j]);
        } else {
            g.train.matrix.insert(g.train.matrix.end(), row, row + cols);
            g.train.labels.push_back(labels[j]);
        }
    }
    return g;
}

FoldResult evaluate_fold(const float* features, const std::uint8_t* labels, std::size_t cols,
                         const FoldPlan& plan, std::uint32_t fold,
                         const CrossValidateOptions& options, std::uint64_t& ties) {
    const GatheredFold g = gather_fold(features, labels, cols, plan, fold);
    BatchStats stats;
    const ConstMatrixView queries{g.queries.data(), g.truth.size(), cols};
    const auto predictions =
        classify_batch(g.train, queries, options.block_rows, options.workers, &stats);
    ties += stats.tie_count;

    std::vector<std::uint8_t> predicted;
    predicted.reserve(predictions.size());
    for (const auto& p : predictions) predicted.push_back(p.label);

    FoldResult fr;
    fr.counts = confusion(predicted, g.truth);
    fr.scores = metrics(fr.counts);
    return fr;
}

void finalize_result(EvalResult& result) {
    for (const auto& fr : result.per_fold) {
        result.pooled += fr.counts;
        result.averaged.precision += fr.scores.precision;
        result.averaged.recall += fr.scores.recall;
        result.averaged.accuracy += fr.scores.accuracy;
        result.averaged.f_measure += fr.scores.f_measure;
    }
    const double n = static_cast<double>(result.per_fold.size());
    result.averaged.precision /= n;
    result.averaged.recall /= n;
    result.averaged.accuracy /= n;
    result.averaged.f_measure /= n;
    result.pooled_metrics = metrics(result.pooled);
}

}  // namespace

EvalResult cross_validate_normalized(ConstMatrixView features,
                                     std::span<const std::uint8_t> labels,
                                     const CrossValidateOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    if (options.fit_scope != FitScope::WholeDataset)
        throw std::runtime_error(
            "cross_validate: pre-normalized data supports whole-dataset fit scope only");
    if (features.rows != labels.size())
        throw std::runtime_error("cross_validate: labels length does not match matrix rows");

    const FoldPlan plan = kfold_split(labels, options.folds, options.seed, options.stratified);

    EvalResult result;
    result.rows = labels.size();
    for (const std::uint8_t label : labels) label == 0 ? ++result.benign : ++result.attack;
    result.stratified = plan.stratified;
    result.fell_back_to_unstratified = plan.fell_back_to_unstratified;
    for (std::size_t j = 0; j < features.rows; ++j) {
        const auto row = features.row(j);
        bool all_zero = true;
        for (const float v : row) {
            if (v != 0.0f) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) ++result.zero_rows;
    }

    for (std::uint32_t fold = 0; fold < plan.k; ++fold) {
        result.per_fold.push_back(evaluate_fold(features.data, labels.data(), features.cols,
                                                plan, fold, options, result.tie_count));
    }
    finalize_result(result);
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

EvalResult cross_validate(const FlowDataset& dataset, const CrossValidateOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    if (dataset.rows() == 0) throw std::runtime_error("cross_validate: empty dataset");

    EvalResult result;
    const std::size_t cols = dataset.cols();

    if (options.fit_scope == FitScope::WholeDataset) {
        // Statistics over all rows, normalized once before the split. The
        // zero-row count comes from the scan in cross_validate_normalized
        // (zeroed rows are exact zero vectors).
        const UnitSphereDataset whole = normalize(dataset, FitScope::WholeDataset,
                                                  options.workers);
        result = cross_validate_normalized({whole.features.data(), whole.rows(), cols},
                                           whole.labels, options);
    } else {
        const FoldPlan plan =
            kfold_split(dataset.labels, options.folds, options.seed, options.stratified);
        result.rows = dataset.rows();
        for (const std::uint8_t label : dataset.labels)
            label == 0 ? ++result.benign : ++result.attack;
        result.stratified = plan.stratified;
        result.fell_back_to_unstratified = plan.fell_back_to_unstratified;

        for (std::uint32_t fold = 0; fold < plan.k; ++fold) {
            const auto train_rows = plan.complement_indices(fold);
            const UnitSphereDataset per_fold =
                normalize_with_fit_rows(dataset, train_rows, options.workers);
            result.zero_rows += per_fold.zero_rows.size();
            result.per_fold.push_back(evaluate_fold(per_fold.features.data(),
                                                    per_fold.labels.data(), cols, plan, fold,
                                                    options, result.tie_count));
        }
        finalize_result(result);
    }

    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

}  // namespace nnids
