// Python bindings for the nnids core: dataset loading and cleaning,
// unit-sphere normalization, exact cosine nearest-neighbor classification
// and k-fold evaluation.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nnids/cache.hpp"
#include "nnids/csv.hpp"
#include "nnids/dataset.hpp"
#include "nnids/eval.hpp"
#include "nnids/knn.hpp"
#include "nnids/normalize.hpp"

namespace py = pybind11;
using namespace nnids;

namespace {

using FloatMatrix = py::array_t<float, py::array::c_style | py::array::forcecast>;
using ByteVector = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

std::vector<float> matrix_to_vector(const FloatMatrix& array, std::size_t& rows,
                                    std::size_t& cols) {
    if (array.ndim() != 2) throw std::runtime_error("expected a 2-D float matrix");
    rows = static_cast<std::size_t>(array.shape(0));
    cols = static_cast<std::size_t>(array.shape(1));
    const float* data = array.data();
    return std::vector<float>(data, data + rows * cols);
}

std::vector<std::uint8_t> labels_to_vector(const ByteVector& array) {
    if (array.ndim() != 1) throw std::runtime_error("expected a 1-D label vector");
    const std::uint8_t* data = array.data();
    return std::vector<std::uint8_t>(data, data + array.shape(0));
}

py::array_t<float> vector_to_matrix(const std::vector<float>& values, std::size_t rows,
                                    std::size_t cols) {
    py::array_t<float> out({rows, cols});
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

py::array_t<std::uint8_t> vector_to_labels(const std::vector<std::uint8_t>& values) {
    py::array_t<std::uint8_t> out(static_cast<py::ssize_t>(values.size()));
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

TrainIndex make_index(const FloatMatrix& matrix, const ByteVector& labels) {
    TrainIndex index;
    std::size_t rows = 0;
    index.matrix = matrix_to_vector(matrix, rows, index.columns);
    index.labels = labels_to_vector(labels);
    if (index.labels.size() != rows)
        throw std::runtime_error("training labels length does not match matrix rows");
    return index;
}

py::dict predictions_to_dict(const std::vector<Prediction>& predictions,
                             const BatchStats* stats) {
    std::vector<std::uint8_t> labels;
    py::array_t<std::uint32_t> indices(static_cast<py::ssize_t>(predictions.size()));
    py::array_t<double> similarities(static_cast<py::ssize_t>(predictions.size()));
    auto* index_data = indices.mutable_data();
    auto* sim_data = similarities.mutable_data();
    labels.reserve(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        labels.push_back(predictions[i].label);
        index_data[i] = predictions[i].neighbor_index;
        sim_data[i] = predictions[i].similarity;
    }
    py::dict out;
    out["labels"] = vector_to_labels(labels);
    out["neighbor_indices"] = indices;
    out["similarities"] = similarities;
    if (stats) out["tie_count"] = stats->tie_count;
    return out;
}

py::dict metrics_to_dict(const Metrics& m) {
    py::dict out;
    out["accuracy"] = m.accuracy;
    out["f_measure"] = m.f_measure;
    out["precision"] = m.precision;
    out["recall"] = m.recall;
    return out;
}

py::dict counts_to_dict(const ConfusionCounts& c) {
    py::dict out;
    out["tp"] = c.tp;
    out["tn"] = c.tn;
    out["fp"] = c.fp;
    out["fn"] = c.fn;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact cosine nearest-neighbor classification of network flows";

    py::class_<FlowDataset>(m, "Dataset")
        .def_property_readonly("rows", &FlowDataset::rows)
        .def_property_readonly("cols", &FlowDataset::cols)
        .def_property_readonly("column_names",
                               [](const FlowDataset& d) { return d.column_names; })
        .def_property_readonly("label_names", [](const FlowDataset& d) { return d.label_names; })
        .def_property_readonly(
            "features",
            [](const FlowDataset& d) { return vector_to_matrix(d.features, d.rows(), d.cols()); })
        .def_property_readonly("labels",
                               [](const FlowDataset& d) { return vector_to_labels(d.labels); })
        .def("__repr__", [](const FlowDataset& d) {
            return "<nnids.Dataset rows=" + std::to_string(d.rows()) +
                   " cols=" + std::to_string(d.cols()) + ">";
        });

    m.def(
        "load_csv",
        [](const std::string& path, const std::string& label_column,
           const std::string& timestamp_column, const std::string& benign_token,
           bool drop_constants) {
            CleanOptions opts;
            opts.label_column = label_column;
            opts.timestamp_column = timestamp_column;
            opts.benign_token = benign_token;
            opts.drop_constant_columns = drop_constants;
            const RawTable raw = parse_csv(path);
            return clean(raw, opts);
        },
        py::arg("path"), py::arg("label_column") = "Label",
        py::arg("timestamp_column") = "Timestamp", py::arg("benign_token") = "Benign",
        py::arg("drop_constant_columns") = true,
        "Parse and clean a flow CSV file into a Dataset");

    m.def(
        "from_arrays",
        [](const FloatMatrix& features, const ByteVector& labels) {
            FlowDataset ds;
            std::size_t rows = 0, cols = 0;
            ds.features = matrix_to_vector(features, rows, cols);
            ds.labels = labels_to_vector(labels);
            if (ds.labels.size() != rows)
                throw std::runtime_error("labels length does not match feature rows");
            for (const auto label : ds.labels) {
                if (label > 1) throw std::runtime_error("labels must be 0 or 1");
            }
            for (std::size_t k = 0; k < cols; ++k)
                ds.column_names.push_back("f" + std::to_string(k));
            ds.label_names = {"Benign", "Attack"};
            ds.label_ids.reserve(rows);
            for (const auto label : ds.labels) ds.label_ids.push_back(label);
            ProvenanceEntry prov;
            prov.path = "<arrays>";
            prov.raw_rows = rows;
            prov.retained_rows = rows;
            ds.provenance.push_back(prov);
            return ds;
        },
        py::arg("features"), py::arg("labels"),
        "Build a Dataset from a float feature matrix and binary labels");

    m.def(
        "summarize",
        [](const FlowDataset& ds, const std::string& benign_token) {
            const DatasetSummary s = summarize(ds, benign_token);
            py::dict out;
            py::list labels;
            for (const auto& [label, count] : s.per_label_counts) {
                py::dict entry;
                entry["label"] = label;
                entry["count"] = count;
                labels.append(entry);
            }
            out["source"] = s.source;
            out["labels"] = labels;
            out["benign"] = s.benign_count;
            out["attack"] = s.attack_count;
            out["dropped_rows"] = s.dropped_rows;
            out["duplicate_headers"] = s.duplicate_headers;
            out["dropped_columns"] = s.dropped_columns;
            return out;
        },
        py::arg("dataset"), py::arg("benign_token") = "Benign");

    m.def("concat", [](const std::vector<FlowDataset>& datasets) { return concat(datasets); },
          py::arg("datasets"), "Stack datasets with identical schemas");

    m.def("subsample", &subsample_stratified, py::arg("dataset"), py::arg("cap"),
          py::arg("seed") = 42,
          "Seeded stratified subsample of at most cap rows (by original label)");

    m.def(
        "drop_constant_columns",
        [](FlowDataset ds) {
            drop_constant_columns(ds);
            return ds;
        },
        py::arg("dataset"), "Copy of the dataset without constant columns");

    m.def(
        "column_stats",
        [](const FlowDataset& ds) {
            const NormalizationStats stats = column_stats(ds);
            py::dict out;
            out["means"] = stats.means;
            out["stds"] = stats.stds;
            out["degenerate_columns"] = stats.degenerate_columns;
            return out;
        },
        py::arg("dataset"), "Per-column mean and population standard deviation");

    m.def(
        "normalize",
        [](const FlowDataset& ds, const std::string& fit_scope, int workers) {
            UnitSphereDataset unit;
            {
                py::gil_scoped_release release;
                unit = normalize(ds, fit_scope_from_string(fit_scope), workers);
            }
            py::dict out;
            out["features"] = vector_to_matrix(unit.features, unit.rows(), unit.columns);
            out["labels"] = vector_to_labels(unit.labels);
            out["zero_rows"] = unit.zero_rows;
            out["means"] = unit.stats.means;
            out["stds"] = unit.stats.stds;
            out["degenerate_columns"] = unit.stats.degenerate_columns;
            return out;
        },
        py::arg("dataset"), py::arg("fit_scope") = "whole-dataset", py::arg("workers") = 0,
        "Z-score columns and scale rows onto the unit sphere");

    m.def(
        "l2_normalize_rows",
        [](const FloatMatrix& matrix) {
            std::size_t rows = 0, cols = 0;
            std::vector<float> m = matrix_to_vector(matrix, rows, cols);
            const auto zero_rows = l2_normalize_rows(m, cols);
            return py::make_tuple(vector_to_matrix(m, rows, cols), zero_rows);
        },
        py::arg("matrix"), "Scale each row to unit norm; returns (matrix, zero_row_indices)");

    m.def(
        "similarity",
        [](const FloatMatrix& u, const FloatMatrix& v) {
            if (u.ndim() != 1 || v.ndim() != 1)
                throw std::runtime_error("similarity expects 1-D vectors");
            return similarity({u.data(), static_cast<std::size_t>(u.shape(0))},
                              {v.data(), static_cast<std::size_t>(v.shape(0))});
        },
        py::arg("u"), py::arg("v"), "Dot product accumulated in 64-bit");

    m.def(
        "classify",
        [](const FloatMatrix& train, const ByteVector& train_labels, const FloatMatrix& queries,
           std::size_t block_rows, int workers) {
            const TrainIndex index = make_index(train, train_labels);
            std::size_t rows = 0, cols = 0;
            const std::vector<float> q = matrix_to_vector(queries, rows, cols);
            BatchStats stats;
            std::vector<Prediction> predictions;
            {
                py::gil_scoped_release release;
                predictions =
                    classify_batch(index, {q.data(), rows, cols}, block_rows, workers, &stats);
            }
            return predictions_to_dict(predictions, &stats);
        },
        py::arg("train"), py::arg("train_labels"), py::arg("queries"),
        py::arg("block_rows") = 256, py::arg("workers") = 0,
        "Exact cosine nearest-neighbor classification of each query row");

    m.def(
        "oracle_classify",
        [](const FloatMatrix& train, const ByteVector& train_labels, const FloatMatrix& queries) {
            const TrainIndex index = make_index(train, train_labels);
            std::size_t rows = 0, cols = 0;
            const std::vector<float> q = matrix_to_vector(queries, rows, cols);
            std::vector<Prediction> predictions;
            {
                py::gil_scoped_release release;
                predictions = oracle_classify(index, {q.data(), rows, cols});
            }
            return predictions_to_dict(predictions, nullptr);
        },
        py::arg("train"), py::arg("train_labels"), py::arg("queries"),
        "Naive reference classifier (two nested loops)");

    m.def(
        "kfold_split",
        [](const ByteVector& labels, std::uint32_t k, std::uint64_t seed, bool stratified) {
            const auto label_vec = labels_to_vector(labels);
            const FoldPlan plan = kfold_split(label_vec, k, seed, stratified);
            py::dict out;
            out["fold_assignment"] = vector_to_labels(plan.fold_assignment);
            out["k"] = plan.k;
            out["seed"] = plan.seed;
            out["stratified"] = plan.stratified;
            out["fell_back_to_unstratified"] = plan.fell_back_to_unstratified;
            return out;
        },
        py::arg("labels"), py::arg("k"), py::arg("seed") = 42, py::arg("stratified") = true,
        "Deterministic round-robin fold assignment after a seeded shuffle");

    m.def(
        "confusion",
        [](const ByteVector& predicted, const ByteVector& truth) {
            return counts_to_dict(confusion(labels_to_vector(predicted), labels_to_vector(truth)));
        },
        py::arg("predicted"), py::arg("truth"), "TP/TN/FP/FN tallies (attack = positive)");

    m.def(
        "metrics",
        [](std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
            return metrics_to_dict(metrics({tp, tn, fp, fn}));
        },
        py::arg("tp"), py::arg("tn"), py::arg("fp"), py::arg("fn"),
        "Precision, recall, accuracy and F-measure from confusion counts");

    m.def(
        "cross_validate",
        [](const FlowDataset& ds, std::uint32_t folds, std::uint64_t seed,
           const std::string& fit_scope, bool stratified, std::size_t block_rows, int workers) {
            CrossValidateOptions opts;
            opts.folds = folds;
            opts.seed = seed;
            opts.fit_scope = fit_scope_from_string(fit_scope);
            opts.stratified = stratified;
            opts.block_rows = block_rows;
            opts.workers = workers;
            EvalResult result;
            {
                py::gil_scoped_release release;
                result = cross_validate(ds, opts);
            }
            py::dict out;
            py::list per_fold;
            for (const auto& fold : result.per_fold) {
                py::dict entry = counts_to_dict(fold.counts);
                entry["metrics"] = metrics_to_dict(fold.scores);
                per_fold.append(entry);
            }
            out["folds"] = per_fold;
            out["average"] = metrics_to_dict(result.averaged);
            py::dict pooled = counts_to_dict(result.pooled);
            pooled["metrics"] = metrics_to_dict(result.pooled_metrics);
            out["pooled"] = pooled;
            out["tie_count"] = result.tie_count;
            out["zero_rows"] = result.zero_rows;
            out["rows"] = result.rows;
            out["benign"] = result.benign;
            out["attack"] = result.attack;
            out["stratified"] = result.stratified;
            out["stratified_fallback"] = result.fell_back_to_unstratified;
            out["wall_time_seconds"] = result.wall_time_seconds;
            return out;
        },
        py::arg("dataset"), py::arg("folds") = 5, py::arg("seed") = 42,
        py::arg("fit_scope") = "whole-dataset", py::arg("stratified") = true,
        py::arg("block_rows") = 256, py::arg("workers") = 0,
        "k-fold cross-validation of the nearest-neighbor classifier");

    m.def(
        "write_cache",
        [](const std::string& path, const FloatMatrix& features, const ByteVector& labels) {
            std::size_t rows = 0, cols = 0;
            const std::vector<float> m = matrix_to_vector(features, rows, cols);
            const auto label_vec = labels_to_vector(labels);
            if (label_vec.size() != rows)
                throw std::runtime_error("labels length does not match feature rows");
            write_cache(path, m.data(), rows, cols, label_vec.data());
        },
        py::arg("path"), py::arg("features"), py::arg("labels"),
        "Write a normalized matrix in the binary cache format");

    m.def(
        "read_cache",
        [](const std::string& path) {
            const CachedMatrix cached = read_cache(path);
            return py::make_tuple(
                vector_to_matrix(cached.features, cached.rows(), cached.columns),
                vector_to_labels(cached.labels));
        },
        py::arg("path"), "Read a binary cache file; returns (features, labels)");

    m.attr("__version__") = "0.1.0";
}
