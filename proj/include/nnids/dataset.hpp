#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nnids/csv.hpp"

namespace nnids {

struct CleanOptions {
    std::string label_column = "Label";
    std::string timestamp_column = "Timestamp";
    std::string benign_token = "Benign";
    // When false, constant-column removal is deferred (used before
    // concatenating several files, where the decision is made on the
    // combined rows instead).
    bool drop_constant_columns = true;
};

/// Per-source-file accounting carried through the pipeline.
struct ProvenanceEntry {
    std::string path;
    std::uint64_t raw_rows = 0;           // data rows presented to clean()
    std::uint64_t duplicate_headers = 0;  // header lines repeated mid-file
    std::uint64_t malformed_rows = 0;     // ragged rows dropped at parse
    std::uint64_t dropped_rows = 0;       // rows dropped by cleaning rules
    std::uint64_t retained_rows = 0;
};

/// Cleaned numeric dataset: a dense row-major float matrix with binary
/// labels. Feature cells are stored as 32-bit floats; all statistics later in
/// the pipeline accumulate in 64-bit. The original label strings are kept
/// interned (label_names + per-row label_ids) for summaries and stratified
/// subsampling.
struct FlowDataset {
    std::vector<float> features;  // rows() * cols(), row-major
    std::vector<std::uint8_t> labels;
    std::vector<std::string> column_names;

    std::vector<std::string> label_names;     // distinct labels, first-seen order
    std::vector<std::uint16_t> label_ids;     // per row, index into label_names
    std::vector<ProvenanceEntry> provenance;  // one entry per source file
    std::vector<std::string> dropped_columns;

    std::size_t rows() const { return labels.size(); }
    std::size_t cols() const { return column_names.size(); }
    std::span<const float> row(std::size_t i) const {
        return {features.data() + i * cols(), cols()};
    }
};

/// Summary of a cleaned dataset in the shape of the dataset's published
/// statistics table: per-label sample counts plus drop accounting.
struct DatasetSummary {
    std::string source;  // file path, or "combined"
    std::vector<std::pair<std::string, std::uint64_t>> per_label_counts;
    std::uint64_t benign_count = 0;
    std::uint64_t attack_count = 0;
    std::uint64_t dropped_rows = 0;      // cleaning drops + malformed rows
    std::uint64_t duplicate_headers = 0;
    std::vector<std::string> dropped_columns;
};

/// 0 for the benign token (trimmed, case-insensitive), 1 for anything else.
std::uint8_t binarize_label(std::string_view label, std::string_view benign_token);
std::vector<std::uint8_t> binarize_labels(const std::vector<std::string>& labels,
                                          std::string_view benign_token);

/// Applies the cleaning rules to a parsed table:
///   - the timestamp column is removed (if present);
///   - columns that are empty in every row are removed;
///   - rows with an empty cell, a non-numeric feature cell, or a cell that is
///     NaN/infinite (also after conversion to float) are dropped and counted;
///   - columns constant across the retained rows are removed (unless
///     deferred via CleanOptions);
///   - the label column is consumed into binary labels.
/// Throws if the label column is missing, if no rows survive, or if no
/// feature columns survive.
FlowDataset clean(const RawTable& raw, const CleanOptions& options = {});

/// Removes columns whose retained values are all identical. Names of removed
/// columns are appended to dropped_columns.
void drop_constant_columns(FlowDataset& dataset);

/// Stacks datasets in argument order. All inputs must agree on column names
/// and order; otherwise throws naming the two differing schemas.
FlowDataset concat(const std::vector<FlowDataset>& datasets);

/// Seeded stratified subsample of at most `cap` rows, stratified by original
/// label string so rare attack classes survive. Quotas are proportional
/// (largest remainder), with one row guaranteed per present label when the
/// cap allows. Row order of the selection follows the input dataset.
FlowDataset subsample_stratified(const FlowDataset& dataset, std::uint64_t cap,
                                 std::uint64_t seed);

/// Builds the summary for a cleaned dataset. `raw` is the table the dataset
/// was cleaned from; it supplies the row-accounting cross-check.
DatasetSummary summarize(const RawTable& raw, const FlowDataset& cleaned,
                         std::string_view benign_token = "Benign");

/// Summary straight from a cleaned dataset (row accounting from provenance).
DatasetSummary summarize(const FlowDataset& cleaned, std::string_view benign_token = "Benign");

/// Merges per-file summaries into a combined one (counts summed, dropped
/// column lists unioned).
DatasetSummary combine_summaries(const std::vector<DatasetSummary>& summaries,
                                 std::string_view benign_token = "Benign");

}  // namespace nnids
