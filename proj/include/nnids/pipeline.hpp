#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nnids/normalize.hpp"
#include "nnids/report.hpp"

namespace nnids {

enum class OutputFormat { Json, Csv };

OutputFormat output_format_from_string(std::string_view name);
const char* to_string(OutputFormat format);

/// One run's worth of configuration, shared by the summarize/cache/evaluate
/// commands. Flags on the CLI mirror these fields.
struct RunConfig {
    std::vector<std::string> inputs;
    std::string label_column = "Label";
    std::string timestamp_column = "Timestamp";
    std::string benign_token = "Benign";
    std::uint32_t folds = 5;
    std::uint64_t seed = 42;
    std::optional<std::uint64_t> subsample;  // per-file row cap
    FitScope fit_scope = FitScope::WholeDataset;
    bool stratified = true;
    std::size_t block_rows = 256;
    int workers = 0;  // 0 = hardware concurrency
    std::string output_path;
    OutputFormat output_format = OutputFormat::Json;

    /// Throws on invalid combinations (folds < 2, subsample < folds, ...).
    void validate() const;
};

/// Parses, cleans and summarizes every input; returns the full summary
/// report (per-file summaries plus the combined one).
ordered_json run_summarize(const RunConfig& config);

/// Cleans, normalizes and writes one cache file per input into the directory
/// given by output_path (or next to each input when empty). Returns the
/// written paths. Re-running with the same config overwrites byte-identically.
std::vector<std::string> run_cache(const RunConfig& config);

/// The full pipeline: ingest -> optional stratified subsample -> k-fold
/// cross-validation per input file and, when several files are given, on
/// their concatenation (reported as "All data"). Returns the evaluate report.
ordered_json run_evaluate(const RunConfig& config);

}  // namespace nnids
