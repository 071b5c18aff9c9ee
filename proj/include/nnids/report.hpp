#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nnids/dataset.hpp"
#include "nnids/eval.hpp"

namespace nnids {

using ordered_json = nlohmann::ordered_json;

/// Rounds to 6 decimal places (the precision used for metrics in reports).
double round6(double value);

ordered_json summary_to_json(const DatasetSummary& summary);

ordered_json eval_result_to_json(const std::string& dataset_name, const EvalResult& result,
                                 std::size_t columns = 0,
                                 const std::vector<std::string>& dropped_columns = {});

/// CSV rendering of an evaluate report: one row per fold plus an average row
/// per dataset, metric columns in the order accuracy, f_measure, precision,
/// recall.
std::string evaluate_report_to_csv(const ordered_json& report);

/// CSV rendering of a summarize report: file,label,count rows for each file,
/// the combined per-label counts, and the binary class totals.
std::string summary_report_to_csv(const ordered_json& report);

/// Fixed-width results table for standard output.
std::string render_results_table(const ordered_json& report);

/// Fixed-width per-label summary table for standard output.
std::string render_summary_table(const ordered_json& report);

/// Writes content to path via a temporary file and rename, so a failed run
/// never leaves a partial output file behind.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace nnids
