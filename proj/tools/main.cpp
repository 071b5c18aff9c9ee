// nnids: benign/attack flow classification with exact cosine nearest
// neighbors. Subcommands: summarize (dataset statistics), cache (normalized
// binary matrices), evaluate (k-fold cross-validation report).

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "nnids/pipeline.hpp"

namespace {

struct CliOptions {
    nnids::RunConfig config;
    std::string fit_scope = "whole-dataset";
    std::string format = "json";
};

void add_common_flags(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("inputs", opts.config.inputs, "Input CSV files")
        ->required()
        ->expected(-1);
    cmd->add_option("--label-column", opts.config.label_column,
                    "Name of the label column (default: Label)");
    cmd->add_option("--timestamp-column", opts.config.timestamp_column,
                    "Name of the timestamp column to drop (default: Timestamp)");
    cmd->add_option("--benign-token", opts.config.benign_token,
                    "Label value treated as benign (default: Benign)");
    cmd->add_option("--output", opts.config.output_path,
                    "Output report file (cache: output directory)");
    cmd->add_option("--format", opts.format, "Report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

void add_data_flags(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--subsample", opts.config.subsample,
                    "Per-file stratified row cap applied before normalization");
    cmd->add_option("--seed", opts.config.seed, "Seed for folds and subsampling (default: 42)");
    cmd->add_option("--workers", opts.config.workers,
                    "Worker threads, 0 = all cores (env: NNIDS_WORKERS)")
        ->envname("NNIDS_WORKERS");
    cmd->add_option("--fit-scope", opts.fit_scope, "Where normalization statistics are fitted")
        ->check(CLI::IsMember({"whole-dataset", "train-fold-only"}));
}

void add_eval_flags(CLI::App* cmd, CliOptions& opts) {
    cmd->add_option("--folds", opts.config.folds, "Number of cross-validation folds (default: 5)");
    cmd->add_flag("--stratified,!--no-stratified", opts.config.stratified,
                  "Stratify folds by binary class (default: on)");
    cmd->add_option("--block-rows", opts.config.block_rows,
                    "Query rows per classification block (default: 256)");
}

void write_report(const nnids::RunConfig& config, const nnids::ordered_json& report,
                  const std::string& csv) {
    if (config.output_path.empty()) return;
    const std::string content =
        config.output_format == nnids::OutputFormat::Json ? report.dump(2) + "\n" : csv;
    nnids::write_file_atomic(config.output_path, content);
    std::cerr << "report written to " << config.output_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact nearest-neighbor classification of benign vs attack network flows"};
    app.set_version_flag("--version", "nnids 0.1.0");
    app.require_subcommand(1);

    CliOptions opts;
    CLI::App* summarize = app.add_subcommand(
        "summarize", "Clean the inputs and report per-label sample counts");
    add_common_flags(summarize, opts);

    CLI::App* cache = app.add_subcommand(
        "cache", "Write cleaned, normalized matrices as binary cache files");
    add_common_flags(cache, opts);
    add_data_flags(cache, opts);

    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Run k-fold cross-validation and report the metrics");
    add_common_flags(evaluate, opts);
    add_data_flags(evaluate, opts);
    add_eval_flags(evaluate, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        opts.config.fit_scope = nnids::fit_scope_from_string(opts.fit_scope);
        opts.config.output_format = nnids::output_format_from_string(opts.format);
        if (summarize->parsed()) {
            const auto report = nnids::run_summarize(opts.config);
            std::cout << nnids::render_summary_table(report);
            write_report(opts.config, report, nnids::summary_report_to_csv(report));
        } else if (cache->parsed()) {
            const auto written = nnids::run_cache(opts.config);
            for (const auto& path : written) std::cout << path << "\n";
        } else if (evaluate->parsed()) {
            const auto report = nnids::run_evaluate(opts.config);
            std::cout << nnids::render_results_table(report);
            write_report(opts.config, report, nnids::evaluate_report_to_csv(report));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
