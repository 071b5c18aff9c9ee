#include "nnids/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <stdexcept>

#include "nnids/cache.hpp"
#include "nnids/csv.hpp"
#include "nnids/digest.hpp"

namespace nnids {

namespace fs = std::filesystem;

OutputFormat output_format_from_string(std::string_view name) {
    if (name == "json") return OutputFormat::Json;
    if (name == "csv") return OutputFormat::Csv;
    throw std::runtime_error("unknown output format: " + std::string(name));
}

const char* to_string(OutputFormat format) {
    return format == OutputFormat::Json ? "json" : "csv";
}

void RunConfig::validate() const {
    if (inputs.empty()) throw std::runtime_error("config error: no input files given");
    if (folds < 2) throw std::runtime_error("config error: folds must be at least 2");
    if (block_rows == 0) throw std::runtime_error("config error: block-rows must be positive");
    if (subsample && *subsample < folds)
        throw std::runtime_error("config error: subsample must be at least the fold count");
    if (workers < 0) throw std::runtime_error("config error: workers must be non-negative");
}

namespace {

ordered_json config_json(const RunConfig& config, const char* command) {
    ordered_json j{{"command", command},
                   {"inputs", config.inputs},
                   {"label_column", config.label_column},
                   {"timestamp_column", config.timestamp_column},
                   {"benign_token", config.benign_token},
                   {"folds", config.folds},
                   {"seed", config.seed}};
    if (config.subsample)
        j["subsample"] = *config.subsample;
    else
        j["subsample"] = nullptr;
    j["fit_scope"] = to_string(config.fit_scope);
    j["stratified"] = config.stratified;
    j["block_rows"] = config.block_rows;
    j["workers"] = config.workers;
    j["output_format"] = to_string(config.output_format);
    return j;
}

CleanOptions clean_options(const RunConfig& config, bool drop_constants) {
    CleanOptions opts;
    opts.label_column = config.label_column;
    opts.timestamp_column = config.timestamp_column;
    opts.benign_token = config.benign_token;
    opts.drop_constant_columns = drop_constants;
    return opts;
}

struct LoadedInput {
    FlowDataset dataset;  // row-cleaned; constant-column removal deferred
    ordered_json info;    // per-input provenance for the report
};

// Parse + row-level cleaning + optional subsample for one input file.
LoadedInput load_input(const RunConfig& config, const std::string& path) {
    LoadedInput input;
    const std::string digest = sha256_file(path);
    {
        RawTable raw = parse_csv(path);
        input.dataset = clean(raw, clean_options(config, false));
    }
    const ProvenanceEntry& prov = input.dataset.provenance.front();
    input.info = ordered_json{{"path", path},
                              {"sha256", digest},
                              {"raw_rows", prov.raw_rows},
                              {"duplicate_headers", prov.duplicate_headers},
                              {"malformed_rows", prov.malformed_rows},
                              {"dropped_rows", prov.dropped_rows},
                              {"retained_rows", prov.retained_rows}};
    if (config.subsample) {
        input.dataset = subsample_stratified(input.dataset, *config.subsample, config.seed);
        input.info["subsampled_rows"] = input.dataset.rows();
    }
    return input;
}

std::string dataset_display_name(const std::string& path) {
    const std::string name = fs::path(path).filename().string();
    return name.empty() ? path : name;
}

bool is_cache_path(const std::string& path) {
    return fs::path(path).extension() == ".nnids";
}

}  // namespace

ordered_json run_summarize(const RunConfig& config) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    for (const auto& path : config.inputs) {
        if (is_cache_path(path))
            throw std::runtime_error(
                "config error: summarize reads CSV inputs, not cache files: " + path);
    }

    ordered_json files = ordered_json::array();
    std::vector<DatasetSummary> summaries;
    for (const auto& path : config.inputs) {
        const std::string digest = sha256_file(path);
        RawTable raw = parse_csv(path);
        FlowDataset cleaned = clean(raw, clean_options(config, true));
        DatasetSummary summary = summarize(raw, cleaned, config.benign_token);
        ordered_json j = summary_to_json(summary);
        j["sha256"] = digest;
        files.push_back(std::move(j));
        summaries.push_back(std::move(summary));
    }
    const DatasetSummary combined = combine_summaries(summaries, config.benign_token);

    ordered_json report{{"schema", "nnids-summary/1"},
                        {"config", config_json(config, "summarize")},
                        {"files", std::move(files)},
                        {"combined", summary_to_json(combined)}};
    report["wall_time_seconds"] = round6(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
    return report;
}

std::vector<std::string> run_cache(const RunConfig& config) {
    config.validate();
    for (const auto& path : config.inputs) {
        if (is_cache_path(path))
            throw std::runtime_error("config error: input is already a cache file: " + path);
    }
    std::vector<std::string> written;
    for (const auto& path : config.inputs) {
        LoadedInput input = load_input(config, path);
        drop_constant_columns(input.dataset);
        const UnitSphereDataset unit =
            normalize(input.dataset, config.fit_scope, config.workers);

        fs::path out_dir = config.output_path.empty() ? fs::path(path).parent_path()
                                                      : fs::path(config.output_path);
        if (!config.output_path.empty()) fs::create_directories(out_dir);
        fs::path out_path = out_dir / (fs::path(path).stem().string() + ".nnids");
        write_cache(out_path.string(), unit.features.data(), unit.rows(), unit.columns,
                    unit.labels.data());
        written.push_back(out_path.string());
    }
    return written;
}

ordered_json run_evaluate(const RunConfig& config) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    CrossValidateOptions cv;
    cv.folds = config.folds;
    cv.seed = config.seed;
    cv.fit_scope = config.fit_scope;
    cv.stratified = config.stratified;
    cv.block_rows = config.block_rows;
    cv.workers = config.workers;

    ordered_json inputs_info = ordered_json::array();
    ordered_json results = ordered_json::array();
    std::vector<FlowDataset> row_cleaned;  // kept for the combined run

    // The combined "All data" run needs the row-cleaned CSV datasets; cache
    // inputs are already normalized per file and are evaluated standalone.
    bool any_cache = false;
    for (const auto& path : config.inputs) any_cache |= is_cache_path(path);
    if (any_cache && config.subsample)
        throw std::runtime_error("config error: subsample is not supported for cache inputs");
    const bool combined_run = config.inputs.size() > 1 && !any_cache;

    for (const auto& path : config.inputs) {
        if (is_cache_path(path)) {
            const std::string digest = sha256_file(path);
            const CachedMatrix cached = read_cache(path);
            inputs_info.push_back(ordered_json{{"path", path},
                                               {"sha256", digest},
                                               {"retained_rows", cached.rows()}});
            const EvalResult result = cross_validate_normalized(
                {cached.features.data(), cached.rows(), cached.columns}, cached.labels, cv);
            results.push_back(eval_result_to_json(dataset_display_name(path), result,
                                                  cached.columns, {}));
            continue;
        }

        LoadedInput input = load_input(config, path);
        inputs_info.push_back(std::move(input.info));

        FlowDataset per_file;
        if (combined_run)
            per_file = input.dataset;  // keep the row-cleaned original for "All data"
        else
            per_file = std::move(input.dataset);
        drop_constant_columns(per_file);
        EvalResult result = cross_validate(per_file, cv);
        results.push_back(eval_result_to_json(dataset_display_name(path), result,
                                              per_file.cols(), per_file.dropped_columns));

        if (combined_run) row_cleaned.push_back(std::move(input.dataset));
    }

    if (combined_run) {
        FlowDataset all = concat(row_cleaned);
        row_cleaned.clear();
        drop_constant_columns(all);
        EvalResult result = cross_validate(all, cv);
        results.push_back(eval_result_to_json("All data", result, all.cols(),
                                              all.dropped_columns));
    }

    ordered_json report{{"schema", "nnids-evaluate/1"},
                        {"config", config_json(config, "evaluate")},
                        {"inputs", std::move(inputs_info)},
                        {"results", std::move(results)}};
    report["wall_time_seconds"] = round6(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
    return report;
}

}  // namespace nnids
