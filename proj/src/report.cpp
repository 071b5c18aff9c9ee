#include "nnids/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nnids {

double round6(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return std::strtod(buffer, nullptr);
}

namespace {

ordered_json metrics_json(const Metrics& m) {
    return ordered_json{{"accuracy", round6(m.accuracy)},
                        {"f_measure", round6(m.f_measure)},
                        {"precision", round6(m.precision)},
                        {"recall", round6(m.recall)}};
}

std::string fixed6(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6f", value);
    return buffer;
}

std::string fixed4(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    return buffer;
}

void append_padded(std::string& out, const std::string& text, std::size_t width) {
    out += text;
    if (text.size() < width) out.append(width - text.size(), ' ');
}

}  // namespace

ordered_json summary_to_json(const DatasetSummary& summary) {
    ordered_json labels = ordered_json::array();
    for (const auto& [label, count] : summary.per_label_counts)
        labels.push_back(ordered_json{{"label", label}, {"count", count}});
    return ordered_json{{"source", summary.source},
                        {"rows", summary.benign_count + summary.attack_count},
                        {"labels", std::move(labels)},
                        {"benign", summary.benign_count},
                        {"attack", summary.attack_count},
                        {"dropped_rows", summary.dropped_rows},
                        {"duplicate_headers", summary.duplicate_headers},
                        {"dropped_columns", summary.dropped_columns}};
}

ordered_json eval_result_to_json(const std::string& dataset_name, const EvalResult& result,
                                 std::size_t columns,
                                 const std::vector<std::string>& dropped_columns) {
    ordered_json folds = ordered_json::array();
    for (std::size_t f = 0; f < result.per_fold.size(); ++f) {
        const auto& fr = result.per_fold[f];
        ordered_json row{{"fold", f},
                         {"tp", fr.counts.tp},
                         {"tn", fr.counts.tn},
                         {"fp", fr.counts.fp},
                         {"fn", fr.counts.fn}};
        row.update(metrics_json(fr.scores));
        folds.push_back(std::move(row));
    }
    ordered_json pooled{{"tp", result.pooled.tp},
                        {"tn", result.pooled.tn},
                        {"fp", result.pooled.fp},
                        {"fn", result.pooled.fn}};
    pooled.update(metrics_json(result.pooled_metrics));

    return ordered_json{{"dataset", dataset_name},
                        {"rows", result.rows},
                        {"benign", result.benign},
                        {"attack", result.attack},
                        {"columns", columns},
                        {"dropped_columns", dropped_columns},
                        {"stratified", result.stratified},
                        {"stratified_fallback", result.fell_back_to_unstratified},
                        {"folds", std::move(folds)},
                        {"average", metrics_json(result.averaged)},
                        {"pooled", std::move(pooled)},
                        {"tie_count", result.tie_count},
                        {"zero_rows", result.zero_rows},
                        {"wall_time_seconds", round6(result.wall_time_seconds)}};
}

std::string evaluate_report_to_csv(const ordered_json& report) {
    std::ostringstream out;
    out << "dataset,fold,accuracy,f_measure,precision,recall\n";
    for (const auto& result : report.at("results")) {
        const std::string name = result.at("dataset").get<std::string>();
        for (const auto& fold : result.at("folds")) {
            out << name << ',' << fold.at("fold").get<std::uint64_t>() << ','
                << fixed6(fold.at("accuracy").get<double>()) << ','
                << fixed6(fold.at("f_measure").get<double>()) << ','
                << fixed6(fold.at("precision").get<double>()) << ','
                << fixed6(fold.at("recall").get<double>()) << '\n';
        }
        const auto& avg = result.at("average");
        out << name << ",average," << fixed6(avg.at("accuracy").get<double>()) << ','
            << fixed6(avg.at("f_measure").get<double>()) << ','
            << fixed6(avg.at("precision").get<double>()) << ','
            << fixed6(avg.at("recall").get<double>()) << '\n';
    }
    return out.str();
}

std::string summary_report_to_csv(const ordered_json& report) {
    std::ostringstream out;
    out << "file,label,count\n";
    auto emit = [&out](const std::string& name, const ordered_json& summary) {
        for (const auto& entry : summary.at("labels")) {
            out << name << ',' << entry.at("label").get<std::string>() << ','
                << entry.at("count").get<std::uint64_t>() << '\n';
        }
    };
    for (const auto& file : report.at("files"))
        emit(file.at("source").get<std::string>(), file);
    const auto& combined = report.at("combined");
    emit("combined", combined);
    out << "binary,Benign," << combined.at("benign").get<std::uint64_t>() << '\n';
    out << "binary,Attack," << combined.at("attack").get<std::uint64_t>() << '\n';
    return out.str();
}

std::string render_results_table(const ordered_json& report) {
    constexpr std::size_t name_width = 18;
    constexpr std::size_t col_width = 11;
    std::string out;
    append_padded(out, "Data File", name_width);
    for (const char* column : {"Accuracy", "F-measure", "Precision", "Recall"})
        append_padded(out, column, col_width);
    out += '\n';
    std::uint64_t ties = 0;
    for (const auto& result : report.at("results")) {
        append_padded(out, result.at("dataset").get<std::string>(), name_width);
        const auto& avg = result.at("average");
        append_padded(out, fixed4(avg.at("accuracy").get<double>()), col_width);
        append_padded(out, fixed4(avg.at("f_measure").get<double>()), col_width);
        append_padded(out, fixed4(avg.at("precision").get<double>()), col_width);
        append_padded(out, fixed4(avg.at("recall").get<double>()), col_width);
        out += '\n';
        ties += result.at("tie_count").get<std::uint64_t>();
    }
    out += "argmax ties: " + std::to_string(ties) + "\n";
    return out;
}

std::string render_summary_table(const ordered_json& report) {
    constexpr std::size_t name_width = 18;
    constexpr std::size_t label_width = 24;
    std::string out;
    append_padded(out, "Data File", name_width);
    append_padded(out, "Traffic Type", label_width);
    out += "Samples\n";
    auto emit = [&](const std::string& name, const ordered_json& summary) {
        bool first = true;
        for (const auto& entry : summary.at("labels")) {
            append_padded(out, first ? name : std::string(), name_width);
            append_padded(out, entry.at("label").get<std::string>(), label_width);
            out += std::to_string(entry.at("count").get<std::uint64_t>());
            out += '\n';
            first = false;
        }
    };
    for (const auto& file : report.at("files"))
        emit(std::filesystem::path(file.at("source").get<std::string>()).filename().string(),
             file);
    const auto& combined = report.at("combined");
    append_padded(out, "Binary Class", name_width);
    append_padded(out, "Benign", label_width);
    out += std::to_string(combined.at("benign").get<std::uint64_t>()) + "\n";
    append_padded(out, std::string(), name_width);
    append_padded(out, "Attack", label_width);
    out += std::to_string(combined.at("attack").get<std::uint64_t>()) + "\n";
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            out.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot move output into place: " + path);
    }
}

}  // namespace nnids
