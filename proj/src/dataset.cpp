#include "nnids/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "nnids/rng.hpp"

namespace nnids {

namespace {

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    }
    return true;
}

// Parses a trimmed cell as a double. Returns false for empty cells, trailing
// garbage, or values that are not finite (also after the cast to float).
bool parse_numeric_cell(std::string_view cell, float& out) {
    if (cell.empty()) return false;
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto result = std::from_chars(begin, end, value);
    if (result.ec != std::errc{} || result.ptr != end) return false;
    if (!std::isfinite(value)) return false;
    const float narrowed = static_cast<float>(value);
    if (!std::isfinite(narrowed)) return false;
    out = narrowed;
    return true;
}

int find_column(const std::vector<std::string>& header, std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim_view(header[i]) == trim_view(name)) return static_cast<int>(i);
    }
    return -1;
}

std::string describe_schema(const FlowDataset& d) {
    std::string s = d.provenance.empty() ? std::string("<unnamed>") : d.provenance.front().path;
    s += " (" + std::to_string(d.cols()) + " columns)";
    return s;
}

void sort_label_counts(std::vector<std::pair<std::string, std::uint64_t>>& counts,
                       std::string_view benign_token) {
    std::sort(counts.begin(), counts.end(), [&](const auto& a, const auto& b) {
        const int ba = binarize_label(a.first, benign_token);
        const int bb = binarize_label(b.first, benign_token);
        if (ba != bb) return ba < bb;
        return a.first < b.first;
    });
}

}  // namespace

std::uint8_t binarize_label(std::string_view label, std::string_view benign_token) {
    return iequals(trim_view(label), trim_view(benign_token)) ? 0 : 1;
}

std::vector<std::uint8_t> binarize_labels(const std::vector<std::string>& labels,
                                          std::string_view benign_token) {
    std::vector<std::uint8_t> out;
    out.reserve(labels.size());
    for (const auto& label : labels) out.push_back(binarize_label(label, benign_token));
    return out;
}

FlowDataset clean(const RawTable& raw, const CleanOptions& options) {
    const int label_col = find_column(raw.header, options.label_column);
    if (label_col < 0)
        throw std::runtime_error("label column '" + options.label_column + "' not found in " +
                                 raw.source_path);
    const int timestamp_col = find_column(raw.header, options.timestamp_column);

    FlowDataset ds;
    ProvenanceEntry prov;
    prov.path = raw.source_path;
    prov.raw_rows = raw.row_count();
    prov.duplicate_headers = raw.duplicate_header_lines;
    prov.malformed_rows = raw.malformed_rows;

    // Column selection. The timestamp plays no role in classification, and
    // columns with no values at all cannot contribute cells to keep.
    std::vector<std::uint32_t> kept;
    for (std::size_t i = 0; i < raw.header.size(); ++i) {
        if (static_cast<int>(i) == label_col) continue;
        if (static_cast<int>(i) == timestamp_col) {
            ds.dropped_columns.push_back(raw.header[i]);
            continue;
        }
        if (raw.row_count() > 0 && !raw.column_has_value[i]) {
            ds.dropped_columns.push_back(raw.header[i]);
            continue;
        }
        kept.push_back(static_cast<std::uint32_t>(i));
    }
    if (kept.empty())
        throw std::runtime_error("no feature columns remain after cleaning: " + raw.source_path);

    for (const std::uint32_t i : kept) ds.column_names.push_back(raw.header[i]);

    std::unordered_map<std::string, std::uint16_t> label_index;
    std::vector<std::string> cells;
    std::vector<float> row_buffer(kept.size());
    ds.features.reserve(raw.row_count() * kept.size());

    for (const auto& line : raw.lines) {
        split_csv_line(line, cells);
        bool ok = true;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            if (!parse_numeric_cell(trim_view(cells[kept[k]]), row_buffer[k])) {
                ok = false;
                break;
            }
        }
        const std::string_view label = trim_view(cells[static_cast<std::size_t>(label_col)]);
        if (!ok || label.empty()) {
            ++prov.dropped_rows;
            continue;
        }

        auto it = label_index.find(std::string(label));
        if (it == label_index.end()) {
            if (ds.label_names.size() >= UINT16_MAX)
                throw std::runtime_error("too many distinct labels in " + raw.source_path);
            it = label_index.emplace(std::string(label),
                                     static_cast<std::uint16_t>(ds.label_names.size()))
                     .first;
            ds.label_names.emplace_back(label);
        }
        ds.label_ids.push_back(it->second);
        ds.labels.push_back(binarize_label(label, options.benign_token));
        ds.features.insert(ds.features.end(), row_buffer.begin(), row_buffer.end());
    }

    prov.retained_rows = ds.rows();
    ds.provenance.push_back(std::move(prov));
    if (ds.rows() == 0)
        throw std::runtime_error("empty dataset after cleaning: " + raw.source_path);

    if (options.drop_constant_columns) drop_constant_columns(ds);
    return ds;
}

void drop_constant_columns(FlowDataset& dataset) {
    const std::size_t rows = dataset.rows();
    const std::size_t cols = dataset.cols();
    if (rows == 0 || cols == 0) return;

    std::vector<std::uint32_t> kept;
    std::vector<std::string> removed;
    for (std::size_t k = 0; k < cols; ++k) {
        const float first = dataset.features[k];
        bool constant = true;
        for (std::size_t j = 1; j < rows; ++j) {
            if (dataset.features[j * cols + k] != first) {
                constant = false;
                break;
            }
        }
        if (constant) {
            removed.push_back(dataset.column_names[k]);
        } else {
            kept.push_back(static_cast<std::uint32_t>(k));
        }
    }
    if (removed.empty()) return;
    if (kept.empty())
        throw std::runtime_error("no feature columns remain after cleaning (all constant)");

    // Compact in place; the write cursor never overtakes the read cursor.
    const std::size_t new_cols = kept.size();
    float* data = dataset.features.data();
    for (std::size_t j = 0; j < rows; ++j) {
        const float* src = data + j * cols;
        float* dst = data + j * new_cols;
        for (std::size_t k = 0; k < new_cols; ++k) dst[k] = src[kept[k]];
    }
    dataset.features.resize(rows * new_cols);
    dataset.features.shrink_to_fit();

    std::vector<std::string> names;
    names.reserve(new_cols);
    for (const std::uint32_t k : kept) names.push_back(std::move(dataset.column_names[k]));
    dataset.column_names = std::move(names);
    for (auto& name : removed) dataset.dropped_columns.push_back(std::move(name));
}

FlowDataset concat(const std::vector<FlowDataset>& datasets) {
    if (datasets.empty()) throw std::runtime_error("concat: no datasets given");
    const FlowDataset& first = datasets.front();
    for (std::size_t i = 1; i < datasets.size(); ++i) {
        if (datasets[i].column_names != first.column_names)
            throw std::runtime_error("concat: column mismatch between " + describe_schema(first) +
                                     " and " + describe_schema(datasets[i]));
    }

    FlowDataset out;
    out.column_names = first.column_names;
    std::size_t total_rows = 0;
    for (const auto& d : datasets) total_rows += d.rows();
    out.features.reserve(total_rows * first.cols());
    out.labels.reserve(total_rows);
    out.label_ids.reserve(total_rows);

    std::unordered_map<std::string, std::uint16_t> label_index;
    for (const auto& d : datasets) {
        std::vector<std::uint16_t> remap(d.label_names.size());
        for (std::size_t i = 0; i < d.label_names.size(); ++i) {
            auto it = label_index.find(d.label_names[i]);
            if (it == label_index.end()) {
                it = label_index.emplace(d.label_names[i],
                                         static_cast<std::uint16_t>(out.label_names.size()))
                         .first;
                out.label_names.push_back(d.label_names[i]);
            }
            remap[i] = it->second;
        }
        out.features.insert(out.features.end(), d.features.begin(), d.features.end());
        out.labels.insert(out.labels.end(), d.labels.begin(), d.labels.end());
        for (const std::uint16_t id : d.label_ids) out.label_ids.push_back(remap[id]);
        out.provenance.insert(out.provenance.end(), d.provenance.begin(), d.provenance.end());
        for (const auto& col : d.dropped_columns) {
            if (std::find(out.dropped_columns.begin(), out.dropped_columns.end(), col) ==
                out.dropped_columns.end())
                out.dropped_columns.push_back(col);
        }
    }
    return out;
}

FlowDataset subsample_stratified(const FlowDataset& dataset, std::uint64_t cap,
                                 std::uint64_t seed) {
    const std::uint64_t rows = dataset.rows();
    if (cap == 0) throw std::runtime_error("subsample: cap must be positive");
    if (cap >= rows) return dataset;

    // Group row indices per label, visited in sorted-name order so the RNG
    // consumption does not depend on label first-seen order.
    std::vector<std::uint32_t> order(dataset.label_names.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::uint32_t>(i);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return dataset.label_names[a] < dataset.label_names[b];
    });

    std::vector<std::vector<std::uint32_t>> groups(dataset.label_names.size());
    for (std::size_t j = 0; j < rows; ++j)
        groups[dataset.label_ids[j]].push_back(static_cast<std::uint32_t>(j));

    // Proportional quotas with largest-remainder rounding.
    std::vector<std::uint64_t> quota(groups.size(), 0);
    std::vector<std::pair<std::uint64_t, std::uint32_t>> remainders;  // (remainder, label)
    std::uint64_t assigned = 0;
    for (const std::uint32_t id : order) {
        const std::uint64_t n = groups[id].size();
        quota[id] = cap * n / rows;
        assigned += quota[id];
        remainders.emplace_back(cap * n % rows, id);
    }
    std::sort(remainders.begin(), remainders.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return dataset.label_names[a.second] < dataset.label_names[b.second];
    });
    for (std::size_t i = 0; assigned < cap && i < remainders.size(); ++i) {
        const std::uint32_t id = remainders[i].second;
        if (quota[id] < groups[id].size()) {
            ++quota[id];
            ++assigned;
        }
    }
    // Keep rare labels represented when the cap allows, borrowing from the
    // largest quota.
    for (const std::uint32_t id : order) {
        if (quota[id] > 0 || groups[id].empty()) continue;
        std::uint32_t donor = UINT32_MAX;
        for (const std::uint32_t cand : order) {
            if (quota[cand] > 1 && (donor == UINT32_MAX || quota[cand] > quota[donor]))
                donor = cand;
        }
        if (donor == UINT32_MAX) break;
        --quota[donor];
        quota[id] = 1;
    }

    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> selected;
    selected.reserve(cap);
    for (const std::uint32_t id : order) {
        auto& indices = groups[id];
        deterministic_shuffle(indices, rng);
        for (std::uint64_t i = 0; i < quota[id]; ++i) selected.push_back(indices[i]);
    }
    std::sort(selected.begin(), selected.end());

    FlowDataset out;
    out.column_names = dataset.column_names;
    out.label_names = dataset.label_names;
    out.provenance = dataset.provenance;
    out.dropped_columns = dataset.dropped_columns;
    const std::size_t cols = dataset.cols();
    out.features.reserve(selected.size() * cols);
    out.labels.reserve(selected.size());
    out.label_ids.reserve(selected.size());
    for (const std::uint32_t j : selected) {
        const float* src = dataset.features.data() + static_cast<std::size_t>(j) * cols;
        out.features.insert(out.features.end(), src, src + cols);
        out.labels.push_back(dataset.labels[j]);
        out.label_ids.push_back(dataset.label_ids[j]);
    }
    return out;
}

DatasetSummary summarize(const FlowDataset& cleaned, std::string_view benign_token) {
    DatasetSummary summary;
    summary.source =
        cleaned.provenance.size() == 1 ? cleaned.provenance.front().path : "combined";

    std::vector<std::uint64_t> tally(cleaned.label_names.size(), 0);
    for (const std::uint16_t id : cleaned.label_ids) ++tally[id];
    for (std::size_t i = 0; i < tally.size(); ++i) {
        if (tally[i] > 0) summary.per_label_counts.emplace_back(cleaned.label_names[i], tally[i]);
    }
    sort_label_counts(summary.per_label_counts, benign_token);

    for (const std::uint8_t label : cleaned.labels)
        label == 0 ? ++summary.benign_count : ++summary.attack_count;
    for (const auto& p : cleaned.provenance) {
        summary.dropped_rows += p.dropped_rows + p.malformed_rows;
        summary.duplicate_headers += p.duplicate_headers;
    }
    summary.dropped_columns = cleaned.dropped_columns;
    return summary;
}

DatasetSummary summarize(const RawTable& raw, const FlowDataset& cleaned,
                         std::string_view benign_token) {
    std::uint64_t retained = 0;
    std::uint64_t dropped = 0;
    for (const auto& p : cleaned.provenance) {
        retained += p.retained_rows;
        dropped += p.dropped_rows;
    }
    if (retained + dropped != raw.row_count())
        throw std::runtime_error("summary accounting mismatch for " + raw.source_path);
    return summarize(cleaned, benign_token);
}

DatasetSummary combine_summaries(const std::vector<DatasetSummary>& summaries,
                                 std::string_view benign_token) {
    DatasetSummary combined;
    combined.source = "combined";
    std::map<std::string, std::uint64_t> counts;
    for (const auto& s : summaries) {
        for (const auto& [label, count] : s.per_label_counts) counts[label] += count;
        combined.benign_count += s.benign_count;
        combined.attack_count += s.attack_count;
        combined.dropped_rows += s.dropped_rows;
        combined.duplicate_headers += s.duplicate_headers;
        for (const auto& col : s.dropped_columns) {
            if (std::find(combined.dropped_columns.begin(), combined.dropped_columns.end(),
                          col) == combined.dropped_columns.end())
                combined.dropped_columns.push_back(col);
        }
    }
    for (auto& [label, count] : counts) combined.per_label_counts.emplace_back(label, count);
    sort_label_counts(combined.per_label_counts, benign_token);
    return combined;
}

}  // namespace nnids
