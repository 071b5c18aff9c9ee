#pragma once

// Shared helpers for the test suites: temp dirs, fixture files, small
// dataset builders and deterministic random matrices.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nnids/dataset.hpp"
#include "nnids/eval.hpp"
#include "nnids/knn.hpp"
#include "nnids/rng.hpp"

namespace nnids::test {

class TempDir {
  public:
    explicit TempDir(const std::string& tag = "nnids-test") {
        auto base = std::filesystem::temp_directory_path();
        std::mt19937_64 rng(std::random_device{}());
        path_ = base / (tag + "-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// FlowDataset from explicit rows; labels double as label strings
/// ("Benign"/"Attack") so summaries and subsampling work.
inline FlowDataset make_dataset(const std::vector<std::vector<float>>& rows,
                                const std::vector<std::uint8_t>& labels) {
    FlowDataset ds;
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    for (std::size_t k = 0; k < cols; ++k) ds.column_names.push_back("f" + std::to_string(k));
    ds.label_names = {"Benign", "Attack"};
    for (std::size_t j = 0; j < rows.size(); ++j) {
        ds.features.insert(ds.features.end(), rows[j].begin(), rows[j].end());
        ds.labels.push_back(labels[j]);
        ds.label_ids.push_back(labels[j] ? 1 : 0);
    }
    ProvenanceEntry prov;
    prov.path = "<inline>";
    prov.raw_rows = rows.size();
    prov.retained_rows = rows.size();
    ds.provenance.push_back(prov);
    return ds;
}

/// Row-major matrix of unit rows drawn from a deterministic gaussian.
inline std::vector<float> random_unit_rows(std::size_t rows, std::size_t cols,
                                           std::mt19937_64& rng) {
    std::vector<float> m(rows * cols);
    for (std::size_t j = 0; j < rows; ++j) {
        double norm_sq = 0.0;
        for (std::size_t k = 0; k < cols; ++k) {
            // Box-Muller on uniform_unit keeps the draw sequence fixed.
            const double u1 = 1.0 - uniform_unit(rng);
            const double u2 = uniform_unit(rng);
            const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
            m[j * cols + k] = static_cast<float>(g);
            norm_sq += g * g;
        }
        const double norm = std::sqrt(norm_sq);
        if (norm > 0) {
            for (std::size_t k = 0; k < cols; ++k)
                m[j * cols + k] = static_cast<float>(m[j * cols + k] / norm);
        }
    }
    return m;
}

inline TrainIndex random_index(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    TrainIndex index;
    index.columns = cols;
    index.matrix = random_unit_rows(rows, cols, rng);
    index.labels.resize(rows);
    for (auto& label : index.labels) label = static_cast<std::uint8_t>(rng() & 1);
    return index;
}

/// Builds a dataset where every row has an exact duplicate of the same class
/// assigned to a *different* fold of the plan for (folds, seed, stratified).
/// Cross-validating with the same plan parameters must then classify every
/// test row via its duplicate at similarity ~1.
inline FlowDataset make_duplicate_pair_dataset(std::size_t benign_pairs,
                                               std::size_t attack_pairs, std::size_t cols,
                                               std::uint32_t folds, std::uint64_t seed,
                                               bool stratified) {
    const std::size_t rows = 2 * (benign_pairs + attack_pairs);
    std::vector<std::uint8_t> labels(rows);
    for (std::size_t j = 2 * benign_pairs; j < rows; ++j) labels[j] = 1;

    const FoldPlan plan = kfold_split(labels, folds, seed, stratified);

    // Pair same-class indices across folds: repeatedly match the two fullest
    // fold buckets, which always succeeds for near-equal bucket sizes.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (int cls = 0; cls < 2; ++cls) {
        std::vector<std::vector<std::uint32_t>> buckets(folds);
        for (std::size_t j = 0; j < rows; ++j) {
            if ((labels[j] != 0) == (cls == 1))
                buckets[plan.fold_assignment[j]].push_back(static_cast<std::uint32_t>(j));
        }
        for (;;) {
            std::size_t first = folds, second = folds;
            for (std::size_t f = 0; f < folds; ++f) {
                if (buckets[f].empty()) continue;
                if (first == folds || buckets[f].size() > buckets[first].size()) {
                    second = first;
                    first = f;
                } else if (second == folds || buckets[f].size() > buckets[second].size()) {
                    second = f;
                }
            }
            if (second == folds) break;
            pairs.emplace_back(buckets[first].back(), buckets[second].back());
            buckets[first].pop_back();
            buckets[second].pop_back();
        }
    }

    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::vector<float>> feature_rows(rows, std::vector<float>(cols));
    for (const auto& [a, b] : pairs) {
        std::vector<float> direction(cols);
        for (auto& v : direction) v = static_cast<float>(uniform_unit(rng) * 10 - 5);
        feature_rows[a] = direction;
        feature_rows[b] = direction;
    }
    return make_dataset(feature_rows, labels);
}

/// Synthetic flow CSV: gaussian features, benign cluster at 0 and attack
/// cluster shifted by `attack_shift` per feature. Optional raw-file warts.
struct SynthCsvSpec {
    std::size_t benign_rows = 100;
    std::size_t attack_rows = 100;
    std::size_t feature_columns = 4;
    double attack_shift = 4.0;
    std::uint64_t seed = 1;
    std::size_t duplicate_header_every = 0;  // insert header copy every N data rows
    std::size_t infinity_cells = 0;          // rows poisoned with an Infinity cell
    std::string attack_label = "Bot";
};

inline void write_synth_csv(const std::string& path, const SynthCsvSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::ostringstream out;
    std::string header = "Dst Port,Flow Duration";
    for (std::size_t k = 2; k < spec.feature_columns; ++k)
        header += ",Feat " + std::to_string(k);
    header += ",Timestamp,Label";
    out << header << "\n";

    const std::size_t total = spec.benign_rows + spec.attack_rows;
    std::size_t poisoned = 0;
    for (std::size_t i = 0; i < total; ++i) {
        const bool attack = i >= spec.benign_rows;
        if (spec.duplicate_header_every && i > 0 && i % spec.duplicate_header_every == 0)
            out << header << "\n";
        for (std::size_t k = 0; k < spec.feature_columns; ++k) {
            const double u1 = 1.0 - uniform_unit(rng);
            const double u2 = uniform_unit(rng);
            double v = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
            if (attack) v += spec.attack_shift;
            if (k == 1 && poisoned < spec.infinity_cells) {
                out << "Infinity,";
                ++poisoned;
                continue;
            }
            out << v << ",";
        }
        out << "02/03/2018 10:00:00," << (attack ? spec.attack_label : "Benign") << "\n";
    }
    write_file(path, out.str());
}

}  // namespace nnids::test
