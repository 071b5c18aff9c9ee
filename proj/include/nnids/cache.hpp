#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nnids {

/// On-disk matrix cache. Layout is normative for interchange:
///   bytes 0..5   magic "NNIDS1"
///   bytes 6..13  row count, unsigned 64-bit little-endian
///   bytes 14..21 column count, unsigned 64-bit little-endian
///   then rows*cols IEEE-754 binary32 little-endian, row-major
///   then one label byte per row (0 benign, 1 attack)
struct CachedMatrix {
    std::vector<float> features;
    std::vector<std::uint8_t> labels;
    std::size_t columns = 0;

    std::size_t rows() const { return labels.size(); }
};

void write_cache(const std::string& path, const float* features, std::size_t rows,
                 std::size_t columns, const std::uint8_t* labels);

/// Throws "unrecognized cache format" on a bad magic, and on truncation.
CachedMatrix read_cache(const std::string& path);

}  // namespace nnids
