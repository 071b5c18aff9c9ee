#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nnids {

/// Raw CSV table: header plus unparsed data lines. Lines are kept as text and
/// tokenized on demand; every stored line is guaranteed to have exactly
/// header.size() cells. Known artifacts of the CSE-CIC-IDS2018 exports are
/// handled at this level: header lines repeated mid-file are skipped and
/// ragged rows are dropped, both counted.
struct RawTable {
    std::vector<std::string> header;   // trimmed column names
    std::vector<std::string> lines;    // one raw line per retained data row
    std::string source_path;
    std::uint64_t duplicate_header_lines = 0;
    std::uint64_t malformed_rows = 0;
    // true for columns that contain at least one non-empty cell
    std::vector<bool> column_has_value;

    std::size_t row_count() const { return lines.size(); }
    std::size_t column_count() const { return header.size(); }

    /// Tokenizes row i into cells (quotes removed, no trimming).
    std::vector<std::string> row(std::size_t i) const;
};

/// Splits one CSV line into cells. Double quotes delimit cells that contain
/// commas; "" inside a quoted cell is an escaped quote. Embedded newlines are
/// not supported (the flow exports never contain them).
void split_csv_line(std::string_view line, std::vector<std::string>& cells);
std::vector<std::string> split_csv_line(std::string_view line);

std::string_view trim_view(std::string_view s);

/// Reads a CSV file. The first line is the header; subsequent lines equal to
/// it are counted as duplicate headers and excluded; lines whose cell count
/// differs from the header are counted as malformed and excluded.
/// Throws on unreadable files and on files with no header line.
RawTable parse_csv(const std::string& path);

}  // namespace nnids
