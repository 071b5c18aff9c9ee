#include "nnids/csv.hpp"

#include <fstream>
#include <stdexcept>

namespace nnids {

namespace {

// Walks the cells of a line without allocating. on_cell(index, raw_view) sees
// the cell content with outer quotes still present. Returns the cell count.
template <typename Fn>
std::size_t scan_cells(std::string_view line, Fn&& on_cell) {
    std::size_t count = 0;
    std::size_t cell_start = 0;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            on_cell(count, line.substr(cell_start, i - cell_start));
            ++count;
            cell_start = i + 1;
        }
    }
    on_cell(count, line.substr(cell_start));
    return count + 1;
}

bool cell_is_empty(std::string_view raw) {
    for (const char c : raw) {
        if (c != '"' && c != ' ' && c != '\t') return false;
    }
    return true;
}

}  // namespace

std::string_view trim_view(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && (s[begin] == ' ' || s[begin] == '\t' || s[begin] == '\r' || s[begin] == '\n'))
        ++begin;
    while (end > begin && (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r' || s[end - 1] == '\n'))
        --end;
    return s.substr(begin, end - begin);
}

void split_csv_line(std::string_view line, std::vector<std::string>& cells) {
    cells.clear();
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else {
            cell += c;
        }
    }
    cells.push_back(cell);
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    split_csv_line(line, cells);
    return cells;
}

std::vector<std::string> RawTable::row(std::size_t i) const {
    return split_csv_line(lines.at(i));
}

RawTable parse_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open csv file: " + path);

    RawTable table;
    table.source_path = path;

    std::string header_line;
    if (!std::getline(in, header_line))
        throw std::runtime_error("no header: " + path);
    if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();

    for (const auto& name : split_csv_line(header_line))
        table.header.emplace_back(trim_view(name));
    if (header_line.empty() || table.header.empty())
        throw std::runtime_error("no header: " + path);

    const std::size_t cols = table.header.size();
    table.column_has_value.assign(cols, false);

    std::string line;
    std::vector<std::uint32_t> nonempty;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == header_line) {
            ++table.duplicate_header_lines;
            continue;
        }
        nonempty.clear();
        const std::size_t n = scan_cells(line, [&](std::size_t idx, std::string_view raw) {
            if (idx < cols && !cell_is_empty(raw)) nonempty.push_back(static_cast<std::uint32_t>(idx));
        });
        if (n != cols) {
            ++table.malformed_rows;
            continue;
        }
        for (const std::uint32_t idx : nonempty) table.column_has_value[idx] = true;
        table.lines.push_back(line);
    }
    if (in.bad()) throw std::runtime_error("read error while parsing csv: " + path);
    return table;
}

}  // namespace nnids
