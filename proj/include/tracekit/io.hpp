#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "tracekit/trace_system.hpp"

namespace tracekit {

// Matrix file format "trace-system v1":
//   line 1: the literal header "trace-system v1"
//   line 2: "<rows> <cols>" in decimal
//   then <rows> lines of 0/1 characters, <cols> per line
//   lines beginning with '#' are ignored anywhere
//   optional trailing lines: "rowlabel <i> <name>" / "collabel <j> <name>"
// Serialization emits exactly this form with LF newlines.

namespace detail {

struct NumberedLine {
    int number;  // 1-based, counting comment lines
    std::string_view text;
};

inline std::vector<NumberedLine> split_lines(std::string_view text) {
    std::vector<NumberedLine> out;
    int number = 1;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = (nl == std::string_view::npos)
                                    ? text.substr(pos)
                                    : text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        bool last = nl == std::string_view::npos;
        if (!(last && line.empty()))  // ignore a trailing empty fragment
            out.push_back({number, line});
        if (last) break;
        pos = nl + 1;
        ++number;
    }
    return out;
}

inline int parse_int(std::string_view s, int line, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(std::string("malformed ") + what + " at line " + std::to_string(line),
                         line);
    return value;
}

}  // namespace detail

inline TraceSystem load_system(std::string_view text) {
    std::vector<detail::NumberedLine> lines;
    for (const auto& l : detail::split_lines(text))
        if (l.text.empty() || l.text[0] != '#') lines.push_back(l);

    std::size_t at = 0;
    auto need = [&](const char* what) -> const detail::NumberedLine& {
        if (at >= lines.size())
            throw ParseError(std::string("unexpected end of input, expected ") + what,
                             lines.empty() ? 1 : lines.back().number);
        return lines[at++];
    };

    const auto& header = need("header");
    if (header.text != "trace-system v1")
        throw ParseError("malformed header at line " + std::to_string(header.number),
                         header.number);

    const auto& dims = need("dimensions");
    std::size_t space = dims.text.find(' ');
    if (space == std::string_view::npos)
        throw ParseError("malformed dimensions at line " + std::to_string(dims.number),
                         dims.number);
    int rows = detail::parse_int(dims.text.substr(0, space), dims.number, "dimensions");
    int cols = detail::parse_int(dims.text.substr(space + 1), dims.number, "dimensions");
    if (rows <= 0 || cols <= 0)
        throw ParseError("dimensions must be positive at line " + std::to_string(dims.number),
                         dims.number);

    std::vector<std::vector<bool>> grid;
    grid.reserve(rows);
    for (int r = 0; r < rows; ++r) {
        const auto& row = need("matrix row");
        if (static_cast<int>(row.text.size()) != cols)
            throw ParseError("ragged row at line " + std::to_string(row.number), row.number);
        std::vector<bool> bits(cols);
        for (int c = 0; c < cols; ++c) {
            char ch = row.text[c];
            if (ch != '0' && ch != '1')
                throw ParseError("invalid character '" + std::string(1, ch) + "' at line " +
                                     std::to_string(row.number),
                                 row.number);
            bits[c] = ch == '1';
        }
        grid.push_back(std::move(bits));
    }

    std::vector<std::string> row_labels, col_labels;
    auto set_label = [](std::vector<std::string>& labels, int size, int idx, std::string name,
                        int line) {
        if (idx < 0 || idx >= size)
            throw ParseError("label index out of range at line " + std::to_string(line), line);
        if (labels.empty()) labels.assign(size, "");
        labels[idx] = std::move(name);
    };
    while (at < lines.size()) {
        const auto& l = lines[at++];
        std::string_view s = l.text;
        bool is_row = s.starts_with("rowlabel ");
        bool is_col = s.starts_with("collabel ");
        if (!is_row && !is_col)
            throw ParseError("unexpected content at line " + std::to_string(l.number), l.number);
        s.remove_prefix(9);
        std::size_t sp = s.find(' ');
        if (sp == std::string_view::npos || sp + 1 >= s.size())
            throw ParseError("malformed label at line " + std::to_string(l.number), l.number);
        int idx = detail::parse_int(s.substr(0, sp), l.number, "label index");
        std::string name(s.substr(sp + 1));
        if (is_row)
            set_label(row_labels, rows, idx, std::move(name), l.number);
        else
            set_label(col_labels, cols, idx, std::move(name), l.number);
    }

    // Labels are all-or-none per dimension; a partial set cannot serialize
    // back to the same bytes.
    auto complete = [](const std::vector<std::string>& labels, const char* what) {
        for (const auto& l : labels)
            if (l.empty())
                throw ParseError(std::string("incomplete ") + what + " labels", 0);
    };
    complete(row_labels, "row");
    complete(col_labels, "column");

    TraceSystem sys(rows, cols, [&](int r, int c) { return grid[r][c]; });
    if (!row_labels.empty()) sys.set_row_labels(std::move(row_labels));
    if (!col_labels.empty()) sys.set_col_labels(std::move(col_labels));
    return sys;
}

inline std::string serialize(const TraceSystem& sys) {
    std::string out = "trace-system v1\n";
    out += std::to_string(sys.row_count()) + " " + std::to_string(sys.col_count()) + "\n";
    for (int r = 0; r < sys.row_count(); ++r) {
        for (int c = 0; c < sys.col_count(); ++c) out.push_back(sys.entry(r, c) ? '1' : '0');
        out.push_back('\n');
    }
    for (std::size_t i = 0; i < sys.row_labels().size(); ++i)
        out += "rowlabel " + std::to_string(i) + " " + sys.row_labels()[i] + "\n";
    for (std::size_t j = 0; j < sys.col_labels().size(); ++j)
        out += "collabel " + std::to_string(j) + " " + sys.col_labels()[j] + "\n";
    return out;
}

}  // namespace tracekit
