/*
 * Copyright 2026 tabforge authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#include "tabforge/html_codec.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace tabforge {

namespace {

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    };
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return std::string(text.substr(begin, end - begin));
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string unescape_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '&') {
            out.push_back(text[i++]);
            continue;
        }
        const std::size_t semi = text.find(';', i);
        if (semi == std::string_view::npos || semi - i > 8) {
            out.push_back(text[i++]);
            continue;
        }
        const std::string_view entity = text.substr(i + 1, semi - i - 1);
        if (entity == "amp") out.push_back('&');
        else if (entity == "lt") out.push_back('<');
        else if (entity == "gt") out.push_back('>');
        else if (entity == "quot") out.push_back('"');
        else if (entity == "apos" || entity == "#39") out.push_back('\'');
        else if (entity == "nbsp") out.push_back(' ');
        else {
            out.push_back(text[i++]);
            continue;
        }
        i = semi + 1;
    }
    return out;
}

struct Tag {
    std::string name;      // lowercase, without '/'
    bool closing = false;
    bool self_closing = false;
    std::string attributes; // raw text between name and '>'
};

// Minimal tag scanner for the annotation markup subset. Quotes inside
// attribute values may contain '>'.
class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    // Returns false at end of input. Text runs between tags are appended
    // to *pending_text when requested by the caller.
    bool next(Tag& tag, std::string& pending_text) {
        while (pos_ < text_.size()) {
            if (text_[pos_] != '<') {
                pending_text.push_back(text_[pos_++]);
                continue;
            }
            const std::size_t tag_end = find_tag_end(pos_);
            if (tag_end == std::string_view::npos) {
                throw Error(ErrorCode::malformed_markup, "unterminated tag");
            }
            std::string_view body = text_.substr(pos_ + 1, tag_end - pos_ - 1);
            pos_ = tag_end + 1;
            if (body.empty()) {
                throw Error(ErrorCode::malformed_markup, "empty tag");
            }
            if (body.front() == '!' || body.front() == '?') continue; // comments, doctype
            tag = parse_tag(body);
            return true;
        }
        return false;
    }

private:
    std::size_t find_tag_end(std::size_t start) const {
        char quote = '\0';
        for (std::size_t i = start + 1; i < text_.size(); ++i) {
            const char c = text_[i];
            if (quote != '\0') {
                if (c == quote) quote = '\0';
            } else if (c == '"' || c == '\'') {
                quote = c;
            } else if (c == '>') {
                return i;
            }
        }
        return std::string_view::npos;
    }

    static Tag parse_tag(std::string_view body) {
        Tag tag;
        if (body.front() == '/') {
            tag.closing = true;
            body.remove_prefix(1);
        }
        if (!body.empty() && body.back() == '/') {
            tag.self_closing = true;
            body.remove_suffix(1);
        }
        std::size_t name_end = 0;
        while (name_end < body.size() && !std::isspace(static_cast<unsigned char>(body[name_end]))) {
            ++name_end;
        }
        tag.name = to_lower(body.substr(0, name_end));
        tag.attributes = std::string(body.substr(name_end));
        return tag;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::optional<int> parse_span_attribute(const std::string& attributes, std::string_view name) {
    const std::string lowered = to_lower(attributes);
    std::size_t pos = 0;
    while ((pos = lowered.find(name, pos)) != std::string::npos) {
        // must be a standalone attribute name
        if (pos > 0 && (std::isalnum(static_cast<unsigned char>(lowered[pos - 1])) || lowered[pos - 1] == '-')) {
            pos += name.size();
            continue;
        }
        std::size_t i = pos + name.size();
        while (i < lowered.size() && std::isspace(static_cast<unsigned char>(lowered[i]))) ++i;
        if (i >= lowered.size() || lowered[i] != '=') {
            pos += name.size();
            continue;
        }
        ++i;
        while (i < lowered.size() && std::isspace(static_cast<unsigned char>(lowered[i]))) ++i;
        if (i < lowered.size() && (lowered[i] == '"' || lowered[i] == '\'')) ++i;
        std::size_t j = i;
        while (j < lowered.size() && std::isdigit(static_cast<unsigned char>(lowered[j]))) ++j;
        if (j == i) {
            throw Error(ErrorCode::malformed_markup, std::string(name) + " attribute is not a number");
        }
        int value = 0;
        try {
            value = std::stoi(lowered.substr(i, j - i));
        } catch (const std::out_of_range&) {
            throw Error(ErrorCode::malformed_markup, std::string(name) + " value is out of range");
        }
        // a span beyond any plausible table is annotation damage; reject it
        // before the grid placer tries to allocate the claimed rectangle
        if (value < 1 || value > 10000) {
            throw Error(ErrorCode::malformed_markup, std::string(name) + " out of supported range");
        }
        return value;
    }
    return std::nullopt;
}

struct RawCell {
    int row = 0;
    int row_span = 1;
    int col_span = 1;
    std::string text;
    bool is_header = false;
};

struct ParsedRows {
    std::vector<RawCell> cells;
    std::vector<RowGroup> groups;
    int row_count = 0;
    int header_rows = 0;
};

ParsedRows scan_rows(std::string_view text) {
    Scanner scanner(text);
    ParsedRows out;

    bool table_open = false;
    bool table_seen = false;
    RowGroup::Kind section = RowGroup::Kind::bare;
    bool in_tr = false;
    bool in_td = false;
    int cell_tag_depth = 0; // nesting of stripped tags inside the current cell
    RawCell current_cell;
    std::string text_run;

    auto open_row_group = [&](RowGroup::Kind kind) {
        if (out.groups.empty() || out.groups.back().kind != kind) {
            out.groups.push_back(RowGroup{kind, 0});
        }
    };

    Tag tag;
    while (scanner.next(tag, text_run)) {
        if (in_td && tag.name != "td" && tag.name != "th" && tag.name != "tr" &&
            tag.name != "table" && tag.name != "thead" && tag.name != "tbody") {
            // formatting tags inside a cell are stripped to their text
            if (!tag.closing && !tag.self_closing) ++cell_tag_depth;
            if (tag.closing && cell_tag_depth > 0) --cell_tag_depth;
            continue;
        }
        if (tag.name == "table") {
            if (!tag.closing) {
                if (table_seen) throw Error(ErrorCode::multiple_tables, "more than one table element");
                table_open = true;
                table_seen = true;
            } else {
                if (!table_open) throw Error(ErrorCode::malformed_markup, "</table> without <table>");
                if (in_tr || in_td) throw Error(ErrorCode::malformed_markup, "table closed inside a row");
                table_open = false;
            }
            text_run.clear();
            continue;
        }
        if (!table_open) {
            // tags outside the table element are ignored (e.g. html/body wrappers)
            text_run.clear();
            continue;
        }
        if (tag.name == "thead" || tag.name == "tbody") {
            if (in_tr || in_td) throw Error(ErrorCode::malformed_markup, tag.name + " inside a row");
            if (!tag.closing) {
                section = tag.name == "thead" ? RowGroup::Kind::thead : RowGroup::Kind::tbody;
                open_row_group(section);
            } else {
                section = RowGroup::Kind::bare;
            }
            text_run.clear();
            continue;
        }
        if (tag.name == "tr") {
            if (!tag.closing) {
                if (in_tr) throw Error(ErrorCode::malformed_markup, "nested <tr>");
                in_tr = true;
                open_row_group(section);
                out.groups.back().row_count += 1;
                if (section == RowGroup::Kind::thead) out.header_rows += 1;
            } else {
                if (!in_tr) throw Error(ErrorCode::malformed_markup, "</tr> without <tr>");
                if (in_td) throw Error(ErrorCode::malformed_markup, "row closed inside a cell");
                in_tr = false;
                out.row_count += 1;
            }
            text_run.clear();
            continue;
        }
        if (tag.name == "td" || tag.name == "th") {
            if (!tag.closing) {
                if (!in_tr) throw Error(ErrorCode::malformed_markup, "<" + tag.name + "> outside a row");
                if (in_td) throw Error(ErrorCode::malformed_markup, "nested cell");
                in_td = true;
                cell_tag_depth = 0;
                current_cell = RawCell{};
                current_cell.row = out.row_count;
                current_cell.is_header = tag.name == "th" || section == RowGroup::Kind::thead;
                if (auto rs = parse_span_attribute(tag.attributes, "rowspan")) current_cell.row_span = *rs;
                if (auto cs = parse_span_attribute(tag.attributes, "colspan")) current_cell.col_span = *cs;
                text_run.clear();
                if (tag.self_closing) {
                    in_td = false;
                    out.cells.push_back(current_cell);
                }
            } else {
                if (!in_td) throw Error(ErrorCode::malformed_markup, "</" + tag.name + "> without opener");
                in_td = false;
                current_cell.text = trim(unescape_entities(text_run));
                text_run.clear();
                out.cells.push_back(current_cell);
            }
            continue;
        }
        // unknown structural tag at row level: ignore
        text_run.clear();
    }
    if (!table_seen) throw Error(ErrorCode::malformed_markup, "no table element found");
    if (table_open || in_tr || in_td) throw Error(ErrorCode::malformed_markup, "unbalanced tags");
    return out;
}

TableStructure place_cells(const ParsedRows& rows) {
    // Standard left-to-right placement: each cell lands at the first free
    // column of its row, then claims its rowspan/colspan rectangle.
    std::vector<std::vector<bool>> occupied;
    int n_cols = 0;
    auto ensure = [&](int row, int col) {
        if (row >= static_cast<int>(occupied.size())) occupied.resize(static_cast<std::size_t>(row) + 1);
        if (col >= n_cols) n_cols = col + 1;
        for (auto& r : occupied) {
            if (static_cast<int>(r.size()) < n_cols) r.resize(static_cast<std::size_t>(n_cols), false);
        }
    };

    TableStructure s;
    for (const RawCell& raw : rows.cells) {
        ensure(raw.row, 0);
        int col = 0;
        while (col < static_cast<int>(occupied[static_cast<std::size_t>(raw.row)].size()) &&
               occupied[static_cast<std::size_t>(raw.row)][static_cast<std::size_t>(col)]) {
            ++col;
        }
        ensure(raw.row + raw.row_span - 1, col + raw.col_span - 1);
        for (int r = raw.row; r < raw.row + raw.row_span; ++r) {
            for (int c = col; c < col + raw.col_span; ++c) {
                if (occupied[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]) {
                    throw Error(ErrorCode::overlapping_spans,
                                "spans collide at (" + std::to_string(r) + "," + std::to_string(c) + ")");
                }
                occupied[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = true;
            }
        }
        LogicalCell cell;
        cell.anchor_row = raw.row;
        cell.anchor_col = col;
        cell.row_span = raw.row_span;
        cell.col_span = raw.col_span;
        cell.is_header = raw.is_header;
        if (!raw.text.empty()) cell.content = raw.text;
        s.cells.push_back(std::move(cell));
    }

    s.n_rows = std::max(rows.row_count, static_cast<int>(occupied.size()));
    s.n_cols = n_cols;
    if (s.n_rows == 0 || s.n_cols == 0) {
        throw Error(ErrorCode::malformed_markup, "table has no cells");
    }
    for (int r = 0; r < s.n_rows; ++r) {
        for (int c = 0; c < s.n_cols; ++c) {
            const bool covered = r < static_cast<int>(occupied.size()) &&
                                 c < static_cast<int>(occupied[static_cast<std::size_t>(r)].size()) &&
                                 occupied[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            if (!covered) {
                throw Error(ErrorCode::non_tiling,
                            "grid position (" + std::to_string(r) + "," + std::to_string(c) +
                                ") is not covered; rows are ragged");
            }
        }
    }
    std::sort(s.cells.begin(), s.cells.end(), [](const LogicalCell& a, const LogicalCell& b) {
        return std::pair(a.anchor_row, a.anchor_col) < std::pair(b.anchor_row, b.anchor_col);
    });
    return s;
}

// Number of leading rows that can be wrapped in thead: every cell covering
// them is a header cell and no cell crosses the thead/tbody boundary.
int header_prefix_rows(const TableStructure& s) {
    std::vector<bool> all_header(static_cast<std::size_t>(s.n_rows), true);
    for (const LogicalCell& cell : s.cells) {
        if (cell.is_header) continue;
        for (int r = cell.anchor_row; r < cell.anchor_row + cell.row_span; ++r) {
            all_header[static_cast<std::size_t>(r)] = false;
        }
    }
    int h = 0;
    while (h < s.n_rows && all_header[static_cast<std::size_t>(h)]) ++h;
    auto crosses = [&](int boundary) {
        for (const LogicalCell& cell : s.cells) {
            if (cell.anchor_row < boundary && cell.anchor_row + cell.row_span > boundary) return true;
        }
        return false;
    };
    while (h > 0 && crosses(h)) --h;
    return h;
}

void require_tiling(const TableStructure& s) {
    cells_to_matrix(s); // throws non_tiling on overlap or gap
}

} // namespace

HtmlTableDoc parse_table_html(std::string_view text) {
    const ParsedRows rows = scan_rows(text);
    HtmlTableDoc doc;
    doc.raw_text = std::string(text);
    doc.structure = place_cells(rows);
    doc.header_rows = rows.header_rows;
    doc.groups = rows.groups;
    return doc;
}

bool is_empty_cell(const LogicalCell& cell) {
    return !cell.content.has_value() || trim(*cell.content).empty();
}

std::string escape_html_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string structure_to_html(const TableStructure& s, EmitMode mode) {
    require_tiling(s);
    const int header_rows = header_prefix_rows(s);

    std::vector<std::vector<const LogicalCell*>> by_row(static_cast<std::size_t>(s.n_rows));
    for (const LogicalCell& cell : s.cells) {
        by_row[static_cast<std::size_t>(cell.anchor_row)].push_back(&cell);
    }
    for (auto& row : by_row) {
        std::sort(row.begin(), row.end(), [](const LogicalCell* a, const LogicalCell* b) {
            return a->anchor_col < b->anchor_col;
        });
    }

    std::string out = "<table>";
    auto emit_row = [&](int r, bool inside_thead) {
        out += "<tr>";
        for (const LogicalCell* cell : by_row[static_cast<std::size_t>(r)]) {
            const bool as_th = cell->is_header && !inside_thead;
            const char* name = as_th ? "th" : "td";
            out.push_back('<');
            out += name;
            if (cell->row_span > 1) out += " rowspan=\"" + std::to_string(cell->row_span) + "\"";
            if (cell->col_span > 1) out += " colspan=\"" + std::to_string(cell->col_span) + "\"";
            out.push_back('>');
            if (mode == EmitMode::with_content && cell->content.has_value()) {
                out += escape_html_text(*cell->content);
            }
            out += "</";
            out += name;
            out.push_back('>');
        }
        out += "</tr>";
    };

    if (header_rows > 0) {
        out += "<thead>";
        for (int r = 0; r < header_rows; ++r) emit_row(r, true);
        out += "</thead><tbody>";
        for (int r = header_rows; r < s.n_rows; ++r) emit_row(r, false);
        out += "</tbody>";
    } else {
        for (int r = 0; r < s.n_rows; ++r) emit_row(r, false);
    }
    out += "</table>";
    return out;
}

std::vector<std::string> tokenize_structure(const TableStructure& s) {
    require_tiling(s);
    const int header_rows = header_prefix_rows(s);

    std::vector<std::vector<const LogicalCell*>> by_row(static_cast<std::size_t>(s.n_rows));
    for (const LogicalCell& cell : s.cells) {
        by_row[static_cast<std::size_t>(cell.anchor_row)].push_back(&cell);
    }
    for (auto& row : by_row) {
        std::sort(row.begin(), row.end(), [](const LogicalCell* a, const LogicalCell* b) {
            return a->anchor_col < b->anchor_col;
        });
    }

    std::vector<std::string> tokens;
    auto emit_row = [&](int r) {
        tokens.emplace_back("<tr>");
        for (const LogicalCell* cell : by_row[static_cast<std::size_t>(r)]) {
            if (cell->row_span == 1 && cell->col_span == 1) {
                tokens.emplace_back("<td>");
            } else {
                tokens.emplace_back("<td");
                if (cell->row_span > 1) {
                    tokens.emplace_back(" rowspan=\"" + std::to_string(cell->row_span) + "\"");
                }
                if (cell->col_span > 1) {
                    tokens.emplace_back(" colspan=\"" + std::to_string(cell->col_span) + "\"");
                }
                tokens.emplace_back(">");
            }
            tokens.emplace_back("</td>");
        }
        tokens.emplace_back("</tr>");
    };

    if (header_rows > 0) {
        tokens.emplace_back("<thead>");
        for (int r = 0; r < header_rows; ++r) emit_row(r);
        tokens.emplace_back("</thead>");
        tokens.emplace_back("<tbody>");
        for (int r = header_rows; r < s.n_rows; ++r) emit_row(r);
        tokens.emplace_back("</tbody>");
    } else {
        for (int r = 0; r < s.n_rows; ++r) emit_row(r);
    }
    return tokens;
}

long long count_matrix_tokens(const CellMatrix& m) {
    return static_cast<long long>(m.n_rows()) * m.n_cols();
}

} // namespace tabforge
