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
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tabforge/cell_matrix.hpp"

namespace tabforge {

enum class EmitMode { structural_only, with_content };

/// Row grouping observed in the source markup; kept so tree building can
/// mirror the original thead/tbody nesting instead of guessing.
struct RowGroup {
    enum class Kind { bare, thead, tbody };
    Kind kind = Kind::bare;
    int row_count = 0;

    friend bool operator==(const RowGroup& a, const RowGroup& b) = default;
};

struct HtmlTableDoc {
    std::string raw_text;
    TableStructure structure;
    int header_rows = 0;
    std::vector<RowGroup> groups;
};

/// Parses the table subset used by PubTabNet/FinTabNet ground truth:
/// table/thead/tbody/tr/td/th with rowspan/colspan. Tags inside cells are
/// stripped to their text; th becomes td with is_header set; whitespace is
/// trimmed and empty-after-trim content becomes an absent content.
HtmlTableDoc parse_table_html(std::string_view text);

/// Emits one tr per row with td at anchors only. Header rows are wrapped
/// in thead (followed by tbody); scattered header cells in the body keep
/// their flag via th. structural_only leaves every cell empty.
std::string structure_to_html(const TableStructure& s, EmitMode mode);

/// PubTabNet-style structural token list: "<tr>"/"</tr>" per row, plain
/// cells as "<td>","</td>", spanned cells as "<td", attribute tokens, ">",
/// "</td>", with thead/tbody wrappers when header rows exist.
std::vector<std::string> tokenize_structure(const TableStructure& s);

/// One token per grid position.
long long count_matrix_tokens(const CellMatrix& m);

/// True when the cell has no content or trims to nothing.
bool is_empty_cell(const LogicalCell& cell);

std::string escape_html_text(std::string_view text);

} // namespace tabforge
