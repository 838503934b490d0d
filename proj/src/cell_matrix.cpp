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
#include "tabforge/cell_matrix.hpp"

#include <algorithm>
#include <utility>

namespace tabforge {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_matrix: return "invalid_matrix";
        case ErrorCode::non_tiling: return "non_tiling";
        case ErrorCode::out_of_bounds: return "out_of_bounds";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::unpartitionable: return "unpartitionable";
        case ErrorCode::malformed_markup: return "malformed_markup";
        case ErrorCode::multiple_tables: return "multiple_tables";
        case ErrorCode::overlapping_spans: return "overlapping_spans";
        case ErrorCode::param_out_of_range: return "param_out_of_range";
        case ErrorCode::no_valid_instruction: return "no_valid_instruction";
        case ErrorCode::no_compatible_source: return "no_compatible_source";
        case ErrorCode::retry_budget_exhausted: return "retry_budget_exhausted";
        case ErrorCode::ground_truth_malformed: return "ground_truth_malformed";
        case ErrorCode::unreadable_path: return "unreadable_path";
        case ErrorCode::empty_corpus: return "empty_corpus";
        case ErrorCode::external_client: return "external_client";
    }
    return "unknown_error";
}

char to_char(Token t) {
    switch (t) {
        case Token::C: return 'C';
        case Token::L: return 'L';
        case Token::U: return 'U';
        case Token::X: return 'X';
    }
    return '?';
}

Token token_from_char(char c) {
    switch (c) {
        case 'C': return Token::C;
        case 'L': return Token::L;
        case 'U': return Token::U;
        case 'X': return Token::X;
        default:
            throw Error(ErrorCode::invalid_matrix,
                        std::string("unknown token character '") + c + "'");
    }
}

CellMatrix::CellMatrix(int n_rows, int n_cols, Token fill)
    : n_rows_(n_rows), n_cols_(n_cols) {
    if (n_rows < 1 || n_cols < 1) {
        throw Error(ErrorCode::invalid_matrix, "matrix dimensions must be positive");
    }
    grid_.assign(static_cast<std::size_t>(n_rows) * n_cols, fill);
}

CellMatrix::CellMatrix(int n_rows, int n_cols, std::vector<Token> grid)
    : n_rows_(n_rows), n_cols_(n_cols), grid_(std::move(grid)) {
    if (n_rows < 1 || n_cols < 1) {
        throw Error(ErrorCode::invalid_matrix, "matrix dimensions must be positive");
    }
    if (grid_.size() != static_cast<std::size_t>(n_rows) * n_cols) {
        throw Error(ErrorCode::invalid_matrix, "grid length does not match dimensions");
    }
}

std::string CellMatrix::to_text() const {
    std::string out;
    out.reserve(grid_.size() + static_cast<std::size_t>(n_rows_));
    for (int i = 0; i < n_rows_; ++i) {
        if (i > 0) out.push_back('\n');
        for (int j = 0; j < n_cols_; ++j) out.push_back(to_char(at(i, j)));
    }
    return out;
}

CellMatrix CellMatrix::from_text(std::string_view text) {
    std::vector<std::vector<Token>> rows;
    std::vector<Token> current;
    bool row_has_content = false;
    auto flush_row = [&] {
        if (row_has_content) rows.push_back(current);
        current.clear();
        row_has_content = false;
    };
    for (char c : text) {
        if (c == '\n') {
            flush_row();
        } else if (c == ' ' || c == '\t' || c == '\r') {
            continue;
        } else {
            current.push_back(token_from_char(c));
            row_has_content = true;
        }
    }
    flush_row();
    if (rows.empty()) {
        throw Error(ErrorCode::invalid_matrix, "empty matrix text");
    }
    const std::size_t width = rows.front().size();
    std::vector<Token> grid;
    grid.reserve(rows.size() * width);
    for (const auto& row : rows) {
        if (row.size() != width) {
            throw Error(ErrorCode::invalid_matrix, "rows differ in width");
        }
        grid.insert(grid.end(), row.begin(), row.end());
    }
    return CellMatrix(static_cast<int>(rows.size()), static_cast<int>(width), std::move(grid));
}

std::vector<BlockRegion> BlockLayout::regions() const {
    std::vector<int> row_bounds{0};
    row_bounds.insert(row_bounds.end(), row_cuts.begin(), row_cuts.end());
    row_bounds.push_back(n_rows);
    std::vector<int> col_bounds{0};
    col_bounds.insert(col_bounds.end(), col_cuts.begin(), col_cuts.end());
    col_bounds.push_back(n_cols);

    std::vector<BlockRegion> out;
    out.reserve((row_bounds.size() - 1) * (col_bounds.size() - 1));
    for (std::size_t ri = 0; ri + 1 < row_bounds.size(); ++ri) {
        for (std::size_t ci = 0; ci + 1 < col_bounds.size(); ++ci) {
            out.push_back(BlockRegion{row_bounds[ri], col_bounds[ci],
                                      row_bounds[ri + 1] - row_bounds[ri],
                                      col_bounds[ci + 1] - col_bounds[ci]});
        }
    }
    return out;
}

namespace {

// Spans read directly off the token grid: the L-run right of the anchor
// and the U-run below it.
int l_run(const CellMatrix& m, int row, int col) {
    int span = 1;
    while (col + span < m.n_cols() && m.at(row, col + span) == Token::L) ++span;
    return span;
}

int u_run(const CellMatrix& m, int row, int col) {
    int span = 1;
    while (row + span < m.n_rows() && m.at(row + span, col) == Token::U) ++span;
    return span;
}

void check_local_rules(const CellMatrix& m, std::vector<Violation>& out) {
    for (int i = 0; i < m.n_rows(); ++i) {
        for (int j = 0; j < m.n_cols(); ++j) {
            const Token t = m.at(i, j);
            if (j == 0 && (t == Token::L || t == Token::X)) {
                out.push_back({i, j, t == Token::L ? "L_col0" : "X_col0",
                               std::string(1, to_char(t)) + " in column 0"});
                continue;
            }
            if (i == 0 && (t == Token::U || t == Token::X)) {
                out.push_back({i, j, t == Token::U ? "U_row0" : "X_row0",
                               std::string(1, to_char(t)) + " in row 0"});
                continue;
            }
            switch (t) {
                case Token::C:
                    break;
                case Token::L: {
                    const Token left = m.at(i, j - 1);
                    if (left != Token::C && left != Token::L) {
                        out.push_back({i, j, "L_left", "L not preceded by C or L"});
                    }
                    break;
                }
                case Token::U: {
                    const Token up = m.at(i - 1, j);
                    if (up != Token::C && up != Token::U) {
                        out.push_back({i, j, "U_up", "U not below C or U"});
                    }
                    break;
                }
                case Token::X: {
                    const Token left = m.at(i, j - 1);
                    const Token up = m.at(i - 1, j);
                    if (left != Token::U && left != Token::X) {
                        out.push_back({i, j, "X_left", "X left neighbour not U or X"});
                    }
                    if (up != Token::L && up != Token::X) {
                        out.push_back({i, j, "X_up", "X upper neighbour not L or X"});
                    }
                    break;
                }
            }
        }
    }
}

// The local rules alone admit shapes like [[C,L],[U,C]] whose derived
// regions overlap; requiring the derived rectangles to tile the grid is
// what forces every merged region to be a clean rectangle.
void check_tiling(const CellMatrix& m, std::vector<Violation>& out) {
    std::vector<int> owner(static_cast<std::size_t>(m.n_rows()) * m.n_cols(), -1);
    int cell_index = 0;
    for (int i = 0; i < m.n_rows(); ++i) {
        for (int j = 0; j < m.n_cols(); ++j) {
            if (m.at(i, j) != Token::C) continue;
            const int h = u_run(m, i, j);
            const int w = l_run(m, i, j);
            for (int r = i; r < i + h; ++r) {
                for (int c = j; c < j + w; ++c) {
                    auto& slot = owner[static_cast<std::size_t>(r) * m.n_cols() + c];
                    if (slot != -1) {
                        out.push_back({r, c, "overlap", "merged regions overlap"});
                        return;
                    }
                    slot = cell_index;
                }
            }
            ++cell_index;
        }
    }
    for (int i = 0; i < m.n_rows(); ++i) {
        for (int j = 0; j < m.n_cols(); ++j) {
            if (owner[static_cast<std::size_t>(i) * m.n_cols() + j] == -1) {
                out.push_back({i, j, "uncovered", "position not covered by any cell"});
                return;
            }
        }
    }
}

void require_valid(const CellMatrix& m) {
    const ValidationReport report = validate_matrix(m);
    if (!report.is_valid()) {
        const Violation& v = report.violations.front();
        throw Error(ErrorCode::invalid_matrix,
                    v.message + " at (" + std::to_string(v.row) + "," + std::to_string(v.col) + ")");
    }
}

bool is_unit_cell(const CellMatrix& m, int row, int col) {
    if (m.at(row, col) != Token::C) return false;
    if (col + 1 < m.n_cols() && m.at(row, col + 1) == Token::L) return false;
    if (row + 1 < m.n_rows() && m.at(row + 1, col) == Token::U) return false;
    return true;
}

std::vector<int> sorted_line_indices(const std::vector<bool>& has_anchor) {
    std::vector<int> out;
    for (std::size_t i = 0; i < has_anchor.size(); ++i) {
        if (!has_anchor[i]) out.push_back(static_cast<int>(i));
    }
    return out;
}

int count_less_than(const std::vector<int>& sorted, int value) {
    return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), value) - sorted.begin());
}

int count_in_open_range(const std::vector<int>& sorted, int lo, int hi) {
    // values v with lo < v < hi
    return static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), hi) -
                            std::upper_bound(sorted.begin(), sorted.end(), lo));
}

} // namespace

ValidationReport validate_matrix(const CellMatrix& m) {
    ValidationReport report;
    check_local_rules(m, report.violations);
    if (report.violations.empty()) {
        check_tiling(m, report.violations);
    }
    return report;
}

TableStructure matrix_to_cells(const CellMatrix& m) {
    require_valid(m);
    TableStructure s;
    s.n_rows = m.n_rows();
    s.n_cols = m.n_cols();
    for (int i = 0; i < m.n_rows(); ++i) {
        for (int j = 0; j < m.n_cols(); ++j) {
            if (m.at(i, j) != Token::C) continue;
            LogicalCell cell;
            cell.anchor_row = i;
            cell.anchor_col = j;
            cell.row_span = u_run(m, i, j);
            cell.col_span = l_run(m, i, j);
            s.cells.push_back(std::move(cell));
        }
    }
    return s;
}

CellMatrix cells_to_matrix(const TableStructure& s) {
    if (s.n_rows < 1 || s.n_cols < 1) {
        throw Error(ErrorCode::non_tiling, "structure dimensions must be positive");
    }
    CellMatrix m(s.n_rows, s.n_cols, Token::C);
    std::vector<bool> covered(static_cast<std::size_t>(s.n_rows) * s.n_cols, false);
    for (const LogicalCell& cell : s.cells) {
        if (cell.anchor_row < 0 || cell.anchor_col < 0 || cell.row_span < 1 || cell.col_span < 1 ||
            cell.anchor_row + cell.row_span > s.n_rows || cell.anchor_col + cell.col_span > s.n_cols) {
            throw Error(ErrorCode::non_tiling,
                        "cell at (" + std::to_string(cell.anchor_row) + "," +
                            std::to_string(cell.anchor_col) + ") exceeds table bounds");
        }
        for (int r = cell.anchor_row; r < cell.anchor_row + cell.row_span; ++r) {
            for (int c = cell.anchor_col; c < cell.anchor_col + cell.col_span; ++c) {
                auto idx = static_cast<std::size_t>(r) * s.n_cols + c;
                if (covered[idx]) {
                    throw Error(ErrorCode::non_tiling,
                                "cells overlap at (" + std::to_string(r) + "," + std::to_string(c) + ")");
                }
                covered[idx] = true;
                if (r == cell.anchor_row && c == cell.anchor_col) {
                    m.set(r, c, Token::C);
                } else if (r == cell.anchor_row) {
                    m.set(r, c, Token::L);
                } else if (c == cell.anchor_col) {
                    m.set(r, c, Token::U);
                } else {
                    m.set(r, c, Token::X);
                }
            }
        }
    }
    for (int i = 0; i < s.n_rows; ++i) {
        for (int j = 0; j < s.n_cols; ++j) {
            if (!covered[static_cast<std::size_t>(i) * s.n_cols + j]) {
                throw Error(ErrorCode::non_tiling,
                            "gap at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    return m;
}

CellMatrix crop_top_left(const CellMatrix& m, int r, int c) {
    if (r < 1 || c < 1 || r > m.n_rows() || c > m.n_cols()) {
        throw Error(ErrorCode::out_of_bounds,
                    "crop " + std::to_string(r) + "x" + std::to_string(c) + " outside " +
                        std::to_string(m.n_rows()) + "x" + std::to_string(m.n_cols()));
    }
    std::vector<Token> grid;
    grid.reserve(static_cast<std::size_t>(r) * c);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < c; ++j) grid.push_back(m.at(i, j));
    }
    return CellMatrix(r, c, std::move(grid));
}

CellMatrix splice(const BlockLayout& layout, const std::vector<CellMatrix>& blocks) {
    if (layout.n_rows < 1 || layout.n_cols < 1) {
        throw Error(ErrorCode::dimension_mismatch, "layout dimensions must be positive");
    }
    const auto check_cuts = [](const std::vector<int>& cuts, int limit) {
        int prev = 0;
        for (int cut : cuts) {
            if (cut <= prev || cut >= limit) {
                throw Error(ErrorCode::dimension_mismatch, "layout cuts must be sorted interior positions");
            }
            prev = cut;
        }
    };
    check_cuts(layout.row_cuts, layout.n_rows);
    check_cuts(layout.col_cuts, layout.n_cols);
    const std::vector<BlockRegion> regions = layout.regions();
    if (regions.size() != blocks.size()) {
        throw Error(ErrorCode::dimension_mismatch,
                    "layout has " + std::to_string(regions.size()) + " regions but " +
                        std::to_string(blocks.size()) + " blocks given");
    }
    CellMatrix out(layout.n_rows, layout.n_cols, Token::C);
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const BlockRegion& region = regions[k];
        const CellMatrix& block = blocks[k];
        if (block.n_rows() != region.height || block.n_cols() != region.width) {
            throw Error(ErrorCode::dimension_mismatch,
                        "block " + std::to_string(k) + " is " + std::to_string(block.n_rows()) + "x" +
                            std::to_string(block.n_cols()) + ", region wants " +
                            std::to_string(region.height) + "x" + std::to_string(region.width));
        }
        require_valid(block);
        for (int i = 0; i < block.n_rows(); ++i) {
            for (int j = 0; j < block.n_cols(); ++j) {
                out.set(region.row0 + i, region.col0 + j, block.at(i, j));
            }
        }
    }
    return out;
}

CellMatrix inject_merges(const CellMatrix& m, int k, Rng& rng) {
    require_valid(m);
    CellMatrix out = m;
    struct Move {
        int row;
        int col;
        bool horizontal;
    };
    for (int step = 0; step < k; ++step) {
        std::vector<Move> moves;
        for (int i = 0; i < out.n_rows(); ++i) {
            for (int j = 0; j < out.n_cols(); ++j) {
                if (!is_unit_cell(out, i, j)) continue;
                if (j + 1 < out.n_cols() && is_unit_cell(out, i, j + 1)) {
                    moves.push_back({i, j, true});
                }
                if (i + 1 < out.n_rows() && is_unit_cell(out, i + 1, j)) {
                    moves.push_back({i, j, false});
                }
            }
        }
        if (moves.empty()) break;
        const Move& move = moves[static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(moves.size()) - 1))];
        if (move.horizontal) {
            out.set(move.row, move.col + 1, Token::L);
        } else {
            out.set(move.row + 1, move.col, Token::U);
        }
    }
    return out;
}

ImplicitReport detect_implicit(const CellMatrix& m) {
    require_valid(m);
    ImplicitReport report;
    for (int i = 0; i < m.n_rows(); ++i) {
        bool anchored = false;
        for (int j = 0; j < m.n_cols(); ++j) {
            const Token t = m.at(i, j);
            if (t == Token::C || t == Token::L) {
                anchored = true;
                break;
            }
        }
        if (!anchored) report.implicit_rows.push_back(i);
    }
    for (int j = 0; j < m.n_cols(); ++j) {
        bool anchored = false;
        for (int i = 0; i < m.n_rows(); ++i) {
            const Token t = m.at(i, j);
            if (t == Token::C || t == Token::U) {
                anchored = true;
                break;
            }
        }
        if (!anchored) report.implicit_cols.push_back(j);
    }
    return report;
}

ImplicitReport detect_implicit_structure(const TableStructure& s) {
    std::vector<bool> row_anchor(static_cast<std::size_t>(s.n_rows), false);
    std::vector<bool> col_anchor(static_cast<std::size_t>(s.n_cols), false);
    for (const LogicalCell& cell : s.cells) {
        row_anchor[static_cast<std::size_t>(cell.anchor_row)] = true;
        col_anchor[static_cast<std::size_t>(cell.anchor_col)] = true;
    }
    ImplicitReport report;
    report.implicit_rows = sorted_line_indices(row_anchor);
    report.implicit_cols = sorted_line_indices(col_anchor);
    return report;
}

TableStructure remove_implicit(const TableStructure& s) {
    const ImplicitReport report = detect_implicit_structure(s);
    if (report.empty()) return s;
    TableStructure out;
    out.n_rows = s.n_rows - static_cast<int>(report.implicit_rows.size());
    out.n_cols = s.n_cols - static_cast<int>(report.implicit_cols.size());
    out.cells.reserve(s.cells.size());
    for (const LogicalCell& cell : s.cells) {
        LogicalCell shifted = cell;
        shifted.anchor_row -= count_less_than(report.implicit_rows, cell.anchor_row);
        shifted.anchor_col -= count_less_than(report.implicit_cols, cell.anchor_col);
        shifted.row_span -= count_in_open_range(report.implicit_rows, cell.anchor_row,
                                                cell.anchor_row + cell.row_span);
        shifted.col_span -= count_in_open_range(report.implicit_cols, cell.anchor_col,
                                                cell.anchor_col + cell.col_span);
        out.cells.push_back(std::move(shifted));
    }
    return out;
}

CellMatrix remove_implicit(const CellMatrix& m) {
    return cells_to_matrix(remove_implicit(matrix_to_cells(m)));
}

} // namespace tabforge
