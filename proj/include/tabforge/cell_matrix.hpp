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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabforge/errors.hpp"
#include "tabforge/rng.hpp"

namespace tabforge {

/// One grid position of an atomic cell matrix.
///   C - a cell starts here
///   L - merged with the position to its left
///   U - merged with the position above
///   X - merged both left and up (interior of a 2D merge)
enum class Token : unsigned char { C, L, U, X };

char to_char(Token t);
Token token_from_char(char c);

/// Row-major grid of tokens. Construction only enforces the size
/// invariant; well-formedness is checked by validate_matrix.
class CellMatrix {
public:
    CellMatrix(int n_rows, int n_cols, Token fill = Token::C);
    CellMatrix(int n_rows, int n_cols, std::vector<Token> grid);

    int n_rows() const { return n_rows_; }
    int n_cols() const { return n_cols_; }

    Token at(int row, int col) const { return grid_[static_cast<std::size_t>(row) * n_cols_ + col]; }
    void set(int row, int col, Token t) { grid_[static_cast<std::size_t>(row) * n_cols_ + col] = t; }

    const std::vector<Token>& grid() const { return grid_; }

    /// Rows joined by newline, tokens joined by nothing: "CL\nUX".
    std::string to_text() const;
    /// Accepts optional spaces inside rows; all rows must agree in width.
    static CellMatrix from_text(std::string_view text);

    friend bool operator==(const CellMatrix& a, const CellMatrix& b) = default;

private:
    int n_rows_;
    int n_cols_;
    std::vector<Token> grid_;
};

struct Violation {
    int row = 0;
    int col = 0;
    std::string rule_id;
    std::string message;

    friend bool operator==(const Violation& a, const Violation& b) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool is_valid() const { return violations.empty(); }
};

/// A table cell identified by its anchor position and span extents.
struct LogicalCell {
    int anchor_row = 0;
    int anchor_col = 0;
    int row_span = 1;
    int col_span = 1;
    std::optional<std::string> content;
    bool is_header = false;

    friend bool operator==(const LogicalCell& a, const LogicalCell& b) = default;
};

/// Logical view of a table: cells tiling an n_rows x n_cols grid,
/// ordered row-major by anchor.
struct TableStructure {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<LogicalCell> cells;

    friend bool operator==(const TableStructure& a, const TableStructure& b) = default;
};

/// Grid partition used by splice: interior cut positions plus the
/// target dimensions they partition.
struct BlockRegion {
    int row0 = 0;
    int col0 = 0;
    int height = 0;
    int width = 0;
};

struct BlockLayout {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<int> row_cuts; // sorted, strictly interior
    std::vector<int> col_cuts;

    /// Regions in row-major block order; they tile (n_rows, n_cols).
    std::vector<BlockRegion> regions() const;
};

struct ImplicitReport {
    std::vector<int> implicit_rows;
    std::vector<int> implicit_cols;

    bool empty() const { return implicit_rows.empty() && implicit_cols.empty(); }
};

/// Checks the per-token neighbour rules (L/X never in column 0, U/X never
/// in row 0, L continues C/L, U continues C/U, X continues a 2D merge)
/// and, when those pass, that the cells derived from C anchors tile the
/// grid exactly so every merged region is a rectangle.
ValidationReport validate_matrix(const CellMatrix& m);

/// One LogicalCell per C token; spans follow the L-run right of the anchor
/// and the U-run below it. Throws invalid_matrix if validation fails.
TableStructure matrix_to_cells(const CellMatrix& m);

/// Inverse of matrix_to_cells. Throws non_tiling when cells overlap,
/// leave gaps, or exceed the grid.
CellMatrix cells_to_matrix(const TableStructure& s);

/// Rows [0, r) x cols [0, c) of m. Any top-left window of a valid matrix
/// is itself valid.
CellMatrix crop_top_left(const CellMatrix& m, int r, int c);

/// Copies each block into its layout region. Blocks must be valid and
/// match their region dimensions; merges then cannot cross block borders.
CellMatrix splice(const BlockLayout& layout, const std::vector<CellMatrix>& blocks);

/// Performs up to k merge moves. A move picks uniformly among pairs of
/// adjacent 1x1 cells and rewrites the right (resp. lower) one to L
/// (resp. U). Stops early when no legal pair remains.
CellMatrix inject_merges(const CellMatrix& m, int k, Rng& rng);

/// A row is implicit when it holds no C and no L (nothing anchors there,
/// so renderers collapse it); a column when it holds no C and no U.
ImplicitReport detect_implicit(const CellMatrix& m);

/// Deletes all implicit rows/columns, shrinking the spans of cells that
/// cross them. Idempotent; the result audits clean.
CellMatrix remove_implicit(const CellMatrix& m);

/// Structure-level variant that preserves cell contents and header flags.
TableStructure remove_implicit(const TableStructure& s);

/// Structure-level twin of detect_implicit: a line is implicit when no
/// cell anchors in it.
ImplicitReport detect_implicit_structure(const TableStructure& s);

} // namespace tabforge
