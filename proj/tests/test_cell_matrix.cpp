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
#include <doctest.h>

#include "support/generators.hpp"
#include "tabforge/cell_matrix.hpp"

using namespace tabforge;
namespace ts = tabforge::testsupport;

namespace {

CellMatrix m(const char* text) { return CellMatrix::from_text(text); }

LogicalCell cell(int row, int col, int rs = 1, int cs = 1) {
    LogicalCell c;
    c.anchor_row = row;
    c.anchor_col = col;
    c.row_span = rs;
    c.col_span = cs;
    return c;
}

} // namespace

TEST_SUITE_BEGIN("cell_matrix");

TEST_CASE("text serialization round-trips and tolerates spaces") {
    const CellMatrix a = m("CL\nUX");
    CHECK(a.n_rows() == 2);
    CHECK(a.n_cols() == 2);
    CHECK(a.to_text() == "CL\nUX");
    CHECK(m(" C L \n U X ") == a);
    CHECK(m("CL\nUX\n") == a);
    CHECK_THROWS_AS(m(""), Error);
    CHECK_THROWS_AS(m("CL\nU"), Error);
    CHECK_THROWS_AS(m("Cq"), Error);
}

TEST_CASE("validate_matrix accepts the all-independent grid") {
    CHECK(validate_matrix(m("CC\nCC")).is_valid());
}

TEST_CASE("validate_matrix accepts a full 2x2 merge") {
    CHECK(validate_matrix(m("CL\nUX")).is_valid());
}

TEST_CASE("validate_matrix rejects L in column 0") {
    const ValidationReport report = validate_matrix(m("LC"));
    REQUIRE_FALSE(report.is_valid());
    CHECK(report.violations.front().rule_id == "L_col0");
    CHECK(report.violations.front().message == "L in column 0");
    CHECK(report.violations.front().row == 0);
    CHECK(report.violations.front().col == 0);
}

TEST_CASE("validate_matrix reports every local rule") {
    CHECK(validate_matrix(m("CU")).violations.front().rule_id == "U_row0");
    CHECK(validate_matrix(m("CX")).violations.front().rule_id == "X_row0");
    CHECK(validate_matrix(m("C\nX")).violations.front().rule_id == "X_col0");
    CHECK(validate_matrix(m("CC\nUL")).violations.front().rule_id == "L_left");
    CHECK(validate_matrix(m("CL\nCU")).violations.front().rule_id == "U_up");
    // X below a C and right of a C breaks both X rules
    const ValidationReport x_report = validate_matrix(m("CC\nCX"));
    REQUIRE(x_report.violations.size() == 2);
    CHECK(x_report.violations[0].rule_id == "X_left");
    CHECK(x_report.violations[1].rule_id == "X_up");
}

TEST_CASE("validate_matrix rejects locally-consistent but overlapping merges") {
    // the derived 2x2 region of (0,0) collides with the C at (1,1)
    const ValidationReport report = validate_matrix(m("CL\nUC"));
    REQUIRE_FALSE(report.is_valid());
    CHECK(report.violations.front().rule_id == "overlap");
}

TEST_CASE("matrix_to_cells derives spans from runs") {
    SUBCASE("forced by token semantics") {
        const TableStructure s = matrix_to_cells(m("CL\nCC"));
        REQUIRE(s.cells.size() == 3);
        CHECK(s.cells[0] == cell(0, 0, 1, 2));
        CHECK(s.cells[1] == cell(1, 0));
        CHECK(s.cells[2] == cell(1, 1));
    }
    SUBCASE("hand-applied anchor and run rules") {
        const TableStructure s = matrix_to_cells(m("CC\nCL\nUX"));
        REQUIRE(s.cells.size() == 3);
        CHECK(s.cells[0] == cell(0, 0));
        CHECK(s.cells[1] == cell(0, 1));
        CHECK(s.cells[2] == cell(1, 0, 2, 2));
    }
    SUBCASE("identity case") {
        const TableStructure s = matrix_to_cells(m("C"));
        REQUIRE(s.cells.size() == 1);
        CHECK(s.cells[0] == cell(0, 0));
    }
    SUBCASE("invalid input throws") {
        CHECK_THROWS_AS(matrix_to_cells(m("LC")), Error);
    }
}

TEST_CASE("cells_to_matrix inverts matrix_to_cells") {
    SUBCASE("single 2x2 cell") {
        TableStructure s;
        s.n_rows = 2;
        s.n_cols = 2;
        s.cells = {cell(0, 0, 2, 2)};
        CHECK(cells_to_matrix(s) == m("CL\nUX"));
    }
    SUBCASE("three cells from the derivation example") {
        TableStructure s;
        s.n_rows = 3;
        s.n_cols = 2;
        s.cells = {cell(0, 0), cell(0, 1), cell(1, 0, 2, 2)};
        CHECK(cells_to_matrix(s) == m("CC\nCL\nUX"));
    }
    SUBCASE("overlap and gaps are rejected") {
        TableStructure overlap;
        overlap.n_rows = 2;
        overlap.n_cols = 2;
        overlap.cells = {cell(0, 0, 2, 2), cell(1, 1)};
        CHECK_THROWS_AS(cells_to_matrix(overlap), Error);

        TableStructure gap;
        gap.n_rows = 2;
        gap.n_cols = 2;
        gap.cells = {cell(0, 0), cell(0, 1), cell(1, 0)};
        CHECK_THROWS_AS(cells_to_matrix(gap), Error);

        TableStructure oob;
        oob.n_rows = 1;
        oob.n_cols = 1;
        oob.cells = {cell(0, 0, 1, 2)};
        CHECK_THROWS_AS(cells_to_matrix(oob), Error);
    }
}

TEST_CASE("round trip holds on random matrices") {
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
        const CellMatrix matrix = ts::random_matrix(rng, 16);
        CHECK(cells_to_matrix(matrix_to_cells(matrix)) == matrix);
    }
}

TEST_CASE("crop_top_left") {
    const CellMatrix matrix = m("CL\nUX");
    SUBCASE("identity crop") { CHECK(crop_top_left(matrix, 2, 2) == matrix); }
    SUBCASE("anchor survives alone") { CHECK(crop_top_left(matrix, 1, 1) == m("C")); }
    SUBCASE("bounds are checked") {
        CHECK_THROWS_AS(crop_top_left(matrix, 0, 1), Error);
        CHECK_THROWS_AS(crop_top_left(matrix, 3, 1), Error);
        CHECK_THROWS_AS(crop_top_left(matrix, 1, 3), Error);
    }
}

TEST_CASE("cropping invariance on random matrices") {
    Rng rng(12);
    for (int i = 0; i < 500; ++i) {
        const CellMatrix matrix = ts::random_matrix(rng, 14);
        const int r = static_cast<int>(rng.uniform_int(1, matrix.n_rows()));
        const int c = static_cast<int>(rng.uniform_int(1, matrix.n_cols()));
        const CellMatrix crop = crop_top_left(matrix, r, c);
        CHECK(validate_matrix(crop).is_valid());

        // the crop's logical cells equal the originals clipped to the window
        std::vector<LogicalCell> expected;
        for (const LogicalCell& cell : matrix_to_cells(matrix).cells) {
            if (cell.anchor_row >= r || cell.anchor_col >= c) continue;
            LogicalCell clipped = cell;
            clipped.row_span = std::min(cell.row_span, r - cell.anchor_row);
            clipped.col_span = std::min(cell.col_span, c - cell.anchor_col);
            expected.push_back(clipped);
        }
        CHECK(matrix_to_cells(crop).cells == expected);
    }
}

TEST_CASE("splice") {
    SUBCASE("single block is the identity") {
        const CellMatrix block = m("CC\nCL");
        BlockLayout layout;
        layout.n_rows = 2;
        layout.n_cols = 2;
        CHECK(splice(layout, {block}) == block);
    }
    SUBCASE("2x2 layout of four blocks stays valid") {
        BlockLayout layout;
        layout.n_rows = 4;
        layout.n_cols = 4;
        layout.row_cuts = {2};
        layout.col_cuts = {2};
        const CellMatrix merged = m("CL\nUX");
        const CellMatrix plain = m("CC\nCC");
        const CellMatrix result = splice(layout, {merged, plain, plain, merged});
        CHECK(validate_matrix(result).is_valid());
        CHECK(result.to_text() == "CLCC\nUXCC\nCCCL\nCCUX");
    }
    SUBCASE("invalid block is rejected") {
        BlockLayout layout;
        layout.n_rows = 1;
        layout.n_cols = 2;
        CHECK_THROWS_AS(splice(layout, {m("UC")}), Error);
    }
    SUBCASE("dimension mismatches are rejected") {
        BlockLayout layout;
        layout.n_rows = 2;
        layout.n_cols = 2;
        CHECK_THROWS_AS(splice(layout, {m("C")}), Error);
        CHECK_THROWS_AS(splice(layout, {m("CC\nCC"), m("C")}), Error);
    }
}

TEST_CASE("splice validity on random block grids") {
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const int rows = static_cast<int>(rng.uniform_int(2, 12));
        const int cols = static_cast<int>(rng.uniform_int(2, 12));
        BlockLayout layout;
        layout.n_rows = rows;
        layout.n_cols = cols;
        layout.row_cuts = {static_cast<int>(rng.uniform_int(1, rows - 1))};
        layout.col_cuts = {static_cast<int>(rng.uniform_int(1, cols - 1))};
        std::vector<CellMatrix> blocks;
        for (const BlockRegion& region : layout.regions()) {
            blocks.push_back(ts::random_matrix(region.height, region.width, rng));
        }
        CHECK(validate_matrix(splice(layout, blocks)).is_valid());
    }
}

TEST_CASE("inject_merges") {
    Rng rng(14);
    SUBCASE("zero moves is a no-op") {
        const CellMatrix matrix = m("CC\nCC");
        CHECK(inject_merges(matrix, 0, rng) == matrix);
    }
    SUBCASE("single forced horizontal move") {
        CHECK(inject_merges(m("CC"), 1, rng) == m("CL"));
    }
    SUBCASE("stops when no pair of unit cells remains") {
        CHECK(inject_merges(m("CL\nUX"), 5, rng) == m("CL\nUX"));
        // 1x2 all-plain admits exactly one merge
        CHECK(inject_merges(m("CC"), 10, rng) == m("CL"));
    }
    SUBCASE("validity and dimensions preserved on random inputs") {
        for (int i = 0; i < 300; ++i) {
            const CellMatrix matrix = ts::random_matrix(rng, 10);
            const int k = static_cast<int>(rng.uniform_int(0, 12));
            const CellMatrix merged = inject_merges(matrix, k, rng);
            CHECK(validate_matrix(merged).is_valid());
            CHECK(merged.n_rows() == matrix.n_rows());
            CHECK(merged.n_cols() == matrix.n_cols());
        }
    }
}

TEST_CASE("detect_implicit") {
    SUBCASE("row continued only from above is implicit") {
        const ImplicitReport report = detect_implicit(m("CC\nCL\nUX"));
        CHECK(report.implicit_rows == std::vector<int>{2});
        CHECK(report.implicit_cols.empty());
    }
    SUBCASE("all-C grid has none") {
        CHECK(detect_implicit(m("CC\nCC")).empty());
    }
    SUBCASE("transposed case flags the column") {
        const ImplicitReport report = detect_implicit(m("CCL\nCUX"));
        CHECK(report.implicit_rows.empty());
        CHECK(report.implicit_cols == std::vector<int>{2});
    }
    SUBCASE("full-width rowspan cell produces an implicit row") {
        // a 2-row cell spanning every column leaves its second row unanchored
        const ImplicitReport report = detect_implicit(m("CLL\nUXX\nCCC"));
        CHECK(report.implicit_rows == std::vector<int>{1});
        CHECK(report.implicit_cols.empty());
    }
}

TEST_CASE("remove_implicit") {
    SUBCASE("clean matrices are fixed points") {
        const CellMatrix matrix = m("CC\nCC");
        CHECK(remove_implicit(matrix) == matrix);
    }
    SUBCASE("spanning cell shrinks when its row goes") {
        CHECK(remove_implicit(m("CC\nCL\nUX")) == m("CC\nCL"));
    }
    SUBCASE("idempotent and clean on random inputs") {
        Rng rng(15);
        for (int i = 0; i < 300; ++i) {
            const CellMatrix matrix = ts::random_matrix_with_implicit(rng);
            const CellMatrix repaired = remove_implicit(matrix);
            CHECK(validate_matrix(repaired).is_valid());
            CHECK(detect_implicit(repaired).empty());
            CHECK(remove_implicit(repaired) == repaired);
        }
    }
    SUBCASE("structure-level removal preserves contents") {
        TableStructure s;
        s.n_rows = 3;
        s.n_cols = 2;
        s.cells = {cell(0, 0), cell(0, 1), cell(1, 0, 2, 2)};
        s.cells[0].content = "a";
        s.cells[2].content = "wide";
        const TableStructure repaired = remove_implicit(s);
        CHECK(repaired.n_rows == 2);
        CHECK(repaired.cells[2].row_span == 1);
        CHECK(repaired.cells[2].content == "wide");
        CHECK(repaired.cells[0].content == "a");
    }
}

TEST_CASE("structure-level implicit detection matches the token definition") {
    Rng rng(16);
    for (int i = 0; i < 200; ++i) {
        const CellMatrix matrix = ts::random_matrix_with_implicit(rng);
        const ImplicitReport from_tokens = detect_implicit(matrix);
        const ImplicitReport from_cells = detect_implicit_structure(matrix_to_cells(matrix));
        CHECK(from_tokens.implicit_rows == from_cells.implicit_rows);
        CHECK(from_tokens.implicit_cols == from_cells.implicit_cols);
    }
}

TEST_CASE("rectangularity: derived cells re-tile the grid") {
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const CellMatrix matrix = ts::random_matrix(rng, 12);
        const TableStructure s = matrix_to_cells(matrix);
        // re-tiling throws if any region is not a clean rectangle
        CHECK_NOTHROW(cells_to_matrix(s));
        long long area = 0;
        for (const LogicalCell& cell : s.cells) area += static_cast<long long>(cell.row_span) * cell.col_span;
        CHECK(area == static_cast<long long>(matrix.n_rows()) * matrix.n_cols());
    }
}

TEST_SUITE_END();
