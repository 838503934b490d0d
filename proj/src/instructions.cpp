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
#include "tabforge/instructions.hpp"

#include <algorithm>

#include "tabforge/html_codec.hpp"

namespace tabforge {

namespace {

std::string join_indices(const std::vector<int>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(values[i]);
    }
    return out;
}

void require(bool condition, const std::string& message) {
    if (!condition) throw Error(ErrorCode::param_out_of_range, message);
}

void check_params(const InstructionSpec& spec, const TableStructure& s) {
    const auto in_rows = [&](int v) { return v >= 1 && v <= s.n_rows; };
    const auto in_cols = [&](int v) { return v >= 1 && v <= s.n_cols; };
    if (spec.group == 2) {
        switch (spec.variant) {
            case 1:
                require(!spec.params.rows.empty(), "R must be non-empty");
                require(std::all_of(spec.params.rows.begin(), spec.params.rows.end(), in_rows),
                        "row index outside table");
                break;
            case 2:
                require(!spec.params.cols.empty(), "C must be non-empty");
                require(std::all_of(spec.params.cols.begin(), spec.params.cols.end(), in_cols),
                        "column index outside table");
                break;
            case 3:
            case 4:
                require(in_rows(spec.params.x), "x outside table rows");
                require(in_cols(spec.params.y), "y outside table columns");
                break;
            default:
                require(false, "unknown group 2 variant");
        }
    }
}

bool intersects_rows(const LogicalCell& cell, const std::vector<int>& rows_1based) {
    for (int r : rows_1based) {
        const int r0 = r - 1;
        if (r0 >= cell.anchor_row && r0 < cell.anchor_row + cell.row_span) return true;
    }
    return false;
}

bool intersects_cols(const LogicalCell& cell, const std::vector<int>& cols_1based) {
    for (int c : cols_1based) {
        const int c0 = c - 1;
        if (c0 >= cell.anchor_col && c0 < cell.anchor_col + cell.col_span) return true;
    }
    return false;
}

const LogicalCell* cell_covering(const TableStructure& s, int row0, int col0) {
    for (const LogicalCell& cell : s.cells) {
        if (row0 >= cell.anchor_row && row0 < cell.anchor_row + cell.row_span &&
            col0 >= cell.anchor_col && col0 < cell.anchor_col + cell.col_span) {
            return &cell;
        }
    }
    return nullptr;
}

// Rectangles within Chebyshev distance 1 of each other touch by edge or
// corner.
bool rectangles_adjacent(const LogicalCell& a, const LogicalCell& b) {
    const int a_r1 = a.anchor_row, a_r2 = a.anchor_row + a.row_span - 1;
    const int a_c1 = a.anchor_col, a_c2 = a.anchor_col + a.col_span - 1;
    const int b_r1 = b.anchor_row, b_r2 = b.anchor_row + b.row_span - 1;
    const int b_c1 = b.anchor_col, b_c2 = b.anchor_col + b.col_span - 1;
    const int row_gap = std::max({a_r1 - b_r2, b_r1 - a_r2, 0});
    const int col_gap = std::max({a_c1 - b_c2, b_c1 - a_c2, 0});
    return std::max(row_gap, col_gap) == 1;
}

std::string serialize_cells(const std::vector<LogicalCell>& cells) {
    std::string out = "[";
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const LogicalCell& c = cells[i];
        if (i > 0) out += ",";
        out += "{\"row\":" + std::to_string(c.anchor_row) + ",\"col\":" + std::to_string(c.anchor_col) +
               ",\"row_span\":" + std::to_string(c.row_span) + ",\"col_span\":" + std::to_string(c.col_span) + "}";
    }
    out += "]";
    return out;
}

} // namespace

int variants_in_group(int group) {
    switch (group) {
        case 1: return 4;
        case 2: return 4;
        case 3: return 2;
        case 4: return 3;
        default: throw Error(ErrorCode::param_out_of_range, "group must be 1..4");
    }
}

InstructionSpec template_by_index(int index) {
    require(index >= 0 && index < kTemplateCount, "template index must be 0..12");
    int remaining = index;
    for (int group = 1; group <= 4; ++group) {
        const int count = variants_in_group(group);
        if (remaining < count) {
            InstructionSpec spec;
            spec.group = group;
            spec.variant = remaining + 1;
            return spec;
        }
        remaining -= count;
    }
    throw Error(ErrorCode::param_out_of_range, "template index must be 0..12");
}

std::string render_instruction(const InstructionSpec& spec, const TableStructure& s) {
    check_params(spec, s);
    const std::string n = std::to_string(s.n_rows);
    const std::string m = std::to_string(s.n_cols);
    switch (spec.group) {
        case 1:
            switch (spec.variant) {
                case 1: return "Recognize all cells.";
                case 2: return "Recognize all cells, the table has " + n + " rows.";
                case 3: return "Recognize all cells, the table has " + m + " columns.";
                case 4: return "Recognize all cells, the table has " + n + " rows and " + m + " columns.";
            }
            break;
        case 2:
            switch (spec.variant) {
                case 1: return "Cells in the " + join_indices(spec.params.rows) + " rows.";
                case 2: return "Cells in the " + join_indices(spec.params.cols) + " columns.";
                case 3:
                    return "Cells in the " + std::to_string(spec.params.x) + " row and the " +
                           std::to_string(spec.params.y) + " column.";
                case 4:
                    return "Cells around the cell in the " + std::to_string(spec.params.x) +
                           " row and the " + std::to_string(spec.params.y) + " column.";
            }
            break;
        case 3:
            switch (spec.variant) {
                case 1: return "Recognize all empty cells.";
                case 2: return "Recognize all non-empty cells.";
            }
            break;
        case 4:
            switch (spec.variant) {
                case 1: return "Cells merged across multiple rows.";
                case 2: return "Cells merged across multiple columns.";
                case 3: return "Cells merged across multiple rows and multiple columns.";
            }
            break;
    }
    throw Error(ErrorCode::param_out_of_range, "unknown template");
}

TargetSet select_targets(const InstructionSpec& spec, const TableStructure& s) {
    check_params(spec, s);
    TargetSet target;
    if (spec.group == 1) {
        target.kind = TargetKind::full_structure;
        target.serialized = cells_to_matrix(s).to_text();
        return target;
    }
    target.kind = TargetKind::cell_subset;
    auto add_if = [&](auto&& predicate) {
        for (const LogicalCell& cell : s.cells) {
            if (predicate(cell)) target.cells.push_back(cell);
        }
    };
    if (spec.group == 2) {
        switch (spec.variant) {
            case 1:
                add_if([&](const LogicalCell& c) { return intersects_rows(c, spec.params.rows); });
                break;
            case 2:
                add_if([&](const LogicalCell& c) { return intersects_cols(c, spec.params.cols); });
                break;
            case 3:
                add_if([&](const LogicalCell& c) {
                    return intersects_rows(c, {spec.params.x}) && intersects_cols(c, {spec.params.y});
                });
                break;
            case 4: {
                const LogicalCell* centre = cell_covering(s, spec.params.x - 1, spec.params.y - 1);
                if (centre != nullptr) {
                    add_if([&](const LogicalCell& c) {
                        return !(c == *centre) && rectangles_adjacent(c, *centre);
                    });
                }
                break;
            }
        }
    } else if (spec.group == 3) {
        const bool want_empty = spec.variant == 1;
        add_if([&](const LogicalCell& c) { return is_empty_cell(c) == want_empty; });
    } else {
        switch (spec.variant) {
            case 1:
                add_if([](const LogicalCell& c) { return c.row_span > 1; });
                break;
            case 2:
                add_if([](const LogicalCell& c) { return c.col_span > 1; });
                break;
            case 3:
                add_if([](const LogicalCell& c) { return c.row_span > 1 && c.col_span > 1; });
                break;
        }
    }
    // cells were scanned in structure order, which is already row-major
    target.serialized = serialize_cells(target.cells);
    return target;
}

TrainingTriplet sample_triplet(const TableStructure& s, const std::string& source_id, Rng& rng) {
    constexpr int kRetryBudget = 100;
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        InstructionSpec spec = template_by_index(static_cast<int>(rng.uniform_int(0, kTemplateCount - 1)));
        if (spec.group == 2) {
            switch (spec.variant) {
                case 1:
                    do {
                        spec.params.rows.clear();
                        for (int r = 1; r <= s.n_rows; ++r) {
                            if (rng.bernoulli(0.5)) spec.params.rows.push_back(r);
                        }
                    } while (spec.params.rows.empty());
                    break;
                case 2:
                    do {
                        spec.params.cols.clear();
                        for (int c = 1; c <= s.n_cols; ++c) {
                            if (rng.bernoulli(0.5)) spec.params.cols.push_back(c);
                        }
                    } while (spec.params.cols.empty());
                    break;
                case 3:
                case 4:
                    spec.params.x = static_cast<int>(rng.uniform_int(1, s.n_rows));
                    spec.params.y = static_cast<int>(rng.uniform_int(1, s.n_cols));
                    break;
            }
        }
        const TargetSet candidates = select_targets(spec, s);
        if (candidates.kind == TargetKind::cell_subset && candidates.cells.empty()) continue;

        TrainingTriplet triplet;
        triplet.instruction_text = render_instruction(spec, s);
        triplet.source_id = source_id;
        triplet.target_kind = candidates.kind;
        if (candidates.kind == TargetKind::full_structure) {
            triplet.target_matrix = candidates.serialized;
        } else {
            const auto pick = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<long long>(candidates.cells.size()) - 1));
            triplet.target_cells.push_back(candidates.cells[pick]);
        }
        return triplet;
    }
    throw Error(ErrorCode::no_valid_instruction, "no admissible template after retry budget");
}

std::string prediction_instruction() {
    return "Recognize all cells.";
}

} // namespace tabforge
