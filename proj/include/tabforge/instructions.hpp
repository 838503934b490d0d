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
#include <vector>

#include "tabforge/cell_matrix.hpp"
#include "tabforge/rng.hpp"

namespace tabforge {

/// Parameters bound to a template; indices are 1-based as rendered.
struct InstructionParams {
    std::vector<int> rows; // R, ascending
    std::vector<int> cols; // C, ascending
    int x = 0;
    int y = 0;
};

/// One of the 13 table-understanding templates, organised in four groups:
/// (1) whole structure with optional dimension hints, (2) positional cell
/// selections, (3) empty/non-empty cells, (4) merged cells.
struct InstructionSpec {
    int group = 1;   // 1..4
    int variant = 1; // 1-based within the group
    InstructionParams params;
};

/// Number of variants per group: 4, 4, 2, 3.
int variants_in_group(int group);
constexpr int kTemplateCount = 13;

/// Enumerates the 13 templates in group order; index is 0..12.
InstructionSpec template_by_index(int index);

enum class TargetKind { full_structure, cell_subset };

/// The filtered candidate set an instruction admits on a table.
struct TargetSet {
    TargetKind kind = TargetKind::cell_subset;
    std::vector<LogicalCell> cells; // unique, sorted by (anchor_row, anchor_col)
    std::string serialized;         // matrix text for full_structure, JSON cell list otherwise
};

struct TrainingTriplet {
    std::string instruction_text;
    std::string source_id;
    TargetKind target_kind = TargetKind::full_structure;
    std::string target_matrix;         // set for full_structure targets
    std::vector<LogicalCell> target_cells; // the sampled instance otherwise
};

/// Renders the template wording with n, m and the 1-based parameters
/// substituted. Set-valued parameters print as "1, 3".
std::string render_instruction(const InstructionSpec& spec, const TableStructure& s);

/// Computes the candidate set: group 1 is the full structure; group 2
/// selects cells whose rectangle intersects the named lines (variant 4:
/// the ring of cells adjacent to the cell covering (x, y)); group 3 splits
/// by empty content; group 4 by span extents.
TargetSet select_targets(const InstructionSpec& spec, const TableStructure& s);

/// Samples a template uniformly, binds random parameters, retries while
/// the candidate set is empty, then picks one candidate uniformly.
TrainingTriplet sample_triplet(const TableStructure& s, const std::string& source_id, Rng& rng);

/// The unified inference-time instruction.
std::string prediction_instruction();

} // namespace tabforge
