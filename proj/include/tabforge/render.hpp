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

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tabforge/cell_matrix.hpp"
#include "tabforge/rng.hpp"

namespace tabforge {

enum class TextAlign { left, center, right, justify };
enum class BorderStyle { solid, dashed, dotted, double_line, none };
enum class LineType { single, double_line, hidden };

struct Rgb {
    int r = 0;
    int g = 0;
    int b = 0;

    friend bool operator==(const Rgb& a, const Rgb& b) = default;
};

/// Randomized CSS augmentation applied before rendering. Text and
/// background keep a contrast ratio of at least 2:1 so the downstream
/// geometry extraction stays reliable.
struct StyleAugmentation {
    TextAlign text_align = TextAlign::left;
    int font_family = 0; // index into font_families()
    int font_size_pt = 12;
    int padding_px = 2;
    BorderStyle border_style = BorderStyle::solid;
    LineType line_type = LineType::single;
    Rgb text_color{0, 0, 0};
    Rgb background_color{255, 255, 255};

    friend bool operator==(const StyleAugmentation& a, const StyleAugmentation& b) = default;
};

/// Fixed limits honoured by the external renderer; violating samples are
/// discarded.
struct RenderConstraints {
    static constexpr int max_height_px = 5000;
    static constexpr int max_width_px = 3000;
    static constexpr int min_font_height_px = 12;
};

/// Six serif plus six sans-serif families.
const std::array<std::string_view, 12>& font_families();

const char* to_css(TextAlign align);
const char* to_css(BorderStyle style);
const char* to_string(LineType type);

/// WCAG relative-luminance contrast ratio, >= 1.
double contrast_ratio(const Rgb& a, const Rgb& b);

StyleAugmentation sample_style(Rng& rng);

/// Standalone document embedding the table and a style sheet realising
/// the augmentation. Deterministic for fixed inputs.
std::string emit_document(std::string_view table_html, const StyleAugmentation& style);

enum class ConstraintVerdict { keep, discard };

ConstraintVerdict check_constraints(int reported_width, int reported_height, int min_glyph_height);

/// Per-cell geometry reported back by the external renderer.
struct GeometryRecord {
    int row = 0;
    int col = 0;
    std::array<double, 4> box{0, 0, 0, 0}; // x_min, y_min, x_max, y_max
};

std::vector<GeometryRecord> load_geometry(const std::filesystem::path& path);

/// Checks box ordering, pairwise interior disjointness, and that the
/// reported anchors match the structure's cells; returns problems found.
std::vector<std::string> check_geometry(const std::vector<GeometryRecord>& geometry,
                                        const TableStructure& structure);

/// One table to hand to the external renderer.
struct RenderItem {
    std::string id;
    std::string html; // content-bearing table markup
    StyleAugmentation style;
    TableStructure structure;
};

/// Writes docs/<id>.html plus manifest.jsonl under out_dir. Each manifest
/// entry names the document, the expected image, the constraint set, and
/// one XPath locator per cell anchor. Returns the manifest path.
std::filesystem::path render_manifest(const std::vector<RenderItem>& items,
                                      const std::filesystem::path& out_dir);

} // namespace tabforge
