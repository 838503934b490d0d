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
#include "tabforge/render.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tabforge/html_codec.hpp"

namespace tabforge {

namespace {

using nlohmann::json;

double srgb_channel(int value) {
    const double c = value / 255.0;
    return c <= 0.03928 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double relative_luminance(const Rgb& color) {
    return 0.2126 * srgb_channel(color.r) + 0.7152 * srgb_channel(color.g) +
           0.0722 * srgb_channel(color.b);
}

Rgb sample_color(Rng& rng) {
    return Rgb{static_cast<int>(rng.uniform_int(0, 255)), static_cast<int>(rng.uniform_int(0, 255)),
               static_cast<int>(rng.uniform_int(0, 255))};
}

std::string css_color(const Rgb& c) {
    return "rgb(" + std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b) + ")";
}

} // namespace

const std::array<std::string_view, 12>& font_families() {
    static const std::array<std::string_view, 12> families = {
        // serif
        "Georgia", "Times New Roman", "Garamond", "Palatino Linotype", "Book Antiqua", "Cambria",
        // sans-serif
        "Arial", "Helvetica", "Verdana", "Tahoma", "Trebuchet MS", "Segoe UI"};
    return families;
}

const char* to_css(TextAlign align) {
    switch (align) {
        case TextAlign::left: return "left";
        case TextAlign::center: return "center";
        case TextAlign::right: return "right";
        case TextAlign::justify: return "justify";
    }
    return "left";
}

const char* to_css(BorderStyle style) {
    switch (style) {
        case BorderStyle::solid: return "solid";
        case BorderStyle::dashed: return "dashed";
        case BorderStyle::dotted: return "dotted";
        case BorderStyle::double_line: return "double";
        case BorderStyle::none: return "none";
    }
    return "solid";
}

const char* to_string(LineType type) {
    switch (type) {
        case LineType::single: return "single";
        case LineType::double_line: return "double";
        case LineType::hidden: return "hidden";
    }
    return "single";
}

double contrast_ratio(const Rgb& a, const Rgb& b) {
    const double la = relative_luminance(a);
    const double lb = relative_luminance(b);
    const double lighter = std::max(la, lb);
    const double darker = std::min(la, lb);
    return (lighter + 0.05) / (darker + 0.05);
}

StyleAugmentation sample_style(Rng& rng) {
    StyleAugmentation style;
    style.text_align = static_cast<TextAlign>(rng.uniform_int(0, 3));
    style.font_family = static_cast<int>(rng.uniform_int(0, 11));
    style.font_size_pt = static_cast<int>(rng.uniform_int(10, 25));
    style.padding_px = static_cast<int>(rng.uniform_int(2, 12));
    style.border_style = static_cast<BorderStyle>(rng.uniform_int(0, 4));
    style.line_type = static_cast<LineType>(rng.uniform_int(0, 2));
    do {
        style.text_color = sample_color(rng);
        style.background_color = sample_color(rng);
    } while (contrast_ratio(style.text_color, style.background_color) < 2.0);
    return style;
}

std::string emit_document(std::string_view table_html, const StyleAugmentation& style) {
    // reject non-table input up front
    parse_table_html(table_html);

    std::string css;
    // line_type mapping: single collapses borders, double separates them so
    // adjacent cell borders read as a double rule, hidden hides the edges.
    css += "/* line type: ";
    css += to_string(style.line_type);
    css += " */\n";
    css += "table { ";
    switch (style.line_type) {
        case LineType::single: css += "border-collapse: collapse; "; break;
        case LineType::double_line: css += "border-collapse: separate; border-spacing: 0; "; break;
        case LineType::hidden: css += "border-collapse: collapse; border-style: hidden; "; break;
    }
    css += "font-family: \"" + std::string(font_families()[static_cast<std::size_t>(style.font_family)]) +
           "\"; ";
    css += "font-size: " + std::to_string(style.font_size_pt) + "pt; ";
    css += "color: " + css_color(style.text_color) + "; ";
    css += "background-color: " + css_color(style.background_color) + "; ";
    css += "}\n";
    css += "td, th { ";
    css += "text-align: ";
    css += to_css(style.text_align);
    css += "; ";
    css += "padding: " + std::to_string(style.padding_px) + "px; ";
    css += "border: 1px ";
    css += to_css(style.border_style);
    css += " " + css_color(style.text_color) + "; ";
    css += "}\n";

    std::string out;
    out += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<style>\n";
    out += css;
    out += "</style>\n</head>\n<body>\n";
    out += std::string(table_html);
    out += "\n</body>\n</html>\n";
    return out;
}

ConstraintVerdict check_constraints(int reported_width, int reported_height, int min_glyph_height) {
    if (reported_width > RenderConstraints::max_width_px) return ConstraintVerdict::discard;
    if (reported_height > RenderConstraints::max_height_px) return ConstraintVerdict::discard;
    if (min_glyph_height < RenderConstraints::min_font_height_px) return ConstraintVerdict::discard;
    return ConstraintVerdict::keep;
}

std::vector<GeometryRecord> load_geometry(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::unreadable_path, "cannot open " + path.string());
    }
    std::vector<GeometryRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::malformed_markup, "geometry line is not JSON: " + std::string(e.what()));
        }
        GeometryRecord record;
        record.row = doc.at("row").get<int>();
        record.col = doc.at("col").get<int>();
        const auto box = doc.at("box").get<std::vector<double>>();
        if (box.size() != 4) {
            throw Error(ErrorCode::malformed_markup, "geometry box must have 4 entries");
        }
        std::copy(box.begin(), box.end(), record.box.begin());
        out.push_back(record);
    }
    return out;
}

std::vector<std::string> check_geometry(const std::vector<GeometryRecord>& geometry,
                                        const TableStructure& structure) {
    std::vector<std::string> problems;
    auto anchor_exists = [&](int row, int col) {
        return std::any_of(structure.cells.begin(), structure.cells.end(), [&](const LogicalCell& c) {
            return c.anchor_row == row && c.anchor_col == col;
        });
    };
    for (const GeometryRecord& g : geometry) {
        if (g.box[0] > g.box[2] || g.box[1] > g.box[3]) {
            problems.push_back("cell (" + std::to_string(g.row) + "," + std::to_string(g.col) +
                               ") has an inverted box");
        }
        if (!anchor_exists(g.row, g.col)) {
            problems.push_back("no cell anchors at (" + std::to_string(g.row) + "," +
                               std::to_string(g.col) + ")");
        }
    }
    for (std::size_t i = 0; i < geometry.size(); ++i) {
        for (std::size_t j = i + 1; j < geometry.size(); ++j) {
            const auto& a = geometry[i].box;
            const auto& b = geometry[j].box;
            const bool overlap = a[0] < b[2] && b[0] < a[2] && a[1] < b[3] && b[1] < a[3];
            if (overlap) {
                problems.push_back("boxes of (" + std::to_string(geometry[i].row) + "," +
                                   std::to_string(geometry[i].col) + ") and (" +
                                   std::to_string(geometry[j].row) + "," +
                                   std::to_string(geometry[j].col) + ") overlap");
            }
        }
    }
    return problems;
}

namespace {

// Positional XPath for the td/th of the cell anchored at (row, col). The
// tr index counts rows through thead/tbody alike; the cell index counts
// anchors within the row.
std::string cell_locator(const TableStructure& s, const LogicalCell& cell) {
    int cell_position = 1;
    for (const LogicalCell& other : s.cells) {
        if (other.anchor_row == cell.anchor_row && other.anchor_col < cell.anchor_col) {
            ++cell_position;
        }
    }
    return "(//table//tr)[" + std::to_string(cell.anchor_row + 1) + "]/*[" +
           std::to_string(cell_position) + "]";
}

} // namespace

std::filesystem::path render_manifest(const std::vector<RenderItem>& items,
                                      const std::filesystem::path& out_dir) {
    const std::filesystem::path docs_dir = out_dir / "docs";
    std::filesystem::create_directories(docs_dir);

    const std::filesystem::path manifest_path = out_dir / "manifest.jsonl";
    std::ofstream manifest(manifest_path);
    if (!manifest) {
        throw Error(ErrorCode::unreadable_path, "cannot write " + manifest_path.string());
    }
    for (const RenderItem& item : items) {
        const std::string doc_name = item.id + ".html";
        {
            std::ofstream doc(docs_dir / doc_name, std::ios::binary);
            if (!doc) {
                throw Error(ErrorCode::unreadable_path, "cannot write " + (docs_dir / doc_name).string());
            }
            doc << emit_document(item.html, item.style);
        }
        json entry;
        entry["id"] = item.id;
        entry["document"] = "docs/" + doc_name;
        entry["image"] = "images/" + item.id + ".png";
        entry["geometry"] = "geometry/" + item.id + ".jsonl";
        entry["constraints"] = {{"max_width_px", RenderConstraints::max_width_px},
                                {"max_height_px", RenderConstraints::max_height_px},
                                {"min_font_height_px", RenderConstraints::min_font_height_px}};
        json cells = json::array();
        for (const LogicalCell& cell : item.structure.cells) {
            cells.push_back({{"row", cell.anchor_row},
                             {"col", cell.anchor_col},
                             {"locator", cell_locator(item.structure, cell)}});
        }
        entry["cells"] = cells;
        manifest << entry.dump() << "\n";
    }
    return manifest_path;
}

} // namespace tabforge
