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

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "support/generators.hpp"
#include "tabforge/html_codec.hpp"
#include "tabforge/render.hpp"

using namespace tabforge;
namespace ts = tabforge::testsupport;
namespace fs = std::filesystem;
using nlohmann::json;

TEST_SUITE_BEGIN("render");

TEST_CASE("sample_style stays in range and respects the contrast floor") {
    Rng rng(71);
    for (int i = 0; i < 10000; ++i) {
        const StyleAugmentation style = sample_style(rng);
        CHECK(style.font_family >= 0);
        CHECK(style.font_family < 12);
        CHECK(style.font_size_pt >= 10);
        CHECK(style.font_size_pt <= 25);
        CHECK(style.padding_px >= 2);
        CHECK(style.padding_px <= 12);
        CHECK(contrast_ratio(style.text_color, style.background_color) >= 2.0);
    }
}

TEST_CASE("sample_style is reproducible for a fixed seed") {
    Rng a(72);
    Rng b(72);
    for (int i = 0; i < 50; ++i) {
        CHECK(sample_style(a) == sample_style(b));
    }
}

TEST_CASE("contrast ratio basics") {
    CHECK(contrast_ratio({0, 0, 0}, {255, 255, 255}) == doctest::Approx(21.0).epsilon(0.01));
    CHECK(contrast_ratio({128, 128, 128}, {128, 128, 128}) == doctest::Approx(1.0));
    CHECK(contrast_ratio({0, 0, 0}, {255, 255, 255}) ==
          doctest::Approx(contrast_ratio({255, 255, 255}, {0, 0, 0})));
}

TEST_CASE("emit_document") {
    Rng rng(73);
    const StyleAugmentation style = sample_style(rng);
    const std::string table = "<table><tr><td>alpha</td><td>beta</td></tr></table>";
    const std::string doc1 = emit_document(table, style);
    SUBCASE("identical inputs give identical bytes") {
        CHECK(doc1 == emit_document(table, style));
    }
    SUBCASE("table content is unchanged") {
        const HtmlTableDoc reparsed = parse_table_html(doc1);
        CHECK(reparsed.structure == parse_table_html(table).structure);
    }
    SUBCASE("all style fields appear in the style sheet") {
        CHECK(doc1.find(std::string(font_families()[static_cast<std::size_t>(style.font_family)])) !=
              std::string::npos);
        CHECK(doc1.find(std::to_string(style.font_size_pt) + "pt") != std::string::npos);
        CHECK(doc1.find("padding: " + std::to_string(style.padding_px) + "px") != std::string::npos);
        CHECK(doc1.find(to_css(style.text_align)) != std::string::npos);
        CHECK(doc1.find(to_css(style.border_style)) != std::string::npos);
        CHECK(doc1.find("line type: " + std::string(to_string(style.line_type))) != std::string::npos);
        CHECK(doc1.find("rgb(" + std::to_string(style.text_color.r)) != std::string::npos);
    }
    SUBCASE("non-table input is rejected") {
        CHECK_THROWS_AS(emit_document("<div>x</div>", style), Error);
    }
}

TEST_CASE("check_constraints") {
    CHECK(check_constraints(3000, 5000, 12) == ConstraintVerdict::keep);
    CHECK(check_constraints(3001, 100, 20) == ConstraintVerdict::discard);
    CHECK(check_constraints(100, 5001, 20) == ConstraintVerdict::discard);
    CHECK(check_constraints(100, 100, 11) == ConstraintVerdict::discard);
    SUBCASE("monotone: growing dimensions never flips discard to keep") {
        Rng rng(74);
        for (int i = 0; i < 2000; ++i) {
            const int w = static_cast<int>(rng.uniform_int(0, 4000));
            const int h = static_cast<int>(rng.uniform_int(0, 6000));
            const int g = static_cast<int>(rng.uniform_int(0, 30));
            if (check_constraints(w, h, g) == ConstraintVerdict::discard) {
                CHECK(check_constraints(w + 100, h, g) == ConstraintVerdict::discard);
                CHECK(check_constraints(w, h + 100, g) == ConstraintVerdict::discard);
            }
        }
    }
}

TEST_CASE("render_manifest writes documents and one entry per record") {
    const fs::path dir = fs::temp_directory_path() / "tabforge-test-render";
    fs::remove_all(dir);
    Rng rng(75);

    SUBCASE("empty dataset produces an empty manifest") {
        const fs::path manifest = render_manifest({}, dir);
        std::ifstream in(manifest);
        std::string line;
        CHECK_FALSE(static_cast<bool>(std::getline(in, line)));
    }

    SUBCASE("entries resolve relative to the output directory") {
        std::vector<RenderItem> items;
        for (int i = 0; i < 3; ++i) {
            RenderItem item;
            item.id = "rec-" + std::to_string(i);
            TableStructure s = ts::random_structure(3, 3, rng, 0.0);
            ts::add_random_contents(s, rng, 0.0);
            item.structure = s;
            item.html = structure_to_html(s, EmitMode::with_content);
            item.style = sample_style(rng);
            items.push_back(std::move(item));
        }
        const fs::path manifest = render_manifest(items, dir);
        std::ifstream in(manifest);
        std::string line;
        int entries = 0;
        while (std::getline(in, line)) {
            const json entry = json::parse(line);
            ++entries;
            const fs::path doc = dir / entry.at("document").get<std::string>();
            CHECK(fs::exists(doc));
            CHECK(entry.at("constraints").at("max_width_px") == 3000);
            CHECK(entry.at("constraints").at("max_height_px") == 5000);
            CHECK(entry.at("constraints").at("min_font_height_px") == 12);
            CHECK(entry.at("cells").size() == 9);
            for (const json& cell : entry.at("cells")) {
                CHECK(cell.at("locator").get<std::string>().find("//table//tr") != std::string::npos);
            }
        }
        CHECK(entries == 3);
    }
}

TEST_CASE("geometry loading and checking") {
    const fs::path dir = fs::temp_directory_path() / "tabforge-test-geom";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path file = dir / "geom.jsonl";
    {
        std::ofstream out(file);
        out << R"({"row":0,"col":0,"box":[0,0,10,10]})" << "\n";
        out << R"({"row":0,"col":1,"box":[12,0,20,10]})" << "\n";
    }
    const std::vector<GeometryRecord> geometry = load_geometry(file);
    REQUIRE(geometry.size() == 2);
    CHECK(geometry[1].box[0] == 12.0);

    Rng rng(76);
    const TableStructure s = ts::random_structure(1, 2, rng, 0.0);
    CHECK(check_geometry(geometry, s).empty());

    std::vector<GeometryRecord> bad = geometry;
    bad[1].box = {8, 0, 20, 10}; // overlaps the first box
    CHECK_FALSE(check_geometry(bad, s).empty());

    bad = geometry;
    bad[0].box = {10, 0, 0, 10}; // inverted
    CHECK_FALSE(check_geometry(bad, s).empty());

    bad = geometry;
    bad[1].row = 5; // no such anchor
    CHECK_FALSE(check_geometry(bad, s).empty());

    CHECK_THROWS_AS(load_geometry(dir / "missing.jsonl"), Error);
}

TEST_SUITE_END();
