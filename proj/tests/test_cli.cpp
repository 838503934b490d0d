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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "support/generators.hpp"
#include "tabforge/html_codec.hpp"

using namespace tabforge;
namespace ts = tabforge::testsupport;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

CommandResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "tabforge-test-cli-io";
    fs::create_directories(dir);
    const fs::path out = dir / ("out-" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err-" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string command =
        std::string(TABFORGE_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(command.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

std::vector<json> parse_jsonl(const std::string& text) {
    std::vector<json> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(json::parse(line));
    }
    return lines;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("tabforge-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

/// html_dir corpus with sources big enough for uniform-mode synthesis.
fs::path make_corpus_dir(const std::string& name, std::uint64_t seed = 201) {
    const fs::path dir = fresh_dir(name);
    Rng rng(seed);
    int made = 0;
    while (made < 5) {
        TableStructure s = ts::random_structure(24, 24, rng, 0.12);
        if (remove_implicit(s).n_rows < 20 || remove_implicit(s).n_cols < 20) continue;
        if (!detect_implicit_structure(s).empty()) continue;
        ts::add_random_contents(s, rng, 0.15);
        write_file(dir / ("table-" + std::to_string(made) + ".html"),
                   structure_to_html(s, EmitMode::with_content));
        ++made;
    }
    return dir;
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("validate command") {
    const fs::path dir = fresh_dir("cli-validate");
    SUBCASE("valid matrix file exits 0") {
        const fs::path file = write_file(dir / "ok.txt", "CC\nCL\nUX\n");
        const CommandResult result = run_cli("validate " + file.string());
        CHECK(result.exit_code == 0);
        const auto lines = parse_jsonl(result.out);
        REQUIRE(lines.size() == 1);
        CHECK(lines[0].at("valid") == true);
        CHECK(lines[0].at("implicit_rows") == json::array({2}));
    }
    SUBCASE("invalid matrix exits 1 with the rule id") {
        const fs::path file = write_file(dir / "bad.txt", "LC\n");
        const CommandResult result = run_cli("validate " + file.string());
        CHECK(result.exit_code == 1);
        const auto lines = parse_jsonl(result.out);
        CHECK(lines[0].at("valid") == false);
        CHECK(lines[0].at("violations")[0].at("rule") == "L_col0");
    }
    SUBCASE("missing file exits 3") {
        CHECK(run_cli("validate /nonexistent/file.txt").exit_code == 3);
    }
    SUBCASE("html input validates via the codec") {
        const fs::path file =
            write_file(dir / "t.html", "<table><tr><td>a</td><td>b</td></tr></table>");
        const CommandResult result = run_cli("validate --format html " + file.string());
        CHECK(result.exit_code == 0);
    }
}

TEST_CASE("convert command") {
    const fs::path dir = fresh_dir("cli-convert");
    SUBCASE("matrix to html emits the spanning cell") {
        const fs::path file = write_file(dir / "m.txt", "CL\nUX\n");
        const CommandResult result = run_cli("convert --from matrix --to html " + file.string());
        CHECK(result.exit_code == 0);
        CHECK(result.out ==
              "<table><tr><td rowspan=\"2\" colspan=\"2\"></td></tr><tr></tr></table>\n");
    }
    SUBCASE("html to matrix to html round-trips structurally") {
        Rng rng(202);
        TableStructure s = ts::random_structure(5, 4, rng, 0.3);
        // keep it free of implicit lines so the conversion is accepted
        s = remove_implicit(s);
        const std::string html = structure_to_html(s, EmitMode::structural_only);
        const fs::path file = write_file(dir / "t.html", html);
        const CommandResult to_matrix = run_cli("convert --from html --to matrix " + file.string());
        CHECK(to_matrix.exit_code == 0);
        const fs::path matrix_file = write_file(dir / "m2.txt", to_matrix.out);
        const CommandResult back = run_cli("convert --from matrix --to html " + matrix_file.string());
        CHECK(back.exit_code == 0);
        CHECK(back.out == structure_to_html(matrix_to_cells(cells_to_matrix(s)),
                                            EmitMode::structural_only) +
                              "\n");
    }
    SUBCASE("implicit rows block html-to-matrix unless repaired") {
        const fs::path file = write_file(
            dir / "implicit.html",
            "<table><tr><td rowspan=\"2\" colspan=\"2\">x</td></tr><tr></tr></table>");
        const CommandResult blocked = run_cli("convert --from html --to matrix " + file.string());
        CHECK(blocked.exit_code == 1);
        CHECK(blocked.err.find("implicit") != std::string::npos);
        CHECK(blocked.err.find("1") != std::string::npos);
        // the merge spans every row and column, so both line kinds are
        // implicit and repair collapses the table to a single cell
        const CommandResult repaired =
            run_cli("convert --from html --to matrix --repair " + file.string());
        CHECK(repaired.exit_code == 0);
        CHECK(repaired.out == "C\n");
    }
}

TEST_CASE("score command") {
    const fs::path dir = fresh_dir("cli-score");
    const std::string table = "<table><tr><td>a</td><td>b</td></tr></table>";
    SUBCASE("identical pairs score a mean of 1.0") {
        json line;
        line["id"] = "p0";
        line["pred_html"] = table;
        line["gt_html"] = table;
        const fs::path pairs = write_file(dir / "pairs.jsonl", line.dump() + "\n");
        const CommandResult result = run_cli("score --pairs " + pairs.string());
        CHECK(result.exit_code == 0);
        const auto lines = parse_jsonl(result.out);
        REQUIRE(lines.size() == 2);
        CHECK(lines[0].at("teds") == 1.0);
        CHECK(lines[1].at("mean_teds") == 1.0);
        CHECK(lines[1].at("mean_s_teds") == 1.0);
    }
    SUBCASE("single renamed content gives 1 - 1/N") {
        json line;
        line["id"] = "p0";
        line["pred_html"] = "<table><tr><td>zz</td><td>b</td></tr></table>";
        line["gt_html"] = table;
        const fs::path pairs = write_file(dir / "pairs.jsonl", line.dump() + "\n");
        const CommandResult result = run_cli("score --pairs " + pairs.string());
        const auto lines = parse_jsonl(result.out);
        // 4-node tree (table, tr, two td), one content fully replaced
        CHECK(lines[0].at("teds").get<double>() == doctest::Approx(1.0 - 1.0 / 4.0));
        CHECK(lines[0].at("s_teds") == 1.0);
    }
    SUBCASE("separate pred/gt files are joined by id; unmatched ids exit 2") {
        write_file(dir / "pred.jsonl", R"({"id":"a","html":"<table><tr><td>x</td></tr></table>"})"
                                           "\n");
        write_file(dir / "gt.jsonl", R"({"id":"b","html":"<table><tr><td>x</td></tr></table>"})"
                                         "\n");
        const CommandResult result =
            run_cli("score --pred " + (dir / "pred.jsonl").string() + " --gt " +
                    (dir / "gt.jsonl").string());
        CHECK(result.exit_code == 2);
    }
    SUBCASE("malformed ground truth exits 3") {
        json line;
        line["id"] = "p0";
        line["pred_html"] = table;
        line["gt_html"] = "<table><tr>";
        const fs::path pairs = write_file(dir / "pairs.jsonl", line.dump() + "\n");
        CHECK(run_cli("score --pairs " + pairs.string()).exit_code == 3);
    }
    SUBCASE("grouping normalization forgives tbody wrapper differences") {
        json line;
        line["id"] = "p0";
        line["pred_html"] = "<table><tr><td>a</td></tr></table>";
        line["gt_html"] = "<table><tbody><tr><td>a</td></tr></tbody></table>";
        const fs::path pairs = write_file(dir / "pairs.jsonl", line.dump() + "\n");
        const CommandResult plain = run_cli("score --pairs " + pairs.string());
        // pred tree has 3 nodes, gt has 4 (the tbody wrapper): one insertion
        CHECK(parse_jsonl(plain.out)[0].at("teds").get<double>() ==
              doctest::Approx(1.0 - 1.0 / 4.0));
        const CommandResult normalized =
            run_cli("score --normalize-grouping --pairs " + pairs.string());
        CHECK(parse_jsonl(normalized.out)[0].at("teds") == 1.0);
    }
    SUBCASE("structure-only mode omits content scores") {
        json line;
        line["id"] = "p0";
        line["pred_html"] = table;
        line["gt_html"] = table;
        const fs::path pairs = write_file(dir / "pairs.jsonl", line.dump() + "\n");
        const CommandResult result = run_cli("score --structure-only --pairs " + pairs.string());
        const auto lines = parse_jsonl(result.out);
        CHECK_FALSE(lines[0].contains("teds"));
        CHECK(lines[0].at("s_teds") == 1.0);
    }
}

TEST_CASE("synthesize command") {
    const fs::path corpus = make_corpus_dir("cli-corpus");
    SUBCASE("count 0 is a usage error") {
        const fs::path out = fresh_dir("cli-synth-0");
        const CommandResult result =
            run_cli("synthesize --corpus " + corpus.string() + " --count 0 --out " + out.string());
        CHECK(result.exit_code == 2);
    }
    SUBCASE("offline synthesis writes the dataset and reports acceptance") {
        const fs::path out = fresh_dir("cli-synth");
        fs::remove_all(out);
        const CommandResult result = run_cli("synthesize --corpus " + corpus.string() +
                                             " --count 5 --seed 7 --out " + out.string());
        CHECK(result.exit_code == 0);
        CHECK(result.err.find("accepted=5") != std::string::npos);
        CHECK(fs::exists(out / "records.jsonl"));
        CHECK(fs::exists(out / "render" / "manifest.jsonl"));
        CHECK(parse_jsonl(slurp(out / "records.jsonl")).size() == 5);
        int html_files = 0;
        for (const auto& entry : fs::directory_iterator(out / "html")) {
            (void)entry;
            ++html_files;
        }
        CHECK(html_files == 5);
    }
    SUBCASE("external mode without configuration exits 3") {
        const fs::path out = fresh_dir("cli-synth-ext");
        fs::remove_all(out);
        unsetenv("TABFORGE_LLM_ENDPOINT");
        const CommandResult external = run_cli("synthesize --external --corpus " + corpus.string() +
                                               " --count 1 --out " + out.string());
        CHECK(external.exit_code == 3);
    }
}

TEST_CASE("instruct command") {
    const fs::path corpus = make_corpus_dir("cli-instruct-corpus");
    const CommandResult a =
        run_cli("instruct --corpus " + corpus.string() + " --count 20 --seed 11");
    const CommandResult b =
        run_cli("instruct --corpus " + corpus.string() + " --count 20 --seed 11");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    const auto lines = parse_jsonl(a.out);
    REQUIRE(lines.size() == 20);
    for (const json& line : lines) {
        CHECK(line.contains("source_id"));
        CHECK(line.contains("instruction"));
        const std::string kind = line.at("target_kind").get<std::string>();
        if (kind == "full_structure") {
            CHECK(line.contains("target_matrix"));
        } else {
            CHECK(kind == "cell_subset");
            CHECK(line.at("target_cells").size() == 1);
        }
    }
    SUBCASE("count 0 emits nothing and exits 0") {
        const CommandResult empty =
            run_cli("instruct --corpus " + corpus.string() + " --count 0 --seed 11");
        CHECK(empty.exit_code == 0);
        CHECK(empty.out.empty());
    }
}

TEST_CASE("audit command") {
    const fs::path dir = fresh_dir("cli-audit");
    write_file(dir / "clean.html", "<table><tr><td>a</td><td>b</td></tr></table>");
    write_file(dir / "defect.html",
               "<table><tr><td rowspan=\"2\" colspan=\"2\">x</td></tr><tr></tr></table>");
    const CommandResult result = run_cli("audit --corpus " + dir.string());
    CHECK(result.exit_code == 0);
    const auto lines = parse_jsonl(result.out);
    REQUIRE(lines.size() == 2); // one affected record plus the summary
    CHECK(lines[0].at("id") == "defect");
    CHECK(lines[0].at("implicit_rows") == json::array({1}));
    CHECK(lines[1].at("total_records") == 2);
    CHECK(lines[1].at("affected_records") == 1);
    CHECK(lines[1].at("affected_fraction").get<double>() == doctest::Approx(0.5));
    CHECK(result.err.find("0.5000") != std::string::npos);
}

TEST_CASE("stats command") {
    const fs::path corpus = make_corpus_dir("cli-stats-corpus");
    const fs::path out = fresh_dir("cli-stats-data");
    fs::remove_all(out);
    REQUIRE(run_cli("synthesize --corpus " + corpus.string() + " --count 5 --seed 3 --out " +
                    out.string())
                .exit_code == 0);
    const CommandResult result = run_cli("stats --dataset " + out.string());
    CHECK(result.exit_code == 0);
    const auto lines = parse_jsonl(result.out);
    REQUIRE(lines.size() == 6); // five records plus the summary
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(lines[i].at("token_ratio").get<double>() > 0.0);
        CHECK(lines[i].at("char_ratio").get<double>() > 0.0);
    }
    CHECK(lines[5].contains("mean_token_ratio"));
    CHECK(lines[5].contains("mean_char_ratio"));
    CHECK(lines[5].contains("cells_histogram"));
    CHECK(lines[5].contains("merged_cells_histogram"));
    CHECK(lines[5].contains("token_ratio_histogram"));
    CHECK(lines[5].contains("char_ratio_histogram"));
    // histogram totals match the record count
    long long bucket_total = 0;
    for (const json& bucket : lines[5].at("token_ratio_histogram")) {
        bucket_total += bucket.at("count").get<long long>();
    }
    CHECK(bucket_total == 5);

    SUBCASE("empty dataset exits 1") {
        const fs::path empty = fresh_dir("cli-stats-empty");
        write_file(empty / "records.jsonl", "");
        CHECK(run_cli("stats --dataset " + empty.string()).exit_code == 1);
    }
}

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("unknown-subcommand").exit_code == 2);
    CHECK(run_cli("validate").exit_code == 2);
}

TEST_SUITE_END();
