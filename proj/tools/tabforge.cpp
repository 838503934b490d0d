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
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tabforge/corpus.hpp"
#include "tabforge/html_codec.hpp"
#include "tabforge/instructions.hpp"
#include "tabforge/parallel.hpp"
#include "tabforge/render.hpp"
#include "tabforge/synth.hpp"
#include "tabforge/teds.hpp"

namespace tabforge::cli {

namespace {

using nlohmann::json;

// Exit codes are part of the interface contract and stable across
// releases.
constexpr int kOk = 0;
constexpr int kDomainFailure = 1; // validation or scoring failures present
constexpr int kUsage = 2;
constexpr int kIoOrClient = 3;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::unreadable_path, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<json> read_jsonl(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::unreadable_path, "cannot open " + path.string());
    }
    std::vector<json> lines;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            lines.push_back(json::parse(line));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::malformed_markup,
                        path.string() + ":" + std::to_string(line_no) + " is not JSON: " + e.what());
        }
    }
    return lines;
}

CorpusFormat corpus_format_from_name(const std::string& name) {
    if (name == "pubtabnet_jsonl" || name == "jsonl") return CorpusFormat::pubtabnet_jsonl;
    if (name == "html_dir" || name == "html") return CorpusFormat::html_dir;
    throw CLI::ValidationError("--corpus-format", "expected pubtabnet_jsonl or html_dir");
}

CorpusFormat guess_corpus_format(const std::filesystem::path& path) {
    return std::filesystem::is_directory(path) ? CorpusFormat::html_dir
                                               : CorpusFormat::pubtabnet_jsonl;
}

Corpus load_corpus(const std::string& path, const std::string& format_name, bool repair, int jobs) {
    const CorpusFormat format =
        format_name.empty() ? guess_corpus_format(path) : corpus_format_from_name(format_name);
    LoadOptions options;
    options.repair = repair;
    options.jobs = jobs;
    return Corpus::load(path, format, options);
}

json cell_to_json(const LogicalCell& cell) {
    json out;
    out["row"] = cell.anchor_row;
    out["col"] = cell.anchor_col;
    out["row_span"] = cell.row_span;
    out["col_span"] = cell.col_span;
    if (cell.content) out["content"] = *cell.content;
    return out;
}

int map_error_to_exit(const Error& e) {
    switch (e.code()) {
        case ErrorCode::unreadable_path:
        case ErrorCode::empty_corpus:
        case ErrorCode::ground_truth_malformed:
        case ErrorCode::external_client:
            return kIoOrClient;
        case ErrorCode::param_out_of_range:
            return kUsage;
        default:
            return kDomainFailure;
    }
}

// ---------------------------------------------------------------- validate

int run_validate(const std::vector<std::string>& inputs, const std::string& format) {
    bool any_invalid = false;
    for (const std::string& input : inputs) {
        const std::string text = read_file(input);
        json report;
        report["input"] = input;
        try {
            CellMatrix matrix = format == "html"
                                    ? cells_to_matrix(parse_table_html(text).structure)
                                    : CellMatrix::from_text(text);
            const ValidationReport validation = validate_matrix(matrix);
            report["valid"] = validation.is_valid();
            json violations = json::array();
            for (const Violation& v : validation.violations) {
                violations.push_back(
                    {{"row", v.row}, {"col", v.col}, {"rule", v.rule_id}, {"message", v.message}});
            }
            report["violations"] = violations;
            if (validation.is_valid()) {
                const ImplicitReport implicit = detect_implicit(matrix);
                report["implicit_rows"] = implicit.implicit_rows;
                report["implicit_cols"] = implicit.implicit_cols;
            }
            if (!validation.is_valid()) any_invalid = true;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::unreadable_path) throw;
            report["valid"] = false;
            report["error"] = e.what();
            any_invalid = true;
        }
        std::cout << report.dump() << "\n";
    }
    return any_invalid ? kDomainFailure : kOk;
}

// ----------------------------------------------------------------- convert

int run_convert(const std::string& input, const std::string& from, const std::string& to,
                bool structural_only, bool repair) {
    const std::string text = read_file(input);
    TableStructure structure;
    if (from == "matrix") {
        structure = matrix_to_cells(CellMatrix::from_text(text));
    } else {
        structure = parse_table_html(text).structure;
    }
    if (repair) {
        structure = remove_implicit(structure);
    }
    if (to == "matrix") {
        const ImplicitReport implicit = detect_implicit_structure(structure);
        if (from == "html" && !implicit.empty()) {
            json detail;
            detail["implicit_rows"] = implicit.implicit_rows;
            detail["implicit_cols"] = implicit.implicit_cols;
            std::cerr << "input has implicit rows/columns (rerun with --repair): " << detail.dump()
                      << "\n";
            return kDomainFailure;
        }
        std::cout << cells_to_matrix(structure).to_text() << "\n";
    } else {
        const EmitMode mode = structural_only ? EmitMode::structural_only : EmitMode::with_content;
        std::cout << structure_to_html(structure, mode) << "\n";
    }
    return kOk;
}

// ------------------------------------------------------------------- score

std::string normalize_grouping(const std::string& html) {
    try {
        return structure_to_html(parse_table_html(html).structure, EmitMode::with_content);
    } catch (const Error&) {
        return html; // leave unparseable inputs to the scorer's error paths
    }
}

int run_score(const std::string& pairs_path, const std::string& pred_path,
              const std::string& gt_path, bool structure_only, bool normalize, int jobs) {
    std::vector<ScorePair> pairs;
    if (!pairs_path.empty()) {
        for (const json& line : read_jsonl(pairs_path)) {
            pairs.push_back(ScorePair{line.at("id").is_string()
                                          ? line.at("id").get<std::string>()
                                          : line.at("id").dump(),
                                      line.at("pred_html").get<std::string>(),
                                      line.at("gt_html").get<std::string>()});
        }
    } else {
        if (pred_path.empty() || gt_path.empty()) {
            std::cerr << "either --pairs or both --pred and --gt are required\n";
            return kUsage;
        }
        auto read_side = [](const std::filesystem::path& path, const char* key) {
            std::map<std::string, std::string> out;
            for (const json& line : read_jsonl(path)) {
                const std::string id = line.at("id").is_string() ? line.at("id").get<std::string>()
                                                                 : line.at("id").dump();
                std::string html;
                if (line.contains(key)) html = line.at(key).get<std::string>();
                else html = line.at("html").get<std::string>();
                out[id] = html;
            }
            return out;
        };
        const auto preds = read_side(pred_path, "pred_html");
        const auto gts = read_side(gt_path, "gt_html");
        for (const auto& [id, gt_html] : gts) {
            const auto it = preds.find(id);
            if (it == preds.end()) {
                std::cerr << "prediction missing for id " << id << "\n";
                return kUsage;
            }
            pairs.push_back(ScorePair{id, it->second, gt_html});
        }
        if (preds.size() != gts.size()) {
            std::cerr << "prediction file has ids absent from the ground truth file\n";
            return kUsage;
        }
    }
    if (normalize) {
        for (ScorePair& pair : pairs) {
            pair.pred_html = normalize_grouping(pair.pred_html);
            pair.gt_html = normalize_grouping(pair.gt_html);
        }
    }

    TedsConfig cfg;
    cfg.structure_only = structure_only;
    const BatchScoreResult result = batch_score(pairs, cfg, jobs);

    for (const PairScore& score : result.per_pair) {
        json line;
        line["id"] = score.id;
        if (!structure_only) line["teds"] = score.teds;
        line["s_teds"] = score.s_teds;
        if (score.pred_failed) line["pred_failed"] = true;
        std::cout << line.dump() << "\n";
    }
    json summary;
    summary["count"] = result.per_pair.size();
    summary["pred_failures"] = result.pred_failures;
    if (result.mean_defined) {
        if (!structure_only) summary["mean_teds"] = result.mean_teds;
        summary["mean_s_teds"] = result.mean_s_teds;
    } else {
        summary["mean_undefined"] = true;
    }
    std::cout << summary.dump() << "\n";
    std::cerr << "scored " << result.per_pair.size() << " pairs, " << result.pred_failures
              << " prediction failures\n";
    return result.pred_failures > 0 ? kDomainFailure : kOk;
}

// -------------------------------------------------------------- synthesize

SynthConfig parse_synth_config(const std::filesystem::path& path) {
    SynthConfig cfg;
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::unreadable_path, "cannot open " + path.string());
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        try {
            if (key == "dim_mode") {
                if (value == "uniform_range") cfg.dim_mode = DimMode::uniform_range;
                else if (value == "bcdstab") cfg.dim_mode = DimMode::bcdstab;
                else throw std::invalid_argument("dim_mode must be uniform_range or bcdstab");
            } else if (key == "min_dim") cfg.uniform.min_dim = std::stoi(value);
            else if (key == "max_dim") cfg.uniform.max_dim = std::stoi(value);
            else if (key == "cell_count_mean") cfg.bcdstab.cell_count_mean = std::stod(value);
            else if (key == "cell_count_sd") cfg.bcdstab.cell_count_sd = std::stod(value);
            else if (key == "n_blocks") cfg.n_blocks = std::stoi(value);
            else if (key == "merge_injections") cfg.merge_injections = std::stoi(value);
            else if (key == "max_validation_retries") cfg.max_validation_retries = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "filler_empty_fraction") cfg.filler_empty_fraction = std::stod(value);
            else if (key == "fill_retry_budget") cfg.fill_retry_budget = std::stoi(value);
            else if (key == "content_mode") {
                if (value == "deterministic") cfg.content_mode = ContentMode::deterministic;
                else if (value == "external") cfg.content_mode = ContentMode::external;
                else throw std::invalid_argument("content_mode must be deterministic or external");
            } else {
                throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw Error(ErrorCode::param_out_of_range,
                        path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

int run_synthesize(const std::string& config_path, const std::string& corpus_path,
                   const std::string& corpus_format, int count, const std::string& out_dir,
                   bool external, std::optional<std::uint64_t> seed_override, int jobs) {
    if (count < 1) {
        std::cerr << "--count must be at least 1\n";
        return kUsage;
    }
    SynthConfig cfg = config_path.empty() ? SynthConfig{} : parse_synth_config(config_path);
    if (seed_override) cfg.seed = *seed_override;
    if (external) cfg.content_mode = ContentMode::external;

    const Corpus corpus = load_corpus(corpus_path, corpus_format, false, jobs);

    std::unique_ptr<ContentGenerator> generator;
    std::unique_ptr<TableValidator> validator;
    if (cfg.content_mode == ContentMode::external) {
        std::shared_ptr<TextCompletionClient> client = http_client_from_env();
        generator = external_generator(client);
        validator = external_validator(client);
    } else {
        generator = deterministic_filler(cfg.filler_empty_fraction, cfg.seed);
        validator = structural_validator();
    }

    const std::vector<SynthRecord> records =
        synthesize_batch(cfg, corpus, *generator, *validator, count, jobs);
    write_dataset(records, out_dir);

    std::vector<RenderItem> items;
    items.reserve(records.size());
    for (const SynthRecord& record : records) {
        if (record.structural_html.empty()) continue; // failed before synthesis
        RenderItem item;
        item.id = record.id;
        item.html = record.filled_html ? *record.filled_html : record.structural_html;
        item.style = record.style;
        item.structure = matrix_to_cells(record.matrix);
        items.push_back(std::move(item));
    }
    render_manifest(items, std::filesystem::path(out_dir) / "render");

    int accepted = 0;
    int attempts = 0;
    for (const SynthRecord& record : records) {
        if (record.validation.accepted) ++accepted;
        attempts += record.validation.attempts;
    }
    std::cerr << "synthesized " << records.size() << " records, accepted=" << accepted
              << ", rejected=" << (records.size() - static_cast<std::size_t>(accepted))
              << ", generator attempts=" << attempts << "\n";
    return accepted == count ? kOk : kDomainFailure;
}

// ---------------------------------------------------------------- instruct

int run_instruct(const std::string& corpus_path, const std::string& corpus_format, int count,
                 std::uint64_t seed, int jobs) {
    const Corpus corpus = load_corpus(corpus_path, corpus_format, false, jobs);
    for (int i = 0; i < count; ++i) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        const auto index =
            static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(corpus.size()) - 1));
        const CorpusRecord& record = corpus.record(index);
        const TrainingTriplet triplet = sample_triplet(record.structure, record.id, rng);
        json line;
        line["source_id"] = triplet.source_id;
        line["instruction"] = triplet.instruction_text;
        if (triplet.target_kind == TargetKind::full_structure) {
            line["target_kind"] = "full_structure";
            line["target_matrix"] = triplet.target_matrix;
        } else {
            line["target_kind"] = "cell_subset";
            json cells = json::array();
            for (const LogicalCell& cell : triplet.target_cells) cells.push_back(cell_to_json(cell));
            line["target_cells"] = cells;
        }
        std::cout << line.dump() << "\n";
    }
    return kOk;
}

// ------------------------------------------------------------------- audit

int run_audit(const std::string& corpus_path, const std::string& corpus_format, int jobs) {
    const Corpus corpus = load_corpus(corpus_path, corpus_format, false, jobs);
    const AuditReport report = audit_implicit(corpus);

    for (const AuditEntry& entry : report.per_record) {
        json line;
        line["id"] = entry.id;
        line["implicit_rows"] = entry.implicit_rows;
        line["implicit_cols"] = entry.implicit_cols;
        std::cout << line.dump() << "\n";
    }
    json summary;
    summary["total_records"] = report.total_records;
    summary["affected_records"] = report.affected_records;
    summary["affected_fraction"] = report.affected_fraction;
    summary["total_implicit_rows"] = report.total_implicit_rows;
    summary["total_implicit_cols"] = report.total_implicit_cols;
    std::cout << summary.dump() << "\n";

    char fraction[32];
    std::snprintf(fraction, sizeof(fraction), "%.4f", report.affected_fraction);
    std::cerr << "records audited     " << report.total_records << "\n"
              << "affected records    " << report.affected_records << "\n"
              << "affected fraction   " << fraction << "\n"
              << "implicit rows       " << report.total_implicit_rows << "\n"
              << "implicit columns    " << report.total_implicit_cols << "\n";
    return kOk;
}

// ------------------------------------------------------------------- stats

struct Histogram {
    std::vector<long long> edges; // ascending bucket lower bounds
    std::vector<int> counts;

    explicit Histogram(std::vector<long long> bucket_edges)
        : edges(std::move(bucket_edges)), counts(edges.size(), 0) {}

    void add(long long value) {
        std::size_t bucket = 0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (value >= edges[i]) bucket = i;
        }
        counts[bucket] += 1;
    }

    json to_json() const {
        json buckets = json::array();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            json b;
            b["min"] = edges[i];
            if (i + 1 < edges.size()) b["max"] = edges[i + 1] - 1;
            b["count"] = counts[i];
            buckets.push_back(b);
        }
        return buckets;
    }
};

struct RatioHistogram {
    std::vector<double> edges;
    std::vector<int> counts;

    explicit RatioHistogram(std::vector<double> bucket_edges)
        : edges(std::move(bucket_edges)), counts(edges.size(), 0) {}

    void add(double value) {
        std::size_t bucket = 0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (value >= edges[i]) bucket = i;
        }
        counts[bucket] += 1;
    }

    json to_json() const {
        json buckets = json::array();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            json b;
            b["min"] = edges[i];
            if (i + 1 < edges.size()) b["max"] = edges[i + 1];
            b["count"] = counts[i];
            buckets.push_back(b);
        }
        return buckets;
    }
};

int run_stats(const std::string& dataset_dir) {
    const std::filesystem::path dir(dataset_dir);
    const std::vector<json> records = read_jsonl(dir / "records.jsonl");
    if (records.empty()) {
        std::cerr << "dataset is empty\n";
        return kDomainFailure;
    }

    Histogram cells_hist({0, 50, 100, 200, 400, 800});
    Histogram merged_hist({0, 1, 5, 10, 20, 50});
    Histogram area_hist({0, 50, 100, 200, 400, 800});
    RatioHistogram token_ratio_hist({0.0, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8});
    RatioHistogram char_ratio_hist({0.0, 0.05, 0.1, 0.15, 0.2, 0.3, 0.5});
    double token_ratio_sum = 0.0;
    double char_ratio_sum = 0.0;
    int counted = 0;

    for (const json& record : records) {
        const std::string id = record.at("id").get<std::string>();
        const std::filesystem::path matrix_path = dir / "matrix" / (id + ".txt");
        if (!std::filesystem::exists(matrix_path)) continue;
        const CellMatrix matrix = CellMatrix::from_text(read_file(matrix_path));
        const TableStructure structure = matrix_to_cells(matrix);

        const long long cell_count = static_cast<long long>(structure.cells.size());
        long long merged = 0;
        for (const LogicalCell& cell : structure.cells) {
            if (cell.row_span > 1 || cell.col_span > 1) ++merged;
        }
        const long long matrix_tokens = count_matrix_tokens(matrix);
        const long long html_tokens = static_cast<long long>(tokenize_structure(structure).size());
        const std::string matrix_text = matrix.to_text();
        const std::string structural_html = structure_to_html(structure, EmitMode::structural_only);
        const double token_ratio =
            static_cast<double>(matrix_tokens) / static_cast<double>(html_tokens);
        const double char_ratio =
            static_cast<double>(matrix_text.size()) / static_cast<double>(structural_html.size());

        cells_hist.add(cell_count);
        merged_hist.add(merged);
        area_hist.add(static_cast<long long>(matrix.n_rows()) * matrix.n_cols());
        token_ratio_hist.add(token_ratio);
        char_ratio_hist.add(char_ratio);
        token_ratio_sum += token_ratio;
        char_ratio_sum += char_ratio;
        ++counted;

        json line;
        line["id"] = id;
        line["cells"] = cell_count;
        line["merged_cells"] = merged;
        line["n_rows"] = matrix.n_rows();
        line["n_cols"] = matrix.n_cols();
        line["matrix_tokens"] = matrix_tokens;
        line["html_tokens"] = html_tokens;
        line["token_ratio"] = token_ratio;
        line["char_ratio"] = char_ratio;
        std::cout << line.dump() << "\n";
    }
    if (counted == 0) {
        std::cerr << "dataset has records but no matrix files\n";
        return kDomainFailure;
    }

    json summary;
    summary["records"] = counted;
    summary["mean_token_ratio"] = token_ratio_sum / counted;
    summary["mean_char_ratio"] = char_ratio_sum / counted;
    summary["cells_histogram"] = cells_hist.to_json();
    summary["merged_cells_histogram"] = merged_hist.to_json();
    summary["area_histogram"] = area_hist.to_json();
    summary["token_ratio_histogram"] = token_ratio_hist.to_json();
    summary["char_ratio_histogram"] = char_ratio_hist.to_json();
    std::cout << summary.dump() << "\n";

    std::cerr << "records            " << counted << "\n";
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", token_ratio_sum / counted);
    std::cerr << "mean token ratio   " << buffer << "\n";
    std::snprintf(buffer, sizeof(buffer), "%.4f", char_ratio_sum / counted);
    std::cerr << "mean char ratio    " << buffer << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"table-structure engineering toolkit"};
    app.require_subcommand(1);

    // validate
    auto* validate = app.add_subcommand("validate", "check matrices or tables for well-formedness");
    std::vector<std::string> validate_inputs;
    std::string validate_format = "matrix";
    validate->add_option("inputs", validate_inputs, "input files")->required();
    validate->add_option("--format", validate_format, "matrix or html")
        ->check(CLI::IsMember({"matrix", "html"}));

    // convert
    auto* convert = app.add_subcommand("convert", "convert between matrix text and table markup");
    std::string convert_input, convert_from = "matrix", convert_to = "html";
    bool convert_structural = false, convert_repair = false;
    convert->add_option("input", convert_input, "input file")->required();
    convert->add_option("--from", convert_from)->check(CLI::IsMember({"matrix", "html"}));
    convert->add_option("--to", convert_to)->check(CLI::IsMember({"matrix", "html"}));
    convert->add_flag("--structural-only", convert_structural, "drop cell contents");
    convert->add_flag("--repair", convert_repair, "remove implicit rows/columns");

    // score
    auto* score = app.add_subcommand("score", "TEDS/S-TEDS scoring of prediction/ground-truth pairs");
    std::string score_pairs, score_pred, score_gt;
    bool score_structure_only = false, score_normalize = false;
    int score_jobs = default_jobs();
    score->add_option("--pairs", score_pairs, "JSONL of {id, pred_html, gt_html}");
    score->add_option("--pred", score_pred, "JSONL of {id, html}");
    score->add_option("--gt", score_gt, "JSONL of {id, html}");
    score->add_flag("--structure-only", score_structure_only, "report S-TEDS only");
    score->add_flag("--normalize-grouping", score_normalize,
                    "re-emit both sides through the codec before scoring");
    score->add_option("--jobs", score_jobs, "worker threads");

    // synthesize
    auto* synthesize = app.add_subcommand("synthesize", "generate tables with the mix-expand pipeline");
    std::string synth_config, synth_corpus, synth_corpus_format, synth_out;
    int synth_count = 0;
    bool synth_offline = true, synth_external = false;
    std::uint64_t synth_seed = 0;
    bool synth_seed_set = false;
    int synth_jobs = default_jobs();
    synthesize->add_option("--config", synth_config, "key=value config file");
    synthesize->add_option("--corpus", synth_corpus, "source corpus")->required();
    synthesize->add_option("--corpus-format", synth_corpus_format, "pubtabnet_jsonl or html_dir");
    synthesize->add_option("--count", synth_count, "records to synthesize")->required();
    synthesize->add_option("--out", synth_out, "output directory")->required();
    synthesize->add_flag("--offline", synth_offline, "use the built-in filler/validator (default)");
    synthesize->add_flag("--external", synth_external, "use the configured external model");
    synthesize->add_option("--seed", synth_seed, "seed override")->each([&](const std::string&) {
        synth_seed_set = true;
    });
    synthesize->add_option("--jobs", synth_jobs, "worker threads");

    // instruct
    auto* instruct = app.add_subcommand("instruct", "sample instruction training triplets");
    std::string instruct_corpus, instruct_corpus_format;
    int instruct_count = 0;
    std::uint64_t instruct_seed = 0;
    int instruct_jobs = default_jobs();
    instruct->add_option("--corpus", instruct_corpus, "source corpus")->required();
    instruct->add_option("--corpus-format", instruct_corpus_format, "pubtabnet_jsonl or html_dir");
    instruct->add_option("--count", instruct_count, "triplets to sample")->required();
    instruct->add_option("--seed", instruct_seed, "seed");
    instruct->add_option("--jobs", instruct_jobs, "worker threads");

    // audit
    auto* audit = app.add_subcommand("audit", "report implicit rows/columns across a corpus");
    std::string audit_corpus, audit_corpus_format;
    int audit_jobs = default_jobs();
    audit->add_option("--corpus", audit_corpus, "corpus to audit")->required();
    audit->add_option("--corpus-format", audit_corpus_format, "pubtabnet_jsonl or html_dir");
    audit->add_option("--jobs", audit_jobs, "worker threads");

    // stats
    auto* stats = app.add_subcommand("stats", "distribution report over a synthesized dataset");
    std::string stats_dataset;
    stats->add_option("--dataset", stats_dataset, "dataset directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (validate->parsed()) return run_validate(validate_inputs, validate_format);
        if (convert->parsed()) {
            return run_convert(convert_input, convert_from, convert_to, convert_structural,
                               convert_repair);
        }
        if (score->parsed()) {
            return run_score(score_pairs, score_pred, score_gt, score_structure_only,
                             score_normalize, score_jobs);
        }
        if (synthesize->parsed()) {
            (void)synth_offline;
            return run_synthesize(synth_config, synth_corpus, synth_corpus_format, synth_count,
                                  synth_out, synth_external,
                                  synth_seed_set ? std::optional<std::uint64_t>(synth_seed)
                                                 : std::nullopt,
                                  synth_jobs);
        }
        if (instruct->parsed()) {
            return run_instruct(instruct_corpus, instruct_corpus_format, instruct_count,
                                instruct_seed, instruct_jobs);
        }
        if (audit->parsed()) return run_audit(audit_corpus, audit_corpus_format, audit_jobs);
        if (stats->parsed()) return run_stats(stats_dataset);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return map_error_to_exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoOrClient;
    }
    return kUsage;
}

} // namespace tabforge::cli

int main(int argc, char** argv) { return tabforge::cli::main(argc, argv); }
