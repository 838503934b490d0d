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
#include "tabforge/synth.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>

#include <json.hpp>

#include "tabforge/html_codec.hpp"
#include "tabforge/parallel.hpp"

namespace tabforge {

namespace {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ULL;
    }
    return hash;
}

bool same_grid(const TableStructure& a, const TableStructure& b) {
    if (a.n_rows != b.n_rows || a.n_cols != b.n_cols || a.cells.size() != b.cells.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const LogicalCell& u = a.cells[i];
        const LogicalCell& v = b.cells[i];
        if (u.anchor_row != v.anchor_row || u.anchor_col != v.anchor_col ||
            u.row_span != v.row_span || u.col_span != v.col_span) {
            return false;
        }
    }
    return true;
}

class DeterministicFiller final : public ContentGenerator {
public:
    DeterministicFiller(double empty_fraction, std::uint64_t seed)
        : empty_fraction_(empty_fraction), seed_(seed) {}

    std::string populate(const std::string& structural_html, int attempt) override {
        // keyed on the input so batch results do not depend on call order
        Rng rng(mix_seed(seed_, fnv1a(structural_html) ^ static_cast<std::uint64_t>(attempt)));
        HtmlTableDoc doc = parse_table_html(structural_html);
        TableStructure filled = doc.structure;
        for (LogicalCell& cell : filled.cells) {
            if (empty_fraction_ > 0.0 && rng.bernoulli(empty_fraction_)) continue;
            cell.content = "cell-" + std::to_string(cell.anchor_row) + "-" +
                           std::to_string(cell.anchor_col);
        }
        return structure_to_html(filled, EmitMode::with_content);
    }

private:
    double empty_fraction_;
    std::uint64_t seed_;
};

class StructuralValidator final : public TableValidator {
public:
    Verdict judge(const std::string& filled_html, const std::string& reference_structural_html) override {
        std::vector<std::string> reasons;
        HtmlTableDoc filled;
        try {
            filled = parse_table_html(filled_html);
        } catch (const Error& e) {
            return Verdict{false, std::string("parse_error:") + e.what()};
        }
        if (!reference_structural_html.empty()) {
            HtmlTableDoc reference;
            try {
                reference = parse_table_html(reference_structural_html);
            } catch (const Error& e) {
                return Verdict{false, std::string("reference_parse_error:") + e.what()};
            }
            if (!same_grid(filled.structure, reference.structure)) {
                reasons.emplace_back("grid_mismatch");
            }
        }
        const ImplicitReport implicit = detect_implicit_structure(filled.structure);
        for (int row : implicit.implicit_rows) {
            reasons.push_back("implicit_row:" + std::to_string(row));
        }
        for (int col : implicit.implicit_cols) {
            reasons.push_back("implicit_col:" + std::to_string(col));
        }
        if (reasons.empty()) return Verdict{true, "ok"};
        std::string joined;
        for (std::size_t i = 0; i < reasons.size(); ++i) {
            if (i > 0) joined += ";";
            joined += reasons[i];
        }
        return Verdict{false, joined};
    }
};

class ExternalGenerator final : public ContentGenerator {
public:
    explicit ExternalGenerator(std::shared_ptr<TextCompletionClient> client)
        : client_(std::move(client)) {}

    std::string populate(const std::string& structural_html, int /*attempt*/) override {
        return client_->complete(std::string(kPopulatePrompt) + "\n\n" + structural_html);
    }

    bool concurrent_safe() const override { return false; }

private:
    std::shared_ptr<TextCompletionClient> client_;
};

class ExternalValidator final : public TableValidator {
public:
    explicit ExternalValidator(std::shared_ptr<TextCompletionClient> client)
        : client_(std::move(client)) {}

    Verdict judge(const std::string& filled_html, const std::string& /*reference*/) override {
        const std::string response =
            client_->complete(std::string(kJudgePrompt) + "\n\n" + filled_html);
        std::string lowered(response);
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        const bool negative = lowered.find("invalid") != std::string::npos ||
                              lowered.find("incoherent") != std::string::npos ||
                              lowered.find("reject") != std::string::npos ||
                              lowered.rfind("no", 0) == 0;
        const bool positive = lowered.find("valid") != std::string::npos ||
                              lowered.find("coherent") != std::string::npos ||
                              lowered.find("accept") != std::string::npos ||
                              lowered.rfind("yes", 0) == 0;
        if (negative) return Verdict{false, "judge: " + response};
        if (positive) return Verdict{true, "judge: " + response};
        return Verdict{false, "judge response inconclusive: " + response};
    }

    bool concurrent_safe() const override { return false; }

private:
    std::shared_ptr<TextCompletionClient> client_;
};

// Serializes calls into implementations that declare a serial contract.
std::mutex& serial_call_mutex() {
    static std::mutex mutex;
    return mutex;
}

std::string call_generator(ContentGenerator& gen, const std::string& html, int attempt) {
    if (gen.concurrent_safe()) return gen.populate(html, attempt);
    std::lock_guard<std::mutex> lock(serial_call_mutex());
    return gen.populate(html, attempt);
}

Verdict call_validator(TableValidator& val, const std::string& filled, const std::string& reference) {
    if (val.concurrent_safe()) return val.judge(filled, reference);
    std::lock_guard<std::mutex> lock(serial_call_mutex());
    return val.judge(filled, reference);
}

} // namespace

std::pair<int, int> sample_dims_uniform(const SynthConfig& cfg, Rng& rng) {
    if (cfg.uniform.min_dim < 1 || cfg.uniform.min_dim > cfg.uniform.max_dim) {
        throw Error(ErrorCode::param_out_of_range, "uniform dimension bounds are not ordered");
    }
    const int rows = static_cast<int>(rng.uniform_int(cfg.uniform.min_dim, cfg.uniform.max_dim));
    const int cols = static_cast<int>(rng.uniform_int(cfg.uniform.min_dim, cfg.uniform.max_dim));
    return {rows, cols};
}

std::pair<int, int> sample_dims_bcdstab(const SynthConfig& cfg, Rng& rng) {
    const BcdstabDims& b = cfg.bcdstab;
    if (b.cell_min > b.cell_max || b.row_min > b.row_max || b.col_min > b.col_max) {
        throw Error(ErrorCode::param_out_of_range, "bcdstab bounds are not ordered");
    }
    for (int attempt = 0; attempt < cfg.dim_retry_budget; ++attempt) {
        const long long cells = std::llround(rng.normal(b.cell_count_mean, b.cell_count_sd));
        if (cells < b.cell_min || cells > b.cell_max) continue;
        const int rows = static_cast<int>(rng.uniform_int(b.row_min, b.row_max));
        const int cols = static_cast<int>(cells / rows);
        if (cols < b.col_min || cols > b.col_max) continue;
        return {rows, cols};
    }
    throw Error(ErrorCode::retry_budget_exhausted, "dimension sampling did not converge");
}

BlockLayout partition_grid(int rows, int cols, int n_blocks, Rng& rng) {
    if (rows < 1 || cols < 1 || n_blocks < 1) {
        throw Error(ErrorCode::unpartitionable, "dimensions and block count must be positive");
    }
    // divisor pair (a, b) closest to square with a <= rows and b <= cols
    int best_a = 0;
    int best_b = 0;
    int best_gap = INT_MAX;
    for (int a = 1; a <= n_blocks; ++a) {
        if (n_blocks % a != 0) continue;
        const int b = n_blocks / a;
        if (a > rows || b > cols) continue;
        const int gap = std::abs(a - b);
        if (gap < best_gap || (gap == best_gap && a > best_a)) {
            best_gap = gap;
            best_a = a;
            best_b = b;
        }
    }
    if (best_a == 0) {
        throw Error(ErrorCode::unpartitionable,
                    std::to_string(n_blocks) + " blocks do not fit a " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " grid");
    }
    BlockLayout layout;
    layout.n_rows = rows;
    layout.n_cols = cols;
    if (best_a > 1) layout.row_cuts = rng.sample_distinct(1, rows - 1, best_a - 1);
    if (best_b > 1) layout.col_cuts = rng.sample_distinct(1, cols - 1, best_b - 1);
    return layout;
}

std::pair<CellMatrix, std::string> fill_block(int h, int w, const Corpus& corpus, Rng& rng,
                                              int retry_budget) {
    if (corpus.size() == 0) {
        throw Error(ErrorCode::empty_corpus, "cannot fill blocks from an empty corpus");
    }
    int max_rows = 0;
    int max_cols = 0;
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        const auto index =
            static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(corpus.size()) - 1));
        const CorpusRecord& record = corpus.record(index);
        // repair before sizing so implicit-line defects cannot propagate
        const TableStructure repaired = remove_implicit(record.structure);
        max_rows = std::max(max_rows, repaired.n_rows);
        max_cols = std::max(max_cols, repaired.n_cols);
        if (repaired.n_rows < h || repaired.n_cols < w) continue;
        return {crop_top_left(cells_to_matrix(repaired), h, w), record.id};
    }
    throw Error(ErrorCode::no_compatible_source,
                "no source of at least " + std::to_string(h) + "x" + std::to_string(w) + " found in " +
                    std::to_string(retry_budget) + " draws (largest seen " + std::to_string(max_rows) +
                    "x" + std::to_string(max_cols) + ")");
}

SynthRecord synthesize_one(const SynthConfig& cfg, const Corpus& corpus, ContentGenerator& gen,
                           TableValidator& val, Rng& rng, const std::string& id) {
    const auto [rows, cols] = cfg.dim_mode == DimMode::uniform_range
                                  ? sample_dims_uniform(cfg, rng)
                                  : sample_dims_bcdstab(cfg, rng);

    SynthRecord record;
    record.id = id;

    // a crop can orphan a table line whose anchors all sat outside its
    // window; emitting that would reintroduce the very defect the pipeline avoids,
    // so layouts and fills are redrawn until the spliced matrix is clean
    CellMatrix spliced(1, 1);
    bool clean = false;
    for (int attempt = 0; attempt < 32 && !clean; ++attempt) {
        const BlockLayout layout = partition_grid(rows, cols, cfg.n_blocks, rng);
        std::vector<CellMatrix> blocks;
        std::vector<std::string> provenance;
        for (const BlockRegion& region : layout.regions()) {
            auto [block, source_id] = fill_block(region.height, region.width, corpus, rng,
                                                 cfg.fill_retry_budget);
            blocks.push_back(std::move(block));
            provenance.push_back(std::move(source_id));
        }
        CellMatrix candidate = splice(layout, blocks);
        if (detect_implicit(candidate).empty()) {
            spliced = std::move(candidate);
            record.provenance = std::move(provenance);
            clean = true;
        }
    }
    if (!clean) {
        throw Error(ErrorCode::no_compatible_source,
                    id + ": no implicit-free assembly found for " + std::to_string(rows) + "x" +
                        std::to_string(cols));
    }

    // merge moves can orphan a line's last anchor too; redraw them likewise
    record.matrix = spliced;
    for (int attempt = 0; attempt < 16; ++attempt) {
        CellMatrix merged = inject_merges(spliced, cfg.merge_injections, rng);
        if (detect_implicit(merged).empty()) {
            record.matrix = std::move(merged);
            break;
        }
    }
    record.structural_html = structure_to_html(matrix_to_cells(record.matrix), EmitMode::structural_only);
    record.style = sample_style(rng);

    const TableStructure target = matrix_to_cells(record.matrix);
    for (int attempt = 1; attempt <= std::max(1, cfg.max_validation_retries + 1); ++attempt) {
        record.validation.attempts = attempt;
        std::string filled;
        try {
            filled = call_generator(gen, record.structural_html, attempt);
        } catch (const std::exception& e) {
            throw Error(ErrorCode::external_client,
                        id + ": content generator failed: " + e.what());
        }
        TableStructure filled_structure;
        try {
            filled_structure = parse_table_html(filled).structure;
        } catch (const Error& e) {
            record.validation.reason = std::string("generator output unparseable: ") + e.what();
            continue;
        }
        if (!same_grid(filled_structure, target)) {
            record.validation.reason = "generator output grid mismatch";
            continue;
        }
        Verdict verdict;
        try {
            verdict = call_validator(val, filled, record.structural_html);
        } catch (const std::exception& e) {
            throw Error(ErrorCode::external_client, id + ": validator failed: " + e.what());
        }
        record.validation.reason = verdict.reason;
        if (verdict.accept) {
            record.validation.accepted = true;
            record.filled_html = std::move(filled);
            break;
        }
    }
    return record;
}

std::vector<SynthRecord> synthesize_batch(const SynthConfig& cfg, const Corpus& corpus,
                                          ContentGenerator& gen, TableValidator& val, int count,
                                          int jobs) {
    if (count < 1) {
        throw Error(ErrorCode::param_out_of_range, "count must be at least 1");
    }
    std::vector<SynthRecord> records(static_cast<std::size_t>(count));
    parallel_for(count, jobs, [&](std::int64_t i) {
        char name[32];
        std::snprintf(name, sizeof(name), "synth-%06lld", static_cast<long long>(i));
        Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));
        auto& slot = records[static_cast<std::size_t>(i)];
        try {
            slot = synthesize_one(cfg, corpus, gen, val, rng, name);
        } catch (const std::exception& e) {
            slot = SynthRecord{};
            slot.id = name;
            slot.validation.accepted = false;
            slot.validation.reason = std::string("error: ") + e.what();
        }
    });
    return records;
}

std::unique_ptr<ContentGenerator> deterministic_filler(double empty_fraction, std::uint64_t seed) {
    return std::make_unique<DeterministicFiller>(empty_fraction, seed);
}

std::unique_ptr<TableValidator> structural_validator() {
    return std::make_unique<StructuralValidator>();
}

std::unique_ptr<ContentGenerator> external_generator(std::shared_ptr<TextCompletionClient> client) {
    return std::make_unique<ExternalGenerator>(std::move(client));
}

std::unique_ptr<TableValidator> external_validator(std::shared_ptr<TextCompletionClient> client) {
    return std::make_unique<ExternalValidator>(std::move(client));
}

void write_dataset(const std::vector<SynthRecord>& records, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir / "html");
    std::filesystem::create_directories(out_dir / "matrix");

    std::ofstream records_out(out_dir / "records.jsonl", std::ios::binary);
    if (!records_out) {
        throw Error(ErrorCode::unreadable_path, "cannot write " + (out_dir / "records.jsonl").string());
    }
    for (const SynthRecord& record : records) {
        json line;
        line["id"] = record.id;
        line["n_rows"] = record.matrix.n_rows();
        line["n_cols"] = record.matrix.n_cols();
        line["provenance"] = record.provenance;
        line["style"] = {{"text_align", to_css(record.style.text_align)},
                         {"font_family", record.style.font_family},
                         {"font_size_pt", record.style.font_size_pt},
                         {"padding_px", record.style.padding_px},
                         {"border_style", to_css(record.style.border_style)},
                         {"line_type", to_string(record.style.line_type)},
                         {"text_color", {record.style.text_color.r, record.style.text_color.g,
                                         record.style.text_color.b}},
                         {"background_color",
                          {record.style.background_color.r, record.style.background_color.g,
                           record.style.background_color.b}}};
        line["validation"] = {{"attempts", record.validation.attempts},
                              {"accepted", record.validation.accepted},
                              {"reason", record.validation.reason}};
        records_out << line.dump() << "\n";

        std::ofstream matrix_out(out_dir / "matrix" / (record.id + ".txt"), std::ios::binary);
        matrix_out << record.matrix.to_text() << "\n";

        std::ofstream html_out(out_dir / "html" / (record.id + ".html"), std::ios::binary);
        html_out << (record.filled_html ? *record.filled_html : record.structural_html) << "\n";
    }
}

} // namespace tabforge
