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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabforge/cell_matrix.hpp"
#include "tabforge/corpus.hpp"
#include "tabforge/render.hpp"
#include "tabforge/rng.hpp"

namespace tabforge {

enum class DimMode { uniform_range, bcdstab };
enum class ContentMode { deterministic, external };

struct UniformDims {
    int min_dim = 4;
    int max_dim = 20;
};

/// Rejection-sampled dimensions: cell count from a bounded normal, row
/// count uniform, column count by integer division, resampled until the
/// column bound holds.
struct BcdstabDims {
    double cell_count_mean = 300.0; // the distribution parameters are not
    double cell_count_sd = 250.0;   // published; these are configurable defaults
    int cell_min = 4;
    int cell_max = 1000;
    int row_min = 2;
    int row_max = 100;
    int col_min = 2;
    int col_max = 15;
};

struct SynthConfig {
    DimMode dim_mode = DimMode::uniform_range;
    UniformDims uniform;
    BcdstabDims bcdstab;
    int n_blocks = 4;
    int merge_injections = 4;
    ContentMode content_mode = ContentMode::deterministic;
    int max_validation_retries = 3;
    std::uint64_t seed = 0;
    int fill_retry_budget = 1000;
    int dim_retry_budget = 100000;
    double filler_empty_fraction = 0.1;
};

struct ValidationOutcome {
    int attempts = 0;
    bool accepted = false;
    std::string reason;
};

struct SynthRecord {
    std::string id;
    CellMatrix matrix{1, 1};
    std::string structural_html;
    std::optional<std::string> filled_html;
    StyleAugmentation style;
    std::vector<std::string> provenance; // source table id per block
    ValidationOutcome validation;
};

/// Fills the structural skeleton with content. Output is never trusted:
/// the pipeline re-parses it and enforces grid equality.
class ContentGenerator {
public:
    virtual ~ContentGenerator() = default;
    virtual std::string populate(const std::string& structural_html, int attempt) = 0;
    virtual bool concurrent_safe() const { return true; }
};

struct Verdict {
    bool accept = false;
    std::string reason;
};

/// Judges a filled table. reference_structural_html may be empty when no
/// target grid is available.
class TableValidator {
public:
    virtual ~TableValidator() = default;
    virtual Verdict judge(const std::string& filled_html,
                          const std::string& reference_structural_html) = 0;
    virtual bool concurrent_safe() const { return true; }
};

/// Abstract request/response text channel to an external model.
class TextCompletionClient {
public:
    virtual ~TextCompletionClient() = default;
    virtual std::string complete(const std::string& prompt) = 0;
};

/// Verbatim client contracts for the external generator and judge.
inline constexpr std::string_view kPopulatePrompt =
    "Populate the empty table based on the HTML provided. Return a complete table! "
    "Ensure the table structure exactly match the empty table provided!";
inline constexpr std::string_view kJudgePrompt =
    "You are a table evaluating expert, you will receive an HTML-formatted table to verify "
    "both its structural compliance and the contextual coherence of its content.";

std::pair<int, int> sample_dims_uniform(const SynthConfig& cfg, Rng& rng);
std::pair<int, int> sample_dims_bcdstab(const SynthConfig& cfg, Rng& rng);

/// Splits (rows, cols) into n_blocks regions laid out as the divisor grid
/// closest to square that fits; cut positions are drawn uniformly without
/// repetition.
BlockLayout partition_grid(int rows, int cols, int n_blocks, Rng& rng);

/// Samples corpus tables uniformly, rejecting those smaller than (h, w)
/// after implicit-line repair, and crops the winner to size. Crops whose
/// window orphans a row or column are rejected too.
std::pair<CellMatrix, std::string> fill_block(int h, int w, const Corpus& corpus, Rng& rng,
                                              int retry_budget = 1000);

SynthRecord synthesize_one(const SynthConfig& cfg, const Corpus& corpus, ContentGenerator& gen,
                           TableValidator& val, Rng& rng, const std::string& id);

/// Record i runs on a seed derived from (cfg.seed, i); output order is by
/// index regardless of the execution schedule. Per-record failures are
/// captured in the record instead of aborting the batch.
std::vector<SynthRecord> synthesize_batch(const SynthConfig& cfg, const Corpus& corpus,
                                          ContentGenerator& gen, TableValidator& val, int count,
                                          int jobs = 1);

/// Offline stand-in for the external content model: cell (r, c) receives
/// "cell-r-c", with a seed-derived fraction left empty.
std::unique_ptr<ContentGenerator> deterministic_filler(double empty_fraction = 0.1,
                                                       std::uint64_t seed = 0);

/// Offline judge: accepts iff the filled markup parses, tiles its grid,
/// matches the reference grid, and has no implicit rows or columns.
std::unique_ptr<TableValidator> structural_validator();

/// Generator/validator speaking to an external model through a client.
std::unique_ptr<ContentGenerator> external_generator(std::shared_ptr<TextCompletionClient> client);
std::unique_ptr<TableValidator> external_validator(std::shared_ptr<TextCompletionClient> client);

/// HTTP client configured from TABFORGE_LLM_ENDPOINT, TABFORGE_LLM_MODEL
/// and TABFORGE_LLM_API_KEY. Throws external_client when unset.
std::unique_ptr<TextCompletionClient> http_client_from_env();

/// Writes records.jsonl, html/<id>.html and matrix/<id>.txt under out_dir.
void write_dataset(const std::vector<SynthRecord>& records, const std::filesystem::path& out_dir);

} // namespace tabforge
