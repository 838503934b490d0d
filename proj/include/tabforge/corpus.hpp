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
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tabforge/cell_matrix.hpp"
#include "tabforge/rng.hpp"

namespace tabforge {

struct DefectFlags {
    bool had_implicit_rows = false;
    int implicit_count = 0; // implicit rows plus implicit columns
};

struct CorpusRecord {
    std::string id;
    TableStructure structure;
    std::optional<std::string> image_ref;
    DefectFlags defect_flags;
};

enum class CorpusFormat { pubtabnet_jsonl, html_dir };

struct LoadOptions {
    bool repair = false; // remove implicit rows/columns on ingest
    int jobs = 1;
};

/// Immutable, shareable store of ingested tables with a dimension index
/// for block sourcing during synthesis.
class Corpus {
public:
    static Corpus load(const std::filesystem::path& path, CorpusFormat format,
                       const LoadOptions& options = {});

    std::size_t size() const { return records_.size(); }
    const CorpusRecord& record(std::size_t index) const { return records_[index]; }
    const CorpusRecord* find(const std::string& id) const;
    const std::vector<CorpusRecord>& records() const { return records_; }

    /// Malformed inputs skipped during load.
    int skipped() const { return skipped_; }

    /// Uniform over records whose dimensions cover (min_rows, min_cols).
    const CorpusRecord& sample_compatible(int min_rows, int min_cols, Rng& rng) const;

    /// Ids of records with dimensions at least (min_rows, min_cols).
    std::vector<std::size_t> compatible_indices(int min_rows, int min_cols) const;

    /// Builds a corpus directly from structures; used by tests and the
    /// synthesis fixtures.
    static Corpus from_records(std::vector<CorpusRecord> records);

private:
    Corpus() = default;
    void rebuild_index();

    std::vector<CorpusRecord> records_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::vector<std::pair<int, int>> dim_index_; // (rows, cols) per record
    int skipped_ = 0;
};

struct AuditEntry {
    std::string id;
    std::vector<int> implicit_rows;
    std::vector<int> implicit_cols;
};

struct AuditReport {
    std::size_t total_records = 0;
    std::size_t affected_records = 0;
    double affected_fraction = 0.0;
    long long total_implicit_rows = 0;
    long long total_implicit_cols = 0;
    std::vector<AuditEntry> per_record; // affected records only
};

/// Runs the implicit-line detector over every record and aggregates.
AuditReport audit_implicit(const Corpus& corpus);

/// Reassembles one PubTabNet annotation (structure tokens plus per-cell
/// content token lists) into table markup.
std::string reassemble_pubtabnet_html(const std::vector<std::string>& structure_tokens,
                                      const std::vector<std::vector<std::string>>& cell_tokens);

} // namespace tabforge
