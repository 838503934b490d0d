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
#include "tabforge/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "tabforge/html_codec.hpp"
#include "tabforge/parallel.hpp"

namespace tabforge {

namespace {

using nlohmann::json;

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::unreadable_path, "cannot open " + path.string());
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

std::optional<CorpusRecord> ingest_html(const std::string& id, const std::string& html,
                                        std::optional<std::string> image_ref, bool repair) {
    try {
        HtmlTableDoc doc = parse_table_html(html);
        CorpusRecord record;
        record.id = id;
        record.image_ref = std::move(image_ref);
        const ImplicitReport implicit = detect_implicit_structure(doc.structure);
        record.defect_flags.had_implicit_rows = !implicit.implicit_rows.empty();
        record.defect_flags.implicit_count =
            static_cast<int>(implicit.implicit_rows.size() + implicit.implicit_cols.size());
        record.structure = repair ? remove_implicit(doc.structure) : std::move(doc.structure);
        return record;
    } catch (const Error&) {
        return std::nullopt;
    }
}

std::optional<CorpusRecord> ingest_pubtabnet_line(const std::string& line, bool repair) {
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::exception&) {
        return std::nullopt;
    }
    if (!doc.is_object()) return std::nullopt;
    std::string id;
    if (doc.contains("imgid") && doc["imgid"].is_number_integer()) {
        id = std::to_string(doc["imgid"].get<long long>());
    }
    if (doc.contains("filename") && doc["filename"].is_string()) {
        id = doc["filename"].get<std::string>();
    }
    if (id.empty()) return std::nullopt;

    if (!doc.contains("html") || !doc["html"].is_object()) return std::nullopt;
    const json& html = doc["html"];
    if (!html.contains("structure") || !html["structure"].contains("tokens")) return std::nullopt;

    std::vector<std::string> structure_tokens;
    try {
        structure_tokens = html["structure"]["tokens"].get<std::vector<std::string>>();
    } catch (const json::exception&) {
        return std::nullopt;
    }
    std::vector<std::vector<std::string>> cell_tokens;
    if (html.contains("cells") && html["cells"].is_array()) {
        for (const json& cell : html["cells"]) {
            if (cell.contains("tokens") && cell["tokens"].is_array()) {
                try {
                    cell_tokens.push_back(cell["tokens"].get<std::vector<std::string>>());
                } catch (const json::exception&) {
                    return std::nullopt;
                }
            } else {
                cell_tokens.emplace_back();
            }
        }
    }
    std::optional<std::string> image_ref;
    if (doc.contains("filename") && doc["filename"].is_string()) {
        image_ref = doc["filename"].get<std::string>();
    }
    const std::string markup = reassemble_pubtabnet_html(structure_tokens, cell_tokens);
    return ingest_html(id, markup, std::move(image_ref), repair);
}

} // namespace

std::string reassemble_pubtabnet_html(const std::vector<std::string>& structure_tokens,
                                      const std::vector<std::vector<std::string>>& cell_tokens) {
    std::string body;
    std::size_t cell_index = 0;
    for (const std::string& token : structure_tokens) {
        const auto first = token.find_first_not_of(' ');
        const std::string core = first == std::string::npos ? "" : token.substr(first);
        if (core == "</td>") {
            if (cell_index < cell_tokens.size()) {
                for (const std::string& piece : cell_tokens[cell_index]) body += piece;
            }
            ++cell_index;
        }
        // attribute tokens may come without their leading space
        if (!token.empty() && token.front() != '<' && token.front() != '>' && token.front() != ' ' &&
            !body.empty() && body.back() != ' ' && body.back() != '<') {
            body += ' ';
        }
        body += token;
    }
    if (body.rfind("<table", 0) != 0) {
        body = "<table>" + body + "</table>";
    }
    return body;
}

Corpus Corpus::load(const std::filesystem::path& path, CorpusFormat format,
                    const LoadOptions& options) {
    std::vector<std::optional<CorpusRecord>> slots;
    int attempted = 0;

    if (format == CorpusFormat::pubtabnet_jsonl) {
        std::vector<std::string> lines = read_lines(path);
        lines.erase(std::remove_if(lines.begin(), lines.end(), blank), lines.end());
        attempted = static_cast<int>(lines.size());
        slots.resize(lines.size());
        parallel_for(static_cast<std::int64_t>(lines.size()), options.jobs, [&](std::int64_t i) {
            slots[static_cast<std::size_t>(i)] =
                ingest_pubtabnet_line(lines[static_cast<std::size_t>(i)], options.repair);
        });
    } else {
        std::error_code ec;
        if (!std::filesystem::is_directory(path, ec)) {
            throw Error(ErrorCode::unreadable_path, path.string() + " is not a readable directory");
        }
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(path)) {
            if (entry.is_regular_file() && entry.path().extension() == ".html") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        attempted = static_cast<int>(files.size());
        slots.resize(files.size());
        parallel_for(static_cast<std::int64_t>(files.size()), options.jobs, [&](std::int64_t i) {
            const auto& file = files[static_cast<std::size_t>(i)];
            std::ifstream in(file);
            if (!in) return;
            std::string html((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            slots[static_cast<std::size_t>(i)] =
                ingest_html(file.stem().string(), html, std::nullopt, options.repair);
        });
    }

    Corpus corpus;
    for (auto& slot : slots) {
        if (slot.has_value()) corpus.records_.push_back(std::move(*slot));
    }
    corpus.skipped_ = attempted - static_cast<int>(corpus.records_.size());
    if (corpus.records_.empty()) {
        throw Error(ErrorCode::empty_corpus, "no usable records in " + path.string());
    }
    corpus.rebuild_index();
    return corpus;
}

Corpus Corpus::from_records(std::vector<CorpusRecord> records) {
    if (records.empty()) {
        throw Error(ErrorCode::empty_corpus, "no records given");
    }
    Corpus corpus;
    corpus.records_ = std::move(records);
    corpus.rebuild_index();
    return corpus;
}

void Corpus::rebuild_index() {
    by_id_.clear();
    dim_index_.clear();
    dim_index_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        by_id_.emplace(records_[i].id, i);
        dim_index_.emplace_back(records_[i].structure.n_rows, records_[i].structure.n_cols);
    }
}

const CorpusRecord* Corpus::find(const std::string& id) const {
    const auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &records_[it->second];
}

std::vector<std::size_t> Corpus::compatible_indices(int min_rows, int min_cols) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dim_index_.size(); ++i) {
        if (dim_index_[i].first >= min_rows && dim_index_[i].second >= min_cols) {
            out.push_back(i);
        }
    }
    return out;
}

const CorpusRecord& Corpus::sample_compatible(int min_rows, int min_cols, Rng& rng) const {
    const std::vector<std::size_t> candidates = compatible_indices(min_rows, min_cols);
    if (candidates.empty()) {
        throw Error(ErrorCode::no_compatible_source,
                    "no record is at least " + std::to_string(min_rows) + "x" + std::to_string(min_cols));
    }
    const auto pick =
        static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(candidates.size()) - 1));
    return records_[candidates[pick]];
}

AuditReport audit_implicit(const Corpus& corpus) {
    AuditReport report;
    report.total_records = corpus.size();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const CorpusRecord& record = corpus.record(i);
        const ImplicitReport implicit = detect_implicit_structure(record.structure);
        if (implicit.empty()) continue;
        report.affected_records += 1;
        report.total_implicit_rows += static_cast<long long>(implicit.implicit_rows.size());
        report.total_implicit_cols += static_cast<long long>(implicit.implicit_cols.size());
        report.per_record.push_back(AuditEntry{record.id, implicit.implicit_rows, implicit.implicit_cols});
    }
    if (report.total_records > 0) {
        report.affected_fraction =
            static_cast<double>(report.affected_records) / static_cast<double>(report.total_records);
    }
    return report;
}

} // namespace tabforge
