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
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tabforge/corpus.hpp"
#include "tabforge/html_codec.hpp"
#include "tabforge/parallel.hpp"
#include "tabforge/synth.hpp"
#include "tabforge/teds.hpp"

namespace {

using namespace tabforge;
using clock_type = std::chrono::steady_clock;

double run_ms(const std::function<void()>& fn) {
    const auto start = clock_type::now();
    fn();
    const auto end = clock_type::now();
    return std::chrono::duration<double, std::milli>(end - start).count();
}

CellMatrix random_matrix(int rows, int cols, int merges, Rng& rng) {
    CellMatrix base(rows, cols, Token::C);
    return inject_merges(base, merges, rng);
}

std::string filled_html(const CellMatrix& matrix, Rng& rng, double mutate_fraction) {
    TableStructure s = matrix_to_cells(matrix);
    for (LogicalCell& cell : s.cells) {
        cell.content = "v" + std::to_string(rng.uniform_int(0, 999));
        if (mutate_fraction > 0.0 && rng.bernoulli(mutate_fraction)) {
            cell.content = "m" + *cell.content;
        }
    }
    return structure_to_html(s, EmitMode::with_content);
}

void report(const char* kernel, std::size_t n, double serial_ms, double parallel_ms) {
    std::printf("%-18s n=%-6zu serial %9.1f ms   parallel %9.1f ms   speedup %.2fx\n", kernel, n,
                serial_ms, parallel_ms, parallel_ms > 0 ? serial_ms / parallel_ms : 0.0);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel benchmark for the batch kernels"};
    int n_pairs = 200;
    int n_records = 50;
    int target_cells = 400;
    std::uint64_t seed = 7;
    int jobs = default_jobs();
    app.add_option("--pairs", n_pairs, "scoring pairs to generate");
    app.add_option("--records", n_records, "records to synthesize");
    app.add_option("--cells", target_cells, "approximate cells per scoring table");
    app.add_option("--seed", seed, "fixture seed");
    app.add_option("--jobs", jobs, "parallel worker count");
    CLI11_PARSE(app, argc, argv);

    Rng rng(seed);

    // --- scoring kernel -------------------------------------------------
    std::vector<ScorePair> pairs;
    pairs.reserve(static_cast<std::size_t>(n_pairs));
    for (int i = 0; i < n_pairs; ++i) {
        const int rows = static_cast<int>(rng.uniform_int(8, 30));
        const int cols = std::max(2, std::min(15, target_cells / rows));
        const CellMatrix matrix = random_matrix(rows, cols, rows, rng);
        ScorePair pair;
        pair.id = "pair-" + std::to_string(i);
        pair.gt_html = filled_html(matrix, rng, 0.0);
        pair.pred_html = filled_html(matrix, rng, 0.1);
        pairs.push_back(std::move(pair));
    }
    TedsConfig cfg;
    BatchScoreResult serial_scores;
    BatchScoreResult parallel_scores;
    const double score_serial = run_ms([&] { serial_scores = batch_score(pairs, cfg, 1); });
    const double score_parallel = run_ms([&] { parallel_scores = batch_score(pairs, cfg, jobs); });
    report("batch_score", pairs.size(), score_serial, score_parallel);
    for (std::size_t i = 0; i < serial_scores.per_pair.size(); ++i) {
        if (serial_scores.per_pair[i].teds != parallel_scores.per_pair[i].teds) {
            std::fprintf(stderr, "serial and parallel scores disagree at %zu\n", i);
            return 1;
        }
    }

    // --- synthesis kernel -------------------------------------------------
    std::vector<CorpusRecord> sources;
    for (int i = 0; i < 12; ++i) {
        CorpusRecord record;
        record.id = "src-" + std::to_string(i);
        const int rows = static_cast<int>(rng.uniform_int(20, 32));
        const int cols = static_cast<int>(rng.uniform_int(20, 32));
        record.structure = matrix_to_cells(random_matrix(rows, cols, 3 * rows, rng));
        sources.push_back(std::move(record));
    }
    const Corpus corpus = Corpus::from_records(std::move(sources));
    SynthConfig synth_cfg;
    synth_cfg.seed = seed;
    auto generator = deterministic_filler(0.1, seed);
    auto validator = structural_validator();
    std::vector<SynthRecord> serial_records;
    std::vector<SynthRecord> parallel_records;
    const double synth_serial = run_ms(
        [&] { serial_records = synthesize_batch(synth_cfg, corpus, *generator, *validator, n_records, 1); });
    const double synth_parallel = run_ms([&] {
        parallel_records = synthesize_batch(synth_cfg, corpus, *generator, *validator, n_records, jobs);
    });
    report("synthesize_batch", serial_records.size(), synth_serial, synth_parallel);
    for (std::size_t i = 0; i < serial_records.size(); ++i) {
        if (!(serial_records[i].matrix == parallel_records[i].matrix) ||
            serial_records[i].filled_html != parallel_records[i].filled_html) {
            std::fprintf(stderr, "serial and parallel synthesis disagree at %zu\n", i);
            return 1;
        }
    }
    return 0;
}
