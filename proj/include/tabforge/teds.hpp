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

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tabforge/html_codec.hpp"

namespace tabforge {

/// Ordered labelled tree of an HTML table. Only td nodes carry spans and
/// content.
struct TableTreeNode {
    std::string tag;
    int colspan = 1;
    int rowspan = 1;
    std::optional<std::string> content;
    std::vector<TableTreeNode> children;
};

struct TedsConfig {
    bool structure_only = false;
};

struct TedsScore {
    double value = 0.0;
    double distance = 0.0;
    int size_pred = 0;
    int size_gt = 0;
};

/// Root is table; rows sit under thead/tbody group nodes exactly as the
/// source markup grouped them, bare rows directly under the root.
TableTreeNode build_tree(const HtmlTableDoc& doc);

int tree_size(const TableTreeNode& node);

/// Character-level edit distance divided by the longer length; 0 when
/// both strings are empty.
double normalized_string_distance(std::string_view a, std::string_view b);

/// Postorder shape arrays for the keyroot tree-edit-distance algorithm.
struct TedTree {
    std::vector<int> lmld;     // leftmost leaf descendant, postorder indexed
    std::vector<int> keyroots; // ascending

    int size() const { return static_cast<int>(lmld.size()); }
};

TedTree build_ted_tree(const TableTreeNode& root, std::vector<const TableTreeNode*>& postorder);

/// Ordered tree edit distance (keyroot decomposition). cost(i, -1) is the
/// deletion cost of a's node i, cost(-1, j) the insertion cost of b's node
/// j, cost(i, j) the rename cost; indices are postorder.
template <class Cost>
double ted_distance(const TedTree& a, const TedTree& b, Cost&& cost) {
    const int n1 = a.size();
    const int n2 = b.size();
    if (n1 == 0 || n2 == 0) {
        double total = 0.0;
        for (int i = 0; i < n1; ++i) total += cost(i, -1);
        for (int j = 0; j < n2; ++j) total += cost(-1, j);
        return total;
    }
    std::vector<double> treedist(static_cast<std::size_t>(n1) * n2, 0.0);
    auto td = [&](int i, int j) -> double& { return treedist[static_cast<std::size_t>(i) * n2 + j]; };

    std::vector<double> fd; // forest distance scratch, sized per keyroot pair
    for (int ki : a.keyroots) {
        const int li = a.lmld[static_cast<std::size_t>(ki)];
        const int rows = ki - li + 2;
        for (int kj : b.keyroots) {
            const int lj = b.lmld[static_cast<std::size_t>(kj)];
            const int cols = kj - lj + 2;
            fd.assign(static_cast<std::size_t>(rows) * cols, 0.0);
            auto f = [&](int r, int c) -> double& { return fd[static_cast<std::size_t>(r) * cols + c]; };
            for (int r = 1; r < rows; ++r) f(r, 0) = f(r - 1, 0) + cost(li + r - 1, -1);
            for (int c = 1; c < cols; ++c) f(0, c) = f(0, c - 1) + cost(-1, lj + c - 1);
            for (int r = 1; r < rows; ++r) {
                const int d1 = li + r - 1;
                const bool left_aligned1 = a.lmld[static_cast<std::size_t>(d1)] == li;
                for (int c = 1; c < cols; ++c) {
                    const int d2 = lj + c - 1;
                    const double del = f(r - 1, c) + cost(d1, -1);
                    const double ins = f(r, c - 1) + cost(-1, d2);
                    double best = std::min(del, ins);
                    if (left_aligned1 && b.lmld[static_cast<std::size_t>(d2)] == lj) {
                        const double ren = f(r - 1, c - 1) + cost(d1, d2);
                        best = std::min(best, ren);
                        f(r, c) = best;
                        td(d1, d2) = best;
                    } else {
                        const int pr = a.lmld[static_cast<std::size_t>(d1)] - li;
                        const int pc = b.lmld[static_cast<std::size_t>(d2)] - lj;
                        best = std::min(best, f(pr, pc) + td(d1, d2));
                        f(r, c) = best;
                    }
                }
            }
        }
    }
    return td(n1 - 1, n2 - 1);
}

/// Tree edit distance under the table cost model: unit insert/delete;
/// rename is 1 across different tags or differing td spans, otherwise the
/// normalized content distance for td (0 when structure_only) and 0 for
/// matching non-td tags.
double tree_edit_distance(const TableTreeNode& a, const TableTreeNode& b, const TedsConfig& cfg);

/// TEDS between two single-table markups; structure_only gives S-TEDS.
TedsScore teds(std::string_view pred, std::string_view gt, const TedsConfig& cfg);

struct ScorePair {
    std::string id;
    std::string pred_html;
    std::string gt_html;
};

struct PairScore {
    std::string id;
    double teds = 0.0;
    double s_teds = 0.0;
    bool pred_failed = false;
};

struct BatchScoreResult {
    std::vector<PairScore> per_pair;
    bool structure_only = false;
    int pred_failures = 0;
    bool mean_defined = false;
    double mean_teds = 0.0;
    double mean_s_teds = 0.0;
};

/// Scores every pair; unparseable predictions score 0 and are flagged,
/// an unparseable ground truth raises ground_truth_malformed naming the
/// id. Output order follows input order whatever the schedule.
BatchScoreResult batch_score(const std::vector<ScorePair>& pairs, const TedsConfig& cfg, int jobs = 1);

} // namespace tabforge
