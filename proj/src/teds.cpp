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
#include "tabforge/teds.hpp"

#include "tabforge/parallel.hpp"

namespace tabforge {

namespace {

void append_rows(TableTreeNode& parent, const TableStructure& s, int first_row, int row_count) {
    std::vector<std::vector<const LogicalCell*>> by_row(static_cast<std::size_t>(s.n_rows));
    for (const LogicalCell& cell : s.cells) {
        by_row[static_cast<std::size_t>(cell.anchor_row)].push_back(&cell);
    }
    for (int r = first_row; r < first_row + row_count; ++r) {
        TableTreeNode tr;
        tr.tag = "tr";
        auto row = by_row[static_cast<std::size_t>(r)];
        std::sort(row.begin(), row.end(), [](const LogicalCell* a, const LogicalCell* b) {
            return a->anchor_col < b->anchor_col;
        });
        for (const LogicalCell* cell : row) {
            TableTreeNode td;
            td.tag = "td";
            td.rowspan = cell->row_span;
            td.colspan = cell->col_span;
            td.content = cell->content;
            tr.children.push_back(std::move(td));
        }
        parent.children.push_back(std::move(tr));
    }
}

} // namespace

TableTreeNode build_tree(const HtmlTableDoc& doc) {
    TableTreeNode root;
    root.tag = "table";
    int row = 0;
    if (doc.groups.empty()) {
        append_rows(root, doc.structure, 0, doc.structure.n_rows);
        return root;
    }
    for (const RowGroup& group : doc.groups) {
        if (group.kind == RowGroup::Kind::bare) {
            append_rows(root, doc.structure, row, group.row_count);
        } else {
            TableTreeNode section;
            section.tag = group.kind == RowGroup::Kind::thead ? "thead" : "tbody";
            append_rows(section, doc.structure, row, group.row_count);
            root.children.push_back(std::move(section));
        }
        row += group.row_count;
    }
    // rows implied by rowspans past the last <tr> have no tr of their own
    return root;
}

int tree_size(const TableTreeNode& node) {
    int size = 1;
    for (const TableTreeNode& child : node.children) size += tree_size(child);
    return size;
}

double normalized_string_distance(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 0.0;
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<int> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return static_cast<double>(prev[m]) / static_cast<double>(std::max(n, m));
}

namespace {

void postorder_walk(const TableTreeNode& node, std::vector<const TableTreeNode*>& order,
                    std::vector<int>& lmld, int& counter) {
    int leftmost = -1;
    for (const TableTreeNode& child : node.children) {
        const int before = counter;
        postorder_walk(child, order, lmld, counter);
        if (leftmost == -1) leftmost = lmld[static_cast<std::size_t>(before)];
    }
    order.push_back(&node);
    lmld.push_back(leftmost == -1 ? counter : leftmost);
    ++counter;
}

struct TedsCost {
    const std::vector<const TableTreeNode*>& a;
    const std::vector<const TableTreeNode*>& b;
    bool structure_only;

    double operator()(int i, int j) const {
        if (i < 0) return 1.0;
        if (j < 0) return 1.0;
        const TableTreeNode& u = *a[static_cast<std::size_t>(i)];
        const TableTreeNode& v = *b[static_cast<std::size_t>(j)];
        if (u.tag != v.tag) return 1.0;
        if (u.tag == "td") {
            if (u.rowspan != v.rowspan || u.colspan != v.colspan) return 1.0;
            if (structure_only) return 0.0;
            const std::string_view cu = u.content ? std::string_view(*u.content) : std::string_view();
            const std::string_view cv = v.content ? std::string_view(*v.content) : std::string_view();
            return normalized_string_distance(cu, cv);
        }
        return 0.0;
    }
};

TedsScore score_from_trees(const TableTreeNode& pred, const TableTreeNode& gt, const TedsConfig& cfg) {
    std::vector<const TableTreeNode*> pa, pb;
    const TedTree ta = build_ted_tree(pred, pa);
    const TedTree tb = build_ted_tree(gt, pb);
    const double distance = ted_distance(ta, tb, TedsCost{pa, pb, cfg.structure_only});
    TedsScore score;
    score.distance = distance;
    score.size_pred = ta.size();
    score.size_gt = tb.size();
    const double denom = static_cast<double>(std::max(score.size_pred, score.size_gt));
    score.value = std::clamp(1.0 - distance / denom, 0.0, 1.0);
    return score;
}

} // namespace

TedTree build_ted_tree(const TableTreeNode& root, std::vector<const TableTreeNode*>& postorder) {
    TedTree tree;
    int counter = 0;
    postorder_walk(root, postorder, tree.lmld, counter);
    const int n = static_cast<int>(tree.lmld.size());
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    // keyroots: the highest node of each leftmost-leaf class
    for (int i = n - 1; i >= 0; --i) {
        const int l = tree.lmld[static_cast<std::size_t>(i)];
        if (!seen[static_cast<std::size_t>(l)]) {
            seen[static_cast<std::size_t>(l)] = true;
            tree.keyroots.push_back(i);
        }
    }
    std::sort(tree.keyroots.begin(), tree.keyroots.end());
    return tree;
}

double tree_edit_distance(const TableTreeNode& a, const TableTreeNode& b, const TedsConfig& cfg) {
    std::vector<const TableTreeNode*> pa, pb;
    const TedTree ta = build_ted_tree(a, pa);
    const TedTree tb = build_ted_tree(b, pb);
    return ted_distance(ta, tb, TedsCost{pa, pb, cfg.structure_only});
}

TedsScore teds(std::string_view pred, std::string_view gt, const TedsConfig& cfg) {
    HtmlTableDoc pred_doc;
    HtmlTableDoc gt_doc;
    try {
        pred_doc = parse_table_html(pred);
    } catch (const Error& e) {
        throw Error(e.code(), std::string("prediction: ") + e.what());
    }
    try {
        gt_doc = parse_table_html(gt);
    } catch (const Error& e) {
        throw Error(e.code(), std::string("ground truth: ") + e.what());
    }
    return score_from_trees(build_tree(pred_doc), build_tree(gt_doc), cfg);
}

BatchScoreResult batch_score(const std::vector<ScorePair>& pairs, const TedsConfig& cfg, int jobs) {
    BatchScoreResult result;
    result.structure_only = cfg.structure_only;
    result.per_pair.resize(pairs.size());

    parallel_for(static_cast<std::int64_t>(pairs.size()), jobs, [&](std::int64_t i) {
        const ScorePair& pair = pairs[static_cast<std::size_t>(i)];
        PairScore& out = result.per_pair[static_cast<std::size_t>(i)];
        out.id = pair.id;

        HtmlTableDoc gt_doc;
        try {
            gt_doc = parse_table_html(pair.gt_html);
        } catch (const Error& e) {
            throw Error(ErrorCode::ground_truth_malformed, pair.id + ": " + e.what());
        }
        HtmlTableDoc pred_doc;
        try {
            pred_doc = parse_table_html(pair.pred_html);
        } catch (const Error&) {
            out.pred_failed = true;
            out.teds = 0.0;
            out.s_teds = 0.0;
            return;
        }
        const TableTreeNode pred_tree = build_tree(pred_doc);
        const TableTreeNode gt_tree = build_tree(gt_doc);
        out.s_teds = score_from_trees(pred_tree, gt_tree, TedsConfig{true}).value;
        if (!cfg.structure_only) {
            out.teds = score_from_trees(pred_tree, gt_tree, TedsConfig{false}).value;
        }
    });

    double sum_teds = 0.0;
    double sum_s_teds = 0.0;
    for (const PairScore& p : result.per_pair) {
        if (p.pred_failed) ++result.pred_failures;
        sum_teds += p.teds;
        sum_s_teds += p.s_teds;
    }
    if (!result.per_pair.empty()) {
        result.mean_defined = true;
        result.mean_teds = sum_teds / static_cast<double>(result.per_pair.size());
        result.mean_s_teds = sum_s_teds / static_cast<double>(result.per_pair.size());
    }
    return result;
}

} // namespace tabforge
