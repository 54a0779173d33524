#include "invsim/graph.hpp"

#include <algorithm>
#include <array>

namespace invsim {

namespace {

constexpr std::array<std::string_view, 5> kCategoryNames = {"QF", "IIRA", "IND", "RF", "NC"};

}  // namespace

Category category_from_string(std::string_view text) {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
        if (text == kCategoryNames[i]) return static_cast<Category>(i);
    }
    throw ParseError("unknown category \"" + std::string(text) +
                     "\" (allowed: QF, IIRA, IND, RF, NC)");
}

std::string_view to_string(Category c) noexcept {
    return kCategoryNames[static_cast<std::size_t>(c)];
}

LabeledGraph LabeledGraph::build(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges) {
    LabeledGraph g;

    for (const NodeRecord& r : nodes) {
        if (r.id.empty()) throw BuildError("node record with empty id");
        if (r.label.empty()) throw BuildError("node \"" + r.id + "\" has an empty label");
    }

    std::sort(nodes.begin(), nodes.end(),
              [](const NodeRecord& a, const NodeRecord& b) { return a.id < b.id; });

    // Collapse duplicate node records; conflicting labels are a rejection.
    std::size_t kept = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (kept > 0 && nodes[kept - 1].id == nodes[i].id) {
            if (nodes[kept - 1].label != nodes[i].label) {
                throw BuildError("duplicate node id \"" + nodes[i].id +
                                 "\" with conflicting labels \"" + nodes[kept - 1].label +
                                 "\" and \"" + nodes[i].label + "\"");
            }
            continue;
        }
        if (kept != i) nodes[kept] = std::move(nodes[i]);
        ++kept;
    }
    nodes.resize(kept);

    g.ids_.reserve(nodes.size());
    g.id_index_.reserve(nodes.size());
    for (NodeIndex i = 0; i < nodes.size(); ++i) {
        g.ids_.push_back(nodes[i].id);
        g.id_index_.emplace(nodes[i].id, i);
    }

    // Label table in lexicographic order, covering node and edge labels.
    std::vector<std::string> label_pool;
    label_pool.reserve(nodes.size());
    for (const NodeRecord& r : nodes) label_pool.push_back(r.label);
    for (const EdgeRecord& e : edges) {
        if (!e.label.empty()) label_pool.push_back(e.label);
    }
    std::sort(label_pool.begin(), label_pool.end());
    label_pool.erase(std::unique(label_pool.begin(), label_pool.end()), label_pool.end());
    g.label_names_ = std::move(label_pool);
    g.label_index_.reserve(g.label_names_.size());
    for (LabelId l = 0; l < g.label_names_.size(); ++l) g.label_index_.emplace(g.label_names_[l], l);

    g.node_labels_.resize(nodes.size());
    for (NodeIndex i = 0; i < nodes.size(); ++i) {
        g.node_labels_[i] = g.label_index_.at(nodes[i].label);
    }

    // Resolve edge endpoints and collapse duplicates (set semantics). A
    // labeled and an unlabeled duplicate collapse to the labeled edge;
    // conflicting labels are a rejection.
    struct RawEdge {
        NodeIndex src, dst;
        LabelId label;
    };
    std::vector<RawEdge> raw;
    raw.reserve(edges.size());
    for (const EdgeRecord& e : edges) {
        auto s = g.id_index_.find(e.src);
        if (s == g.id_index_.end()) {
            throw BuildError("unknown endpoint \"" + e.src + "\" in edge (" + e.src + ", " +
                             e.dst + ")");
        }
        auto d = g.id_index_.find(e.dst);
        if (d == g.id_index_.end()) {
            throw BuildError("unknown endpoint \"" + e.dst + "\" in edge (" + e.src + ", " +
                             e.dst + ")");
        }
        LabelId l = e.label.empty() ? kNoLabel : g.label_index_.at(e.label);
        raw.push_back({s->second, d->second, l});
    }
    std::sort(raw.begin(), raw.end(), [](const RawEdge& a, const RawEdge& b) {
        if (a.src != b.src) return a.src < b.src;
        if (a.dst != b.dst) return a.dst < b.dst;
        return a.label < b.label;
    });

    g.edges_.reserve(raw.size());
    g.edge_labels_.reserve(raw.size());
    for (const RawEdge& e : raw) {
        if (!g.edges_.empty() && g.edges_.back() == std::make_pair(e.src, e.dst)) {
            LabelId prev = g.edge_labels_.back();
            if (prev != e.label && prev != kNoLabel && e.label != kNoLabel) {
                throw BuildError("duplicate edge (" + g.ids_[e.src] + ", " + g.ids_[e.dst] +
                                 ") with conflicting labels \"" + g.label_names_[prev] +
                                 "\" and \"" + g.label_names_[e.label] + "\"");
            }
            if (prev == kNoLabel) g.edge_labels_.back() = e.label;
            continue;
        }
        g.edges_.emplace_back(e.src, e.dst);
        g.edge_labels_.push_back(e.label);
    }

    g.build_indexes();
    return g;
}

void LabeledGraph::build_indexes() {
    const std::size_t n = ids_.size();

    out_offsets_.assign(n + 1, 0);
    in_offsets_.assign(n + 1, 0);
    for (const auto& [s, d] : edges_) {
        ++out_offsets_[s + 1];
        ++in_offsets_[d + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        out_offsets_[i + 1] += out_offsets_[i];
        in_offsets_[i + 1] += in_offsets_[i];
    }
    out_targets_.resize(edges_.size());
    in_sources_.resize(edges_.size());
    std::vector<std::uint32_t> out_pos(out_offsets_.begin(), out_offsets_.end() - 1);
    std::vector<std::uint32_t> in_pos(in_offsets_.begin(), in_offsets_.end() - 1);
    // edges_ is sorted by (src, dst), so out lists come out sorted; in lists
    // are filled in src order per dst, which is also ascending.
    for (const auto& [s, d] : edges_) {
        out_targets_[out_pos[s]++] = d;
        in_sources_[in_pos[d]++] = s;
    }

    label_offsets_.assign(label_names_.size() + 1, 0);
    for (std::size_t i = 0; i < n; ++i) ++label_offsets_[node_labels_[i] + 1];
    for (std::size_t l = 0; l < label_names_.size(); ++l) label_offsets_[l + 1] += label_offsets_[l];
    label_members_.resize(n);
    std::vector<std::uint32_t> label_pos(label_offsets_.begin(), label_offsets_.end() - 1);
    for (NodeIndex i = 0; i < n; ++i) label_members_[label_pos[node_labels_[i]]++] = i;
}

std::optional<NodeIndex> LabeledGraph::find(const std::string& id) const {
    auto it = id_index_.find(id);
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<LabelId> LabeledGraph::find_label(const std::string& name) const {
    auto it = label_index_.find(name);
    if (it == label_index_.end()) return std::nullopt;
    return it->second;
}

std::span<const NodeIndex> LabeledGraph::successors(NodeIndex n) const {
    return {out_targets_.data() + out_offsets_[n], out_offsets_[n + 1] - out_offsets_[n]};
}

std::span<const NodeIndex> LabeledGraph::predecessors(NodeIndex n) const {
    return {in_sources_.data() + in_offsets_[n], in_offsets_[n + 1] - in_offsets_[n]};
}

std::span<const NodeIndex> LabeledGraph::nodes_with_label(LabelId l) const {
    return {label_members_.data() + label_offsets_[l], label_offsets_[l + 1] - label_offsets_[l]};
}

std::span<const NodeIndex> LabeledGraph::nodes_with_label(const std::string& name) const {
    auto l = find_label(name);
    if (!l) return {};
    return nodes_with_label(*l);
}

std::string_view LabeledGraph::edge_label(std::size_t edge_pos) const {
    LabelId l = edge_labels_[edge_pos];
    if (l == kNoLabel) return {};
    return label_names_[l];
}

bool LabeledGraph::has_edge(NodeIndex src, NodeIndex dst) const {
    auto succ = successors(src);
    return std::binary_search(succ.begin(), succ.end(), dst);
}

bool LabeledGraph::operator==(const LabeledGraph& other) const {
    return ids_ == other.ids_ && node_labels_ == other.node_labels_ &&
           label_names_ == other.label_names_ && edges_ == other.edges_ &&
           edge_labels_ == other.edge_labels_;
}

bool LabeledGraph::indexes_consistent() const {
    LabeledGraph rebuilt;
    rebuilt.ids_ = ids_;
    rebuilt.node_labels_ = node_labels_;
    rebuilt.label_names_ = label_names_;
    rebuilt.edges_ = edges_;
    rebuilt.build_indexes();
    return out_offsets_ == rebuilt.out_offsets_ && out_targets_ == rebuilt.out_targets_ &&
           in_offsets_ == rebuilt.in_offsets_ && in_sources_ == rebuilt.in_sources_ &&
           label_offsets_ == rebuilt.label_offsets_ && label_members_ == rebuilt.label_members_;
}

QueryGraph QueryGraph::build(std::vector<QueryNodeRecord> nodes, std::vector<EdgeRecord> edges) {
    std::vector<NodeRecord> plain;
    plain.reserve(nodes.size());
    for (const QueryNodeRecord& r : nodes) plain.push_back({r.id, r.label});

    QueryGraph q;
    q.graph_ = LabeledGraph::build(std::move(plain), std::move(edges));

    q.categories_.resize(q.graph_.node_count(), Category::NC);
    std::vector<bool> seen(q.graph_.node_count(), false);
    for (const QueryNodeRecord& r : nodes) {
        NodeIndex n = *q.graph_.find(r.id);
        if (seen[n] && q.categories_[n] != r.category) {
            throw BuildError("duplicate query node id \"" + r.id +
                             "\" with conflicting categories");
        }
        q.categories_[n] = r.category;
        seen[n] = true;
    }

    for (NodeIndex n = 0; n < q.graph_.node_count(); ++n) {
        if (q.categories_[n] == Category::QF) q.qf_nodes_.push_back(n);
    }
    return q;
}

namespace {

bool weakly_connected(const LabeledGraph& g) {
    const std::size_t n = g.node_count();
    if (n <= 1) return true;
    std::vector<bool> seen(n, false);
    std::vector<NodeIndex> stack = {0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
        NodeIndex cur = stack.back();
        stack.pop_back();
        for (auto nbrs : {g.successors(cur), g.predecessors(cur)}) {
            for (NodeIndex nxt : nbrs) {
                if (!seen[nxt]) {
                    seen[nxt] = true;
                    ++reached;
                    stack.push_back(nxt);
                }
            }
        }
    }
    return reached == n;
}

// Query nodes forward-reachable from any QF node, at any distance.
std::vector<bool> forward_reachable_from_qf(const QueryGraph& q) {
    std::vector<bool> reach(q.node_count(), false);
    std::vector<NodeIndex> stack;
    for (NodeIndex u : q.qf_nodes()) {
        reach[u] = true;
        stack.push_back(u);
    }
    while (!stack.empty()) {
        NodeIndex cur = stack.back();
        stack.pop_back();
        for (NodeIndex nxt : q.graph().successors(cur)) {
            if (!reach[nxt]) {
                reach[nxt] = true;
                stack.push_back(nxt);
            }
        }
    }
    return reach;
}

}  // namespace

ValidationReport validate_query(const QueryGraph& q, MatchMode mode) {
    ValidationReport report;

    if (q.node_count() == 0) {
        report.violations.push_back("empty query");
    }

    if (mode == MatchMode::investigative && q.node_count() > 0) {
        bool has_qf = !q.qf_nodes().empty();
        bool has_indicator = false;
        for (Category c : q.categories()) {
            if (c == Category::IND || c == Category::RF) has_indicator = true;
        }
        if (!has_qf) report.violations.push_back("no QF node");
        if (!has_indicator) report.violations.push_back("no IND/RF node");

        if (has_qf && has_indicator) {
            auto reach = forward_reachable_from_qf(q);
            for (NodeIndex n = 0; n < q.node_count(); ++n) {
                Category c = q.category(n);
                if ((c == Category::IND || c == Category::RF) && !reach[n]) {
                    report.warnings.push_back(
                        "indicator node \"" + q.graph().id(n) +
                        "\" is not a descendant of any QF node and can never appear in a "
                        "relevant set");
                }
            }
        }
    }

    if (q.node_count() > 0 && !weakly_connected(q.graph())) {
        report.warnings.push_back("query is not weakly connected (a query is one pattern)");
    }

    report.ok = report.violations.empty();
    return report;
}

}  // namespace invsim
