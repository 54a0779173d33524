#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "invsim/errors.hpp"

namespace invsim {

// Nodes and labels are referred to by dense indexes internally. Index order
// equals lexicographic order of the underlying strings: build() sorts records
// by id (and labels by name) before assigning indexes, so two graphs built
// from the same records in any order are identical member-for-member.
using NodeIndex = std::uint32_t;
using LabelId = std::uint32_t;

inline constexpr LabelId kNoLabel = static_cast<LabelId>(-1);

// Investigation role of a query node.
enum class Category : std::uint8_t { QF, IIRA, IND, RF, NC };

// Throws ParseError listing the allowed values.
Category category_from_string(std::string_view text);
std::string_view to_string(Category c) noexcept;

struct NodeRecord {
    std::string id;
    std::string label;
};

struct EdgeRecord {
    std::string src;
    std::string dst;
    std::string label;  // empty = unlabeled
};

/// Immutable directed graph with one class label per node, optional edge
/// labels, and prebuilt successor/predecessor/label indexes. Safe for
/// concurrent reads.
class LabeledGraph {
public:
    LabeledGraph() = default;

    // Collapses duplicate edges; rejects dangling endpoints, duplicate ids
    // with conflicting labels, and empty ids/labels.
    static LabeledGraph build(std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges);

    std::size_t node_count() const noexcept { return ids_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::size_t label_count() const noexcept { return label_names_.size(); }

    const std::string& id(NodeIndex n) const { return ids_[n]; }
    LabelId label_id(NodeIndex n) const { return node_labels_[n]; }
    const std::string& label(NodeIndex n) const { return label_names_[node_labels_[n]]; }
    const std::string& label_name(LabelId l) const { return label_names_[l]; }

    std::optional<NodeIndex> find(const std::string& id) const;
    std::optional<LabelId> find_label(const std::string& name) const;

    std::span<const NodeIndex> successors(NodeIndex n) const;
    std::span<const NodeIndex> predecessors(NodeIndex n) const;

    std::span<const NodeIndex> nodes_with_label(LabelId l) const;
    // Empty span when the label does not occur in this graph.
    std::span<const NodeIndex> nodes_with_label(const std::string& name) const;

    // Sorted unique (src, dst) pairs; edge_label(i) belongs to edges()[i].
    const std::vector<std::pair<NodeIndex, NodeIndex>>& edges() const noexcept { return edges_; }
    std::string_view edge_label(std::size_t edge_pos) const;
    bool has_edge(NodeIndex src, NodeIndex dst) const;

    bool operator==(const LabeledGraph& other) const;

    // Recomputes every index from the node/edge sets and compares. Used by
    // tests to assert index consistency.
    bool indexes_consistent() const;

private:
    std::vector<std::string> ids_;                         // index -> id, sorted
    std::unordered_map<std::string, NodeIndex> id_index_;  // id -> index
    std::vector<LabelId> node_labels_;                     // index -> label
    std::vector<std::string> label_names_;                 // label id -> name, sorted
    std::unordered_map<std::string, LabelId> label_index_;
    std::vector<std::pair<NodeIndex, NodeIndex>> edges_;   // sorted unique
    std::vector<LabelId> edge_labels_;                     // aligned with edges_, kNoLabel = none

    // CSR adjacency and label membership.
    std::vector<std::uint32_t> out_offsets_;
    std::vector<NodeIndex> out_targets_;
    std::vector<std::uint32_t> in_offsets_;
    std::vector<NodeIndex> in_sources_;
    std::vector<std::uint32_t> label_offsets_;
    std::vector<NodeIndex> label_members_;

    void build_indexes();
};

struct QueryNodeRecord {
    std::string id;
    std::string label;
    Category category = Category::NC;
};

/// A LabeledGraph whose nodes additionally carry an investigation category.
class QueryGraph {
public:
    QueryGraph() = default;

    static QueryGraph build(std::vector<QueryNodeRecord> nodes, std::vector<EdgeRecord> edges);

    const LabeledGraph& graph() const noexcept { return graph_; }
    std::size_t node_count() const noexcept { return graph_.node_count(); }

    Category category(NodeIndex n) const { return categories_[n]; }
    std::span<const Category> categories() const noexcept { return categories_; }

    // Query nodes with category QF, ascending.
    std::span<const NodeIndex> qf_nodes() const noexcept { return qf_nodes_; }

    bool operator==(const QueryGraph& other) const {
        return graph_ == other.graph_ && categories_ == other.categories_;
    }

private:
    LabeledGraph graph_;
    std::vector<Category> categories_;
    std::vector<NodeIndex> qf_nodes_;
};

enum class MatchMode { dual, investigative };

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    std::vector<std::string> warnings;
};

// Dual mode requires a non-empty query; investigative mode additionally
// requires at least one QF node and at least one IND or RF node. Weak
// connectivity and unreachable indicators are reported as warnings.
ValidationReport validate_query(const QueryGraph& q, MatchMode mode);

}  // namespace invsim
