#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "invsim/graph.hpp"

namespace invsim {

// Node file: `id<TAB>label` per line. Edge file: `src<TAB>dst[<TAB>edge_label]`.
// Both are UTF-8; blank lines and `#`-prefixed comment lines are ignored.
// Malformed lines and edges naming unknown ids are rejected with path:line.
LabeledGraph load_graph(const std::filesystem::path& nodes_path,
                        const std::filesystem::path& edges_path);

// Writes the canonical form (nodes and edges in graph order); loading the
// result reconstructs a structurally equal graph.
void save_graph(const LabeledGraph& g, const std::filesystem::path& nodes_path,
                const std::filesystem::path& edges_path);

// Query file: {"nodes":[{"id":..,"label":..,"category":"QF|IIRA|IND|RF|NC"}],
// "edges":[["src","dst"]]}. Validation mode is the caller's choice; this only
// checks the document shape and category names.
QueryGraph load_query(const std::filesystem::path& query_path);

std::string serialize_query(const QueryGraph& q);
void save_query(const QueryGraph& q, const std::filesystem::path& query_path);

struct GraphStats {
    std::size_t total_nodes = 0;
    std::size_t total_edges = 0;
    // Sorted by label; counts sum to total_nodes.
    std::vector<std::pair<std::string, std::size_t>> nodes_by_label;
    // Sorted by (source label, target label); counts sum to total_edges.
    std::vector<std::tuple<std::string, std::string, std::size_t>> edges_by_label_pair;
};

GraphStats compute_stats(const LabeledGraph& g);

// Human-readable aligned table.
std::string stats_table(const GraphStats& stats);

// Machine-readable JSON document with stable field order.
std::string stats_json(const GraphStats& stats);

}  // namespace invsim
