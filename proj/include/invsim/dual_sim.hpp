#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "invsim/graph.hpp"

namespace invsim {

/// Per-query-node candidate sets; equivalently the pair set
/// {(u, v) | v in matches(u)}. Candidate lists are sorted and unique.
class MatchRelation {
public:
    MatchRelation() = default;
    explicit MatchRelation(std::size_t query_node_count) : sim_(query_node_count) {}

    std::size_t query_node_count() const noexcept { return sim_.size(); }

    std::span<const NodeIndex> matches(NodeIndex u) const { return sim_[u]; }

    // Takes ownership; sorts and dedupes.
    void set_matches(NodeIndex u, std::vector<NodeIndex> vs);
    void insert(NodeIndex u, NodeIndex v);
    bool contains(NodeIndex u, NodeIndex v) const;

    // True when the relation holds no pairs at all.
    bool empty() const noexcept;
    std::size_t pair_count() const noexcept;
    void clear_all() noexcept;

    std::vector<std::pair<NodeIndex, NodeIndex>> pairs() const;

    bool operator==(const MatchRelation& other) const = default;

private:
    std::vector<std::vector<NodeIndex>> sim_;
};

struct DualSimStats {
    std::size_t iterations = 0;     // refinement passes that removed something
    std::size_t removed_pairs = 0;
};

// sim(u) = every data node whose label equals u's label, before any edge
// conditions are applied.
MatchRelation initial_candidates(const QueryGraph& q, const LabeledGraph& g);

// Maximum dual-simulation relation: label-compatible candidates refined until
// every retained pair has, for each query edge, a matching successor and
// predecessor. If any candidate set empties, the whole relation collapses to
// empty. The fixpoint is unique, so the result is independent of schedule.
MatchRelation dual_refine(const QueryGraph& q, const LabeledGraph& g,
                          DualSimStats* stats = nullptr);

}  // namespace invsim
