#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "invsim/dual_sim.hpp"

namespace invsim {

/// A (QF query node, data node) pair rooting one candidate result.
struct Anchor {
    NodeIndex query = 0;
    NodeIndex data = 0;

    auto operator<=>(const Anchor&) const = default;
};

/// Paired query/data node sequences of equal length; position 0 is the
/// anchor pair, the last position is the member pair. Positionwise labels
/// are equal throughout.
struct WitnessPath {
    std::vector<NodeIndex> query_nodes;
    std::vector<NodeIndex> data_nodes;

    bool operator==(const WitnessPath&) const = default;
};

struct Member {
    NodeIndex query = 0;
    NodeIndex data = 0;
    WitnessPath witness;

    bool operator==(const Member&) const = default;
};

/// All matched descendants of one anchor within the hop bound, each with one
/// shortest witness path. Members are sorted by (query, data).
struct RelevantSet {
    Anchor anchor;
    std::vector<Member> members;

    bool operator==(const RelevantSet&) const = default;

    // True when some member's query node has category IND or RF.
    bool has_indicator(const QueryGraph& q) const;
};

// Orders equal-length witness paths: lexicographically smallest data node
// sequence, then smallest query node sequence. Node index order equals id
// order, so this is the id-string tie-break.
bool witness_less(const WitnessPath& a, const WitnessPath& b);

// Members are every (u', v') such that some directed query walk u -> ... -> u'
// of length d in [1, hop_bound] is mirrored by a data walk v -> ... -> v' with
// positionwise equal labels. Mirroring is structural: it does not consult any
// match relation. Preconditions: category(u) = QF and L(u) = L(v).
RelevantSet relevant_set(const QueryGraph& q, const LabeledGraph& g, NodeIndex u, NodeIndex v,
                         std::size_t hop_bound = 2);

// Keeps the anchors whose relevant set contains at least one IND- or
// RF-category member. Survival depends only on the anchor's own relevant set,
// so decisions are evaluated against the pre-prune snapshot by construction.
std::vector<RelevantSet> prune_innocuous(const QueryGraph& q,
                                         const std::vector<RelevantSet>& candidates);

// S_InvSim: the dual-simulation relation plus, for every survivor, its anchor
// pair, its member pairs, and every interior pair of each witness path.
MatchRelation complete_partial(const QueryGraph& q, const std::vector<RelevantSet>& survivors,
                               const MatchRelation& s_d);

struct InvSimResult {
    MatchRelation relation;              // S_InvSim
    MatchRelation dual;                  // the underlying dual-simulation relation
    std::vector<RelevantSet> survivors;  // sorted by anchor
    std::size_t hop_bound = 2;           // bound the survivors were computed under
};

// Full pipeline: dual refinement, anchor enumeration over every QF-labeled
// data node (in or out of the dual relation), relevant sets, innocuous-match
// pruning, partial-match completion. Throws QueryValidationError when the
// query fails investigative validation. Relevant sets may be computed on
// `threads` workers; output is identical for any thread count.
InvSimResult investigative_match(const QueryGraph& q, const LabeledGraph& g,
                                 std::size_t hop_bound = 2, unsigned threads = 1);

// Query nodes reachable from u by directed paths of length 1..hop_bound,
// excluding u itself. Sorted ascending.
std::vector<NodeIndex> reachable_within(const QueryGraph& q, NodeIndex u, std::size_t hop_bound);

}  // namespace invsim
