#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "invsim/inv_sim.hpp"

namespace invsim {

/// Exact fraction; kept unreduced so numerator/denominator stay readable
/// (matched count over query size).
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool operator==(const Rational&) const = default;
};

// Exact comparison by cross-multiplication.
bool rational_less(const Rational& a, const Rational& b);

/// Union of a match's witness paths, in data-graph node indexes.
struct MatchSubgraph {
    std::vector<NodeIndex> nodes;                         // sorted
    std::vector<std::pair<NodeIndex, NodeIndex>> edges;   // sorted, unique

    bool operator==(const MatchSubgraph&) const = default;
};

/// One ranked result: a surviving anchor with its score components.
struct PersonMatch {
    Anchor anchor;
    bool full_match = false;     // relevant set covers every query node reachable
                                 // within the hop bound AND the anchor pair
                                 // survived dual refinement
    bool has_red_flag = false;   // some member has category RF
    std::size_t relevant_size = 0;
    std::vector<NodeIndex> matched_query_nodes;  // sorted; anchor + member query nodes
    Rational jaccard;
    MatchSubgraph subgraph;

    bool operator==(const PersonMatch&) const = default;
};

// Materializes one PersonMatch per survivor in `result`, in anchor order.
std::vector<PersonMatch> group_results(const QueryGraph& q, const LabeledGraph& g,
                                       const InvSimResult& result);

// Node-coverage similarity: |matched_query_nodes| / |V_Q|. Since the matched
// set is a subset of the query nodes, this equals the intersection-over-union
// of the two node sets.
Rational jaccard_similarity(const PersonMatch& m, const QueryGraph& q);

/// Secondary rank key (the primary key is always red-flag presence).
enum class SecondaryKey { relevant_size, jaccard };

// Total order: has_red_flag descending, then the secondary key descending,
// then anchor data node id ascending, then anchor query node id ascending.
// Returns the first k. Throws UsageError when k == 0.
std::vector<PersonMatch> rank_top_k(const std::vector<PersonMatch>& matches, std::size_t k,
                                    SecondaryKey secondary = SecondaryKey::relevant_size);

enum class ReportFormat { json, tsv };

// Throws UsageError on anything other than "json" or "tsv".
ReportFormat parse_report_format(const std::string& name);

// JSON: array of objects with fields anchor{query,data}, full_match,
// has_red_flag, relevant_size, jaccard, matched_query_nodes,
// subgraph{nodes,edges}, in that fixed order. TSV: header plus one row per
// match with the same columns except subgraph. Byte-identical for equal input.
std::string serialize_report(const std::vector<PersonMatch>& ranked, const QueryGraph& q,
                             const LabeledGraph& g, ReportFormat format);

}  // namespace invsim
