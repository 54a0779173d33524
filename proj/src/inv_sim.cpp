#include "invsim/inv_sim.hpp"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "invsim/errors.hpp"

namespace invsim {

namespace {

std::uint64_t pair_key(NodeIndex q, NodeIndex d) {
    return (static_cast<std::uint64_t>(q) << 32) | d;
}

// Label of each query node translated into the data graph's label table;
// kNoLabel when the data graph never uses that label.
std::vector<LabelId> query_labels_in(const QueryGraph& q, const LabeledGraph& g) {
    std::vector<LabelId> out(q.node_count(), kNoLabel);
    for (NodeIndex u = 0; u < q.node_count(); ++u) {
        if (auto id = g.find_label(q.graph().label(u))) out[u] = *id;
    }
    return out;
}

struct FrontierPair {
    NodeIndex query = 0;
    NodeIndex data = 0;
    WitnessPath path;
};

}  // namespace

bool RelevantSet::has_indicator(const QueryGraph& q) const {
    return std::any_of(members.begin(), members.end(), [&](const Member& m) {
        Category c = q.category(m.query);
        return c == Category::IND || c == Category::RF;
    });
}

bool witness_less(const WitnessPath& a, const WitnessPath& b) {
    if (a.data_nodes != b.data_nodes) {
        return std::lexicographical_compare(a.data_nodes.begin(), a.data_nodes.end(),
                                            b.data_nodes.begin(), b.data_nodes.end());
    }
    return std::lexicographical_compare(a.query_nodes.begin(), a.query_nodes.end(),
                                        b.query_nodes.begin(), b.query_nodes.end());
}

RelevantSet relevant_set(const QueryGraph& q, const LabeledGraph& g, NodeIndex u, NodeIndex v,
                         std::size_t hop_bound) {
    if (hop_bound < 1) throw PreconditionError("hop bound must be at least 1");
    if (u >= q.node_count()) {
        throw PreconditionError("anchor query node index " + std::to_string(u) + " out of range");
    }
    if (v >= g.node_count()) {
        throw PreconditionError("anchor data node index " + std::to_string(v) + " out of range");
    }
    if (q.category(u) != Category::QF) {
        throw PreconditionError("anchor query node \"" + std::string(q.graph().id(u)) +
                                "\" does not have category QF");
    }
    if (q.graph().label(u) != g.label(v)) {
        throw PreconditionError("anchor pair (\"" + std::string(q.graph().id(u)) + "\", \"" +
                                std::string(g.id(v)) + "\") has mismatched labels");
    }

    const std::vector<LabelId> qlab = query_labels_in(q, g);

    RelevantSet rs;
    rs.anchor = Anchor{u, v};

    // Layered BFS over (query, data) pairs. A pair is finalised at the first
    // depth it is reached; among that depth's arrivals the smallest witness is
    // kept. Predecessor paths are final before the next layer expands, so the
    // kept witness is the minimum over all shortest mirrored walks.
    std::unordered_set<std::uint64_t> seen;
    seen.insert(pair_key(u, v));

    std::vector<FrontierPair> frontier;
    frontier.push_back(FrontierPair{u, v, WitnessPath{{u}, {v}}});

    for (std::size_t depth = 1; depth <= hop_bound && !frontier.empty(); ++depth) {
        std::unordered_map<std::uint64_t, WitnessPath> best;
        for (const FrontierPair& p : frontier) {
            for (NodeIndex uc : q.graph().successors(p.query)) {
                const LabelId want = qlab[uc];
                if (want == kNoLabel) continue;
                for (NodeIndex vc : g.successors(p.data)) {
                    if (g.label_id(vc) != want) continue;
                    const std::uint64_t key = pair_key(uc, vc);
                    if (seen.contains(key)) continue;  // reached at a shorter depth
                    WitnessPath cand = p.path;
                    cand.query_nodes.push_back(uc);
                    cand.data_nodes.push_back(vc);
                    auto it = best.find(key);
                    if (it == best.end()) {
                        best.emplace(key, std::move(cand));
                    } else if (witness_less(cand, it->second)) {
                        it->second = std::move(cand);
                    }
                }
            }
        }

        frontier.clear();
        frontier.reserve(best.size());
        for (auto& [key, path] : best) {
            seen.insert(key);
            const NodeIndex uq = path.query_nodes.back();
            const NodeIndex vd = path.data_nodes.back();
            frontier.push_back(FrontierPair{uq, vd, std::move(path)});
        }
        // Map order is unspecified; restore a canonical frontier order.
        std::sort(frontier.begin(), frontier.end(), [](const FrontierPair& a, const FrontierPair& b) {
            return std::tie(a.query, a.data) < std::tie(b.query, b.data);
        });
        for (const FrontierPair& p : frontier) {
            if (p.query == u) continue;  // the anchor pair is not its own member
            rs.members.push_back(Member{p.query, p.data, p.path});
        }
    }

    std::sort(rs.members.begin(), rs.members.end(), [](const Member& a, const Member& b) {
        return std::tie(a.query, a.data) < std::tie(b.query, b.data);
    });
    return rs;
}

std::vector<RelevantSet> prune_innocuous(const QueryGraph& q,
                                         const std::vector<RelevantSet>& candidates) {
    std::vector<RelevantSet> survivors;
    for (const RelevantSet& rs : candidates) {
        if (rs.has_indicator(q)) survivors.push_back(rs);
    }
    return survivors;
}

MatchRelation complete_partial(const QueryGraph& q, const std::vector<RelevantSet>& survivors,
                               const MatchRelation& s_d) {
    std::vector<std::vector<NodeIndex>> extra(q.node_count());
    for (const RelevantSet& rs : survivors) {
        extra[rs.anchor.query].push_back(rs.anchor.data);
        for (const Member& m : rs.members) {
            // Positions 1..end cover every interior pair and the member itself.
            for (std::size_t i = 1; i < m.witness.query_nodes.size(); ++i) {
                extra[m.witness.query_nodes[i]].push_back(m.witness.data_nodes[i]);
            }
        }
    }

    MatchRelation out(q.node_count());
    std::vector<NodeIndex> merged;
    for (NodeIndex u = 0; u < q.node_count(); ++u) {
        auto base = s_d.matches(u);
        merged.assign(base.begin(), base.end());
        merged.insert(merged.end(), extra[u].begin(), extra[u].end());
        out.set_matches(u, merged);  // sorts and deduplicates
    }
    return out;
}

InvSimResult investigative_match(const QueryGraph& q, const LabeledGraph& g,
                                 std::size_t hop_bound, unsigned threads) {
    const ValidationReport report = validate_query(q, MatchMode::investigative);
    if (!report.ok) {
        std::string msg = "query is not valid for investigative matching:";
        for (const std::string& violation : report.violations) msg += "\n  " + violation;
        throw QueryValidationError(msg);
    }
    if (hop_bound < 1) throw PreconditionError("hop bound must be at least 1");

    InvSimResult result;
    result.hop_bound = hop_bound;
    result.dual = dual_refine(q, g);

    // Anchor candidates are all label-compatible data nodes, whether or not
    // dual refinement kept them: partially matched anchors are the point.
    std::vector<Anchor> anchors;
    for (NodeIndex u : q.qf_nodes()) {
        for (NodeIndex v : g.nodes_with_label(q.graph().label(u))) {
            anchors.push_back(Anchor{u, v});
        }
    }
    std::sort(anchors.begin(), anchors.end());

    std::vector<RelevantSet> sets(anchors.size());
    const auto compute = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            sets[i] = relevant_set(q, g, anchors[i].query, anchors[i].data, hop_bound);
        }
    };

    const std::size_t n = anchors.size();
    if (threads <= 1 || n < 2) {
        compute(0, n);
    } else {
        const std::size_t workers = std::min<std::size_t>(threads, n);
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = n * w / workers;
            const std::size_t end = n * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                try {
                    compute(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    result.survivors = prune_innocuous(q, sets);
    result.relation = complete_partial(q, result.survivors, result.dual);
    return result;
}

std::vector<NodeIndex> reachable_within(const QueryGraph& q, NodeIndex u, std::size_t hop_bound) {
    std::vector<std::uint8_t> visited(q.node_count(), 0);
    std::vector<NodeIndex> frontier{u};
    std::vector<NodeIndex> out;
    for (std::size_t depth = 1; depth <= hop_bound && !frontier.empty(); ++depth) {
        std::vector<NodeIndex> next;
        for (NodeIndex x : frontier) {
            for (NodeIndex y : q.graph().successors(x)) {
                if (y == u || visited[y]) continue;
                visited[y] = 1;
                next.push_back(y);
                out.push_back(y);
            }
        }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace invsim
