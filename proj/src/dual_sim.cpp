#include "invsim/dual_sim.hpp"

#include <algorithm>

namespace invsim {

void MatchRelation::set_matches(NodeIndex u, std::vector<NodeIndex> vs) {
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    sim_[u] = std::move(vs);
}

void MatchRelation::insert(NodeIndex u, NodeIndex v) {
    auto& row = sim_[u];
    auto it = std::lower_bound(row.begin(), row.end(), v);
    if (it == row.end() || *it != v) row.insert(it, v);
}

bool MatchRelation::contains(NodeIndex u, NodeIndex v) const {
    const auto& row = sim_[u];
    return std::binary_search(row.begin(), row.end(), v);
}

bool MatchRelation::empty() const noexcept {
    for (const auto& row : sim_) {
        if (!row.empty()) return false;
    }
    return true;
}

std::size_t MatchRelation::pair_count() const noexcept {
    std::size_t n = 0;
    for (const auto& row : sim_) n += row.size();
    return n;
}

void MatchRelation::clear_all() noexcept {
    for (auto& row : sim_) row.clear();
}

std::vector<std::pair<NodeIndex, NodeIndex>> MatchRelation::pairs() const {
    std::vector<std::pair<NodeIndex, NodeIndex>> out;
    out.reserve(pair_count());
    for (NodeIndex u = 0; u < sim_.size(); ++u) {
        for (NodeIndex v : sim_[u]) out.emplace_back(u, v);
    }
    return out;
}

MatchRelation initial_candidates(const QueryGraph& q, const LabeledGraph& g) {
    MatchRelation rel(q.node_count());
    for (NodeIndex u = 0; u < q.node_count(); ++u) {
        auto candidates = g.nodes_with_label(q.graph().label(u));
        rel.set_matches(u, std::vector<NodeIndex>(candidates.begin(), candidates.end()));
    }
    return rel;
}

MatchRelation dual_refine(const QueryGraph& q, const LabeledGraph& g, DualSimStats* stats) {
    const std::size_t qn = q.node_count();
    MatchRelation rel = initial_candidates(q, g);
    if (stats) *stats = {};

    // Membership masks, one per query node, for O(1) candidate tests while
    // scanning data adjacency.
    std::vector<std::vector<std::uint8_t>> in_sim(qn);
    for (NodeIndex u = 0; u < qn; ++u) {
        in_sim[u].assign(g.node_count(), 0);
        for (NodeIndex v : rel.matches(u)) in_sim[u][v] = 1;
    }

    std::vector<NodeIndex> keep;
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeIndex u = 0; u < qn; ++u) {
            auto q_succ = q.graph().successors(u);
            auto q_pred = q.graph().predecessors(u);
            keep.clear();
            for (NodeIndex v : rel.matches(u)) {
                bool ok = true;
                for (NodeIndex uc : q_succ) {
                    bool witnessed = false;
                    for (NodeIndex vc : g.successors(v)) {
                        if (in_sim[uc][vc]) {
                            witnessed = true;
                            break;
                        }
                    }
                    if (!witnessed) {
                        ok = false;
                        break;
                    }
                }
                if (ok) {
                    for (NodeIndex up : q_pred) {
                        bool witnessed = false;
                        for (NodeIndex vp : g.predecessors(v)) {
                            if (in_sim[up][vp]) {
                                witnessed = true;
                                break;
                            }
                        }
                        if (!witnessed) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (ok) {
                    keep.push_back(v);
                } else {
                    in_sim[u][v] = 0;
                    changed = true;
                    if (stats) ++stats->removed_pairs;
                }
            }
            if (keep.size() != rel.matches(u).size()) {
                rel.set_matches(u, keep);
            }
            if (rel.matches(u).empty()) {
                // One empty candidate set collapses the whole relation; the
                // wiped pairs count as removed so the ledger balances against
                // the initial candidates.
                if (stats) stats->removed_pairs += rel.pair_count();
                rel.clear_all();
                if (stats && changed) ++stats->iterations;
                return rel;
            }
        }
        if (stats && changed) ++stats->iterations;
    }
    return rel;
}

}  // namespace invsim
