#include "invsim/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <map>
#include <unordered_set>
#include <utility>

#include "json.hpp"

#include "invsim/errors.hpp"

namespace invsim::oracle {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr std::size_t kGuardQueryNodes = 8;
constexpr std::size_t kGuardDataNodes = 64;
constexpr std::size_t kMaxLayerCount = 9'999'999;  // ids are zero-padded to 7 digits

std::string pad7(std::size_t n) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%07zu", n);
    return std::string(buf);
}

std::string noise_id(std::size_t k) { return "noise_" + pad7(k); }

}  // namespace

std::uint64_t RandomSource::below(std::uint64_t n) {
    if (n == 0) throw PreconditionError("random draw from an empty range");
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    while (true) {
        const std::uint64_t x = engine_();
        if (x >= threshold) return x % n;
    }
}

bool RandomSource::chance(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    const double r = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return r < p;
}

MatchRelation naive_dual_sim(const QueryGraph& q, const LabeledGraph& g, std::uint64_t seed) {
    const std::size_t qn = q.node_count();
    const std::size_t gn = g.node_count();
    if (qn > kGuardQueryNodes || gn > kGuardDataNodes) {
        throw PreconditionError("naive_dual_sim size guard: needs |V_Q| <= 8 and |V_G| <= 64");
    }

    // Candidates and adjacency are rebuilt here from first principles (label
    // strings and the raw edge list) rather than through the engine's indexes.
    std::vector<std::vector<char>> cand(qn, std::vector<char>(gn, 0));
    for (NodeIndex u = 0; u < qn; ++u) {
        for (NodeIndex v = 0; v < gn; ++v) {
            if (q.graph().label(u) == g.label(v)) cand[u][v] = 1;
        }
    }
    std::vector<std::vector<char>> adj(gn, std::vector<char>(gn, 0));
    for (const auto& [s, d] : g.edges()) adj[s][d] = 1;
    const auto& qedges = q.graph().edges();

    const auto violates = [&](NodeIndex u, NodeIndex v) {
        for (const auto& [a, b] : qedges) {
            if (a == u) {
                bool ok = false;
                for (NodeIndex vc = 0; vc < gn && !ok; ++vc) ok = adj[v][vc] && cand[b][vc];
                if (!ok) return true;
            }
            if (b == u) {
                bool ok = false;
                for (NodeIndex vp = 0; vp < gn && !ok; ++vp) ok = adj[vp][v] && cand[a][vp];
                if (!ok) return true;
            }
        }
        return false;
    };

    RandomSource rng(seed);
    while (true) {
        std::vector<std::pair<NodeIndex, NodeIndex>> violating;
        for (NodeIndex u = 0; u < qn; ++u) {
            for (NodeIndex v = 0; v < gn; ++v) {
                if (cand[u][v] && violates(u, v)) violating.emplace_back(u, v);
            }
        }
        if (violating.empty()) break;
        const auto [u, v] = violating[rng.index(violating.size())];
        cand[u][v] = 0;
    }

    MatchRelation rel(qn);
    for (NodeIndex u = 0; u < qn; ++u) {
        std::vector<NodeIndex> row;
        for (NodeIndex v = 0; v < gn; ++v) {
            if (cand[u][v]) row.push_back(v);
        }
        if (row.empty()) return MatchRelation(qn);  // one empty set empties everything
        rel.set_matches(u, std::move(row));
    }
    return rel;
}

namespace {

// Every directed walk of 1..hop edges starting at `start`, grouped by edge
// count; each walk is its node sequence (length = edges + 1).
std::vector<std::vector<std::vector<NodeIndex>>> walks_from(
    const std::vector<std::vector<NodeIndex>>& succ, NodeIndex start, std::size_t hop) {
    std::vector<std::vector<std::vector<NodeIndex>>> by_len(hop + 1);
    std::vector<NodeIndex> cur{start};
    const auto dfs = [&](const auto& self) -> void {
        for (NodeIndex next : succ[cur.back()]) {
            cur.push_back(next);
            by_len[cur.size() - 1].push_back(cur);
            if (cur.size() - 1 < hop) self(self);
            cur.pop_back();
        }
    };
    dfs(dfs);
    return by_len;
}

}  // namespace

std::vector<RelevantSet> exhaustive_partial_search(const QueryGraph& q, const LabeledGraph& g,
                                                   std::size_t hop_bound, SizeGuard guard) {
    if (hop_bound < 1) throw PreconditionError("hop bound must be at least 1");
    const std::size_t qn = q.node_count();
    const std::size_t gn = g.node_count();
    if (guard == SizeGuard::enforce && (qn > kGuardQueryNodes || gn > kGuardDataNodes)) {
        throw PreconditionError(
            "exhaustive_partial_search size guard: needs |V_Q| <= 8 and |V_G| <= 64 "
            "(bypass it for explicit large runs)");
    }

    // Local adjacency from the raw edge lists.
    std::vector<std::vector<NodeIndex>> qsucc(qn), gsucc(gn);
    for (const auto& [a, b] : q.graph().edges()) qsucc[a].push_back(b);
    for (const auto& [s, d] : g.edges()) gsucc[s].push_back(d);

    const auto seq_less = [](const WitnessPath& a, const WitnessPath& b) {
        if (a.data_nodes != b.data_nodes) return a.data_nodes < b.data_nodes;
        return a.query_nodes < b.query_nodes;
    };

    std::vector<RelevantSet> survivors;
    for (NodeIndex u = 0; u < qn; ++u) {
        if (q.category(u) != Category::QF) continue;
        const auto qwalks = walks_from(qsucc, u, hop_bound);
        for (NodeIndex v = 0; v < gn; ++v) {
            if (g.label(v) != q.graph().label(u)) continue;
            const auto gwalks = walks_from(gsucc, v, hop_bound);

            // member pair -> minimal witness; walk lengths ascend, so the
            // first length that produces a pair is its shortest.
            std::map<std::pair<NodeIndex, NodeIndex>, WitnessPath> best;
            for (std::size_t len = 1; len <= hop_bound; ++len) {
                for (const auto& qw : qwalks[len]) {
                    if (qw.back() == u) continue;  // never a member of its own set
                    for (const auto& dw : gwalks[len]) {
                        bool mirror = true;
                        for (std::size_t i = 0; i <= len && mirror; ++i) {
                            mirror = q.graph().label(qw[i]) == g.label(dw[i]);
                        }
                        if (!mirror) continue;
                        const std::pair<NodeIndex, NodeIndex> key{qw.back(), dw.back()};
                        WitnessPath cand{qw, dw};
                        auto it = best.find(key);
                        if (it == best.end()) {
                            best.emplace(key, std::move(cand));
                        } else if (it->second.query_nodes.size() == len + 1 &&
                                   seq_less(cand, it->second)) {
                            it->second = std::move(cand);
                        }
                    }
                }
            }

            bool has_indicator = false;
            for (const auto& [key, path] : best) {
                const Category c = q.category(key.first);
                if (c == Category::IND || c == Category::RF) {
                    has_indicator = true;
                    break;
                }
            }
            if (!has_indicator) continue;

            RelevantSet rs;
            rs.anchor = Anchor{u, v};
            for (auto& [key, path] : best) {
                rs.members.push_back(Member{key.first, key.second, std::move(path)});
            }
            survivors.push_back(std::move(rs));
        }
    }
    return survivors;  // u then v ascending = sorted by anchor
}

void validate_genspec(const GenSpec& spec) {
    const auto fail = [](const std::string& msg) { throw ParseError("genspec: " + msg); };

    if (spec.hop_bound < 1) fail("hop_bound must be at least 1");
    if (spec.layers.empty()) fail("layers must be non-empty");
    if (spec.tags.empty()) fail("tags must be non-empty");
    if (spec.tags.size() > 60) fail("at most 60 tags are supported");

    std::unordered_set<std::string> labels;
    std::size_t qf_layers = 0;
    bool has_indicator = false;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& layer = spec.layers[i];
        if (layer.label.empty()) fail("layer " + std::to_string(i) + " has an empty label");
        if (layer.label == "friend" || layer.label.starts_with("noise_")) {
            fail("layer label \"" + layer.label + "\" is reserved");
        }
        if (!labels.insert(layer.label).second) {
            fail("duplicate label \"" + layer.label + "\"");
        }
        if (layer.count > kMaxLayerCount) fail("layer \"" + layer.label + "\" count too large");
        if (layer.category == Category::QF) ++qf_layers;
        if (layer.category == Category::IND || layer.category == Category::RF) {
            has_indicator = true;
        }
        if (layer.one_per_parent) {
            if (i == 0) fail("the first layer cannot set one_per_parent");
            if (layer.count > spec.layers[i - 1].count) {
                fail("layer \"" + layer.label + "\" sets one_per_parent but outnumbers its parent layer");
            }
        }
        if (i > 0 && layer.count > 0 && spec.layers[i - 1].count == 0) {
            fail("layer \"" + layer.label + "\" has nodes but its parent layer is empty");
        }
    }
    if (qf_layers != 1) fail("exactly one layer must have category QF");

    for (const TagSpec& tag : spec.tags) {
        if (tag.label.empty()) fail("a tag has an empty label");
        if (tag.label == "friend" || tag.label.starts_with("noise_")) {
            fail("tag label \"" + tag.label + "\" is reserved");
        }
        if (!labels.insert(tag.label).second) fail("duplicate label \"" + tag.label + "\"");
        if (tag.category == Category::QF) fail("tag \"" + tag.label + "\" cannot have category QF");
        if (tag.category == Category::IND || tag.category == Category::RF) has_indicator = true;
        if (!(tag.attach_prob >= 0.0 && tag.attach_prob <= 1.0)) {
            fail("tag \"" + tag.label + "\" attach_prob must be within [0, 1]");
        }
    }
    if (!has_indicator) fail("at least one layer or tag must have category IND or RF");

    if (spec.noise_tags > kMaxLayerCount) fail("noise_tags too large");
    if (spec.planted_full > 0) {
        for (const LayerSpec& layer : spec.layers) {
            if (spec.planted_full > layer.count) {
                fail("planted_full exceeds the count of layer \"" + layer.label + "\"");
            }
        }
    }
    if (spec.friend_edges > 0) {
        const std::size_t n0 = spec.layers.front().count;
        if (n0 < 2) fail("friend_edges requires at least 2 first-layer nodes");
        if (spec.friend_edges > n0 * (n0 - 1)) {
            fail("friend_edges exceeds the number of distinct ordered first-layer pairs");
        }
    }
}

GeneratedInstance generate_graph(const GenSpec& spec) {
    validate_genspec(spec);
    RandomSource rng(spec.seed);

    const std::size_t nlayers = spec.layers.size();
    const std::size_t last = nlayers - 1;
    const std::size_t ntags = spec.tags.size();
    const std::size_t planted = spec.planted_full;
    const std::size_t last_count = spec.layers[last].count;

    std::vector<std::vector<std::string>> ids(nlayers);
    for (std::size_t i = 0; i < nlayers; ++i) {
        ids[i].reserve(spec.layers[i].count);
        for (std::size_t j = 0; j < spec.layers[i].count; ++j) {
            ids[i].push_back(spec.layers[i].label + "_" + pad7(j));
        }
    }

    // Draw order is fixed: layer parents, tag attachments, noise top-up,
    // friend edges. Planted structures take the first indexes of every layer
    // and consume no randomness, so plants never shift the stream.
    std::vector<std::vector<std::uint32_t>> parent(nlayers);
    for (std::size_t i = 1; i < nlayers; ++i) {
        const std::size_t cnt = spec.layers[i].count;
        const std::size_t pcnt = spec.layers[i - 1].count;
        parent[i].resize(cnt);
        for (std::size_t j = 0; j < std::min(planted, cnt); ++j) {
            parent[i][j] = static_cast<std::uint32_t>(j);
        }
        if (spec.layers[i].one_per_parent) {
            std::vector<std::uint32_t> avail;
            for (std::size_t k = planted; k < pcnt; ++k) {
                avail.push_back(static_cast<std::uint32_t>(k));
            }
            for (std::size_t j = planted; j < cnt; ++j) {
                const std::size_t pick = rng.index(avail.size());
                parent[i][j] = avail[pick];
                avail[pick] = avail.back();
                avail.pop_back();
            }
        } else {
            for (std::size_t j = planted; j < cnt; ++j) {
                parent[i][j] = static_cast<std::uint32_t>(rng.below(pcnt));
            }
        }
    }

    const std::uint64_t full_mask = (std::uint64_t{1} << ntags) - 1;
    std::vector<std::uint64_t> tagmask(last_count, 0);
    for (std::size_t j = 0; j < std::min(planted, last_count); ++j) tagmask[j] = full_mask;
    for (std::size_t j = planted; j < last_count; ++j) {
        for (std::size_t t = 0; t < ntags; ++t) {
            if (rng.chance(spec.tags[t].attach_prob)) tagmask[j] |= std::uint64_t{1} << t;
        }
    }
    // Suppression: an unplanted node that drew the complete tag set loses its
    // last-tag edge, so the nodes carrying every tag are exactly the planted
    // ones — which is what makes the planted anchors exactly the full matches.
    for (std::size_t j = planted; j < last_count; ++j) {
        if (tagmask[j] == full_mask) tagmask[j] &= ~(std::uint64_t{1} << (ntags - 1));
    }

    std::size_t drawn = 0;
    for (const std::uint64_t mask : tagmask) drawn += std::popcount(mask);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> noise_edges;
    if (spec.attachment_edges) {
        if (*spec.attachment_edges < drawn) {
            throw ParseError("genspec: attachment_edges (" +
                             std::to_string(*spec.attachment_edges) +
                             ") is smaller than the drawn tag attachments (" +
                             std::to_string(drawn) + ")");
        }
        const std::size_t need = *spec.attachment_edges - drawn;
        if (need > 0) {
            if (last_count == 0 || spec.noise_tags == 0 ||
                need > last_count * spec.noise_tags) {
                throw ParseError(
                    "genspec: attachment_edges top-up does not fit the available "
                    "last-layer x noise_tags pairs");
            }
            std::unordered_set<std::uint64_t> used;
            noise_edges.reserve(need);
            while (noise_edges.size() < need) {
                const auto a = static_cast<std::uint32_t>(rng.below(last_count));
                const auto b = static_cast<std::uint32_t>(rng.below(spec.noise_tags));
                if (used.insert((std::uint64_t{a} << 32) | b).second) {
                    noise_edges.emplace_back(a, b);
                }
            }
        }
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> friend_pairs;
    if (spec.friend_edges > 0) {
        const std::size_t n0 = spec.layers.front().count;
        std::unordered_set<std::uint64_t> used;
        friend_pairs.reserve(spec.friend_edges);
        while (friend_pairs.size() < spec.friend_edges) {
            const auto a = static_cast<std::uint32_t>(rng.below(n0));
            const auto b = static_cast<std::uint32_t>(rng.below(n0));
            if (a == b) continue;
            if (used.insert((std::uint64_t{a} << 32) | b).second) {
                friend_pairs.emplace_back(a, b);
            }
        }
    }

    std::vector<NodeRecord> nodes;
    for (std::size_t i = 0; i < nlayers; ++i) {
        for (const std::string& id : ids[i]) nodes.push_back(NodeRecord{id, spec.layers[i].label});
    }
    for (const TagSpec& tag : spec.tags) nodes.push_back(NodeRecord{tag.label, tag.label});
    for (std::size_t k = 0; k < spec.noise_tags; ++k) {
        nodes.push_back(NodeRecord{noise_id(k), noise_id(k)});
    }
    {
        std::unordered_set<std::string> seen;
        seen.reserve(nodes.size());
        for (const NodeRecord& n : nodes) {
            if (!seen.insert(n.id).second) {
                throw ParseError("genspec: generated node id collision on \"" + n.id + "\"");
            }
        }
    }

    std::vector<EdgeRecord> edges;
    for (std::size_t i = 1; i < nlayers; ++i) {
        for (std::size_t j = 0; j < spec.layers[i].count; ++j) {
            edges.push_back(EdgeRecord{ids[i - 1][parent[i][j]], ids[i][j], {}});
        }
    }
    for (std::size_t j = 0; j < last_count; ++j) {
        for (std::size_t t = 0; t < ntags; ++t) {
            if (tagmask[j] & (std::uint64_t{1} << t)) {
                edges.push_back(EdgeRecord{ids[last][j], spec.tags[t].label, {}});
            }
        }
    }
    for (const auto& [a, b] : noise_edges) {
        edges.push_back(EdgeRecord{ids[last][a], noise_id(b), {}});
    }
    for (const auto& [a, b] : friend_pairs) {
        edges.push_back(EdgeRecord{ids[0][a], ids[0][b], "friend"});
    }

    GeneratedInstance instance;
    instance.graph = LabeledGraph::build(std::move(nodes), std::move(edges));

    std::vector<QueryNodeRecord> qnodes;
    for (const LayerSpec& layer : spec.layers) {
        qnodes.push_back(QueryNodeRecord{layer.label, layer.label, layer.category});
    }
    for (const TagSpec& tag : spec.tags) {
        qnodes.push_back(QueryNodeRecord{tag.label, tag.label, tag.category});
    }
    std::vector<EdgeRecord> qedges;
    for (std::size_t i = 1; i < nlayers; ++i) {
        qedges.push_back(EdgeRecord{spec.layers[i - 1].label, spec.layers[i].label, {}});
    }
    for (const TagSpec& tag : spec.tags) {
        qedges.push_back(EdgeRecord{spec.layers[last].label, tag.label, {}});
    }
    instance.query = QueryGraph::build(std::move(qnodes), std::move(qedges));

    // Ground truth straight from the bookkeeping above. Each instance node has
    // one parent, so the subgraph under any anchor is a tree: paths to layer
    // descendants are unique, and only shared tag nodes need a minimum taken
    // over the attaching descendants.
    std::vector<std::vector<std::vector<std::uint32_t>>> children(nlayers);
    for (std::size_t i = 1; i < nlayers; ++i) {
        children[i - 1].assign(spec.layers[i - 1].count, {});
        for (std::size_t j = 0; j < spec.layers[i].count; ++j) {
            children[i - 1][parent[i][j]].push_back(static_cast<std::uint32_t>(j));
        }
    }

    std::size_t qf = 0;
    while (spec.layers[qf].category != Category::QF) ++qf;
    const std::size_t tag_depth = (last - qf) + 1;

    GroundTruth& truth = instance.truth;
    truth.hop_bound = spec.hop_bound;
    truth.qf_query_node = spec.layers[qf].label;
    truth.summary_only = spec.summary_truth;
    truth.anchor_count = spec.layers[qf].count;

    struct DescNode {
        std::uint32_t idx;
        std::vector<std::uint32_t> path;  // layer indexes from the anchor down
    };

    for (std::size_t a = 0; a < spec.layers[qf].count; ++a) {
        TruthAnchor ta;
        ta.query_id = spec.layers[qf].label;
        ta.data_id = ids[qf][a];

        bool survivor = false;
        const auto note_category = [&](Category c) {
            if (c == Category::RF) ta.has_red_flag = true;
            if (c == Category::IND || c == Category::RF) survivor = true;
        };
        const auto witness_for = [&](const std::vector<std::uint32_t>& path) {
            TruthMember m;
            for (std::size_t d = 0; d < path.size(); ++d) {
                m.witness_query.push_back(spec.layers[qf + d].label);
                m.witness_data.push_back(ids[qf + d][path[d]]);
            }
            return m;
        };

        std::vector<DescNode> current{{static_cast<std::uint32_t>(a), {static_cast<std::uint32_t>(a)}}};
        std::vector<DescNode> last_layer_desc;
        if (qf == last) last_layer_desc = current;
        for (std::size_t d = 1; d <= spec.hop_bound; ++d) {
            const std::size_t li = qf + d;
            if (li > last) break;
            std::vector<DescNode> next;
            for (const DescNode& dn : current) {
                for (const std::uint32_t c : children[li - 1][dn.idx]) {
                    DescNode child{c, dn.path};
                    child.path.push_back(c);
                    TruthMember m = witness_for(child.path);
                    m.query_id = spec.layers[li].label;
                    m.data_id = ids[li][c];
                    ta.members.push_back(std::move(m));
                    note_category(spec.layers[li].category);
                    next.push_back(std::move(child));
                }
            }
            if (li == last) last_layer_desc = next;
            current = std::move(next);
        }

        if (tag_depth <= spec.hop_bound && !last_layer_desc.empty()) {
            for (std::size_t t = 0; t < ntags; ++t) {
                const DescNode* best = nullptr;
                for (const DescNode& dn : last_layer_desc) {
                    if (!(tagmask[dn.idx] & (std::uint64_t{1} << t))) continue;
                    if (best == nullptr || dn.path < best->path) best = &dn;
                }
                if (best == nullptr) continue;
                TruthMember m = witness_for(best->path);
                m.query_id = spec.tags[t].label;
                m.data_id = spec.tags[t].label;
                m.witness_query.push_back(spec.tags[t].label);
                m.witness_data.push_back(spec.tags[t].label);
                ta.members.push_back(std::move(m));
                note_category(spec.tags[t].category);
            }
        }

        std::sort(ta.members.begin(), ta.members.end(),
                  [](const TruthMember& x, const TruthMember& y) {
                      return std::tie(x.query_id, x.data_id) < std::tie(y.query_id, y.data_id);
                  });

        // A planted anchor is a reported full match only when it survives
        // innocuous pruning: with the query's IND/RF nodes all out of hop
        // range, even a complete plant is never reported.
        ta.full_match = a < planted && survivor;

        if (survivor) ++truth.survivor_count;
        truth.member_pair_total += ta.members.size();
        if (ta.full_match) truth.full_match_ids.push_back(ta.data_id);
        if (!truth.summary_only) truth.anchors.push_back(std::move(ta));
    }

    return instance;
}

namespace {

std::uint64_t require_uint(const ordered_json& v, const std::string& key, const std::string& path) {
    if (!v.is_number_unsigned()) {
        throw ParseError(path, "genspec field \"" + key + "\" must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string require_string(const ordered_json& v, const std::string& key, const std::string& path) {
    if (!v.is_string()) throw ParseError(path, "genspec field \"" + key + "\" must be a string");
    return v.get<std::string>();
}

Category require_category(const ordered_json& v, const std::string& key, const std::string& path) {
    try {
        return category_from_string(require_string(v, key, path));
    } catch (const ParseError& e) {
        throw ParseError(path, e.what());
    }
}

GenSpec parse_genspec(const ordered_json& doc, const std::string& path) {
    if (!doc.is_object()) throw ParseError(path, "genspec must be a JSON object");
    GenSpec spec;
    for (const auto& [key, value] : doc.items()) {
        if (key == "seed") {
            spec.seed = require_uint(value, key, path);
        } else if (key == "hop_bound") {
            spec.hop_bound = require_uint(value, key, path);
        } else if (key == "layers") {
            if (!value.is_array()) throw ParseError(path, "genspec \"layers\" must be an array");
            for (const auto& item : value) {
                if (!item.is_object()) {
                    throw ParseError(path, "each genspec layer must be an object");
                }
                LayerSpec layer;
                for (const auto& [lk, lv] : item.items()) {
                    if (lk == "label") {
                        layer.label = require_string(lv, "layers.label", path);
                    } else if (lk == "category") {
                        layer.category = require_category(lv, "layers.category", path);
                    } else if (lk == "count") {
                        layer.count = require_uint(lv, "layers.count", path);
                    } else if (lk == "one_per_parent") {
                        if (!lv.is_boolean()) {
                            throw ParseError(path, "genspec layers.one_per_parent must be a boolean");
                        }
                        layer.one_per_parent = lv.get<bool>();
                    } else {
                        throw ParseError(path, "unknown genspec layer key \"" + lk + "\"");
                    }
                }
                spec.layers.push_back(std::move(layer));
            }
        } else if (key == "tags") {
            if (!value.is_array()) throw ParseError(path, "genspec \"tags\" must be an array");
            for (const auto& item : value) {
                if (!item.is_object()) throw ParseError(path, "each genspec tag must be an object");
                TagSpec tag;
                for (const auto& [tk, tv] : item.items()) {
                    if (tk == "label") {
                        tag.label = require_string(tv, "tags.label", path);
                    } else if (tk == "category") {
                        tag.category = require_category(tv, "tags.category", path);
                    } else if (tk == "attach_prob") {
                        if (!tv.is_number()) {
                            throw ParseError(path, "genspec tags.attach_prob must be a number");
                        }
                        tag.attach_prob = tv.get<double>();
                    } else {
                        throw ParseError(path, "unknown genspec tag key \"" + tk + "\"");
                    }
                }
                spec.tags.push_back(std::move(tag));
            }
        } else if (key == "noise_tags") {
            spec.noise_tags = require_uint(value, key, path);
        } else if (key == "attachment_edges") {
            spec.attachment_edges = require_uint(value, key, path);
        } else if (key == "friend_edges") {
            spec.friend_edges = require_uint(value, key, path);
        } else if (key == "planted_full") {
            spec.planted_full = require_uint(value, key, path);
        } else if (key == "ground_truth") {
            const std::string mode = require_string(value, key, path);
            if (mode == "summary") {
                spec.summary_truth = true;
            } else if (mode == "full") {
                spec.summary_truth = false;
            } else {
                throw ParseError(path, "genspec ground_truth must be \"full\" or \"summary\"");
            }
        } else {
            throw ParseError(path, "unknown genspec key \"" + key + "\"");
        }
    }
    return spec;
}

}  // namespace

GenSpec load_genspec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), "cannot open file for reading");
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string(), std::string("invalid JSON: ") + e.what());
    }
    GenSpec spec = parse_genspec(doc, path.string());
    validate_genspec(spec);
    return spec;
}

std::string serialize_genspec(const GenSpec& spec) {
    ordered_json doc;
    doc["seed"] = spec.seed;
    doc["hop_bound"] = spec.hop_bound;
    ordered_json layers = ordered_json::array();
    for (const LayerSpec& layer : spec.layers) {
        ordered_json l;
        l["label"] = layer.label;
        l["category"] = to_string(layer.category);
        l["count"] = layer.count;
        if (layer.one_per_parent) l["one_per_parent"] = true;
        layers.push_back(std::move(l));
    }
    doc["layers"] = std::move(layers);
    ordered_json tags = ordered_json::array();
    for (const TagSpec& tag : spec.tags) {
        tags.push_back(ordered_json{{"label", tag.label},
                                    {"category", to_string(tag.category)},
                                    {"attach_prob", tag.attach_prob}});
    }
    doc["tags"] = std::move(tags);
    doc["noise_tags"] = spec.noise_tags;
    if (spec.attachment_edges) doc["attachment_edges"] = *spec.attachment_edges;
    doc["friend_edges"] = spec.friend_edges;
    doc["planted_full"] = spec.planted_full;
    doc["ground_truth"] = spec.summary_truth ? "summary" : "full";
    return doc.dump(2) + "\n";
}

void save_genspec(const GenSpec& spec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path.string(), "cannot open file for writing");
    out << serialize_genspec(spec);
    if (!out) throw ParseError(path.string(), "write failed");
}

std::string serialize_ground_truth(const GroundTruth& truth) {
    ordered_json doc;
    doc["hop_bound"] = truth.hop_bound;
    doc["qf_query_node"] = truth.qf_query_node;
    doc["mode"] = truth.summary_only ? "summary" : "full";
    doc["anchor_count"] = truth.anchor_count;
    doc["survivor_count"] = truth.survivor_count;
    doc["member_pair_total"] = truth.member_pair_total;
    doc["full_match_ids"] = truth.full_match_ids;
    if (!truth.summary_only) {
        ordered_json anchors = ordered_json::array();
        for (const TruthAnchor& ta : truth.anchors) {
            ordered_json a;
            a["query_id"] = ta.query_id;
            a["data_id"] = ta.data_id;
            a["full_match"] = ta.full_match;
            a["has_red_flag"] = ta.has_red_flag;
            ordered_json members = ordered_json::array();
            for (const TruthMember& m : ta.members) {
                members.push_back(ordered_json{{"query_id", m.query_id},
                                               {"data_id", m.data_id},
                                               {"witness_query", m.witness_query},
                                               {"witness_data", m.witness_data}});
            }
            a["members"] = std::move(members);
            anchors.push_back(std::move(a));
        }
        doc["anchors"] = std::move(anchors);
    }
    return doc.dump(2) + "\n";
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path.string(), "cannot open file for writing");
    out << serialize_ground_truth(truth);
    if (!out) throw ParseError(path.string(), "write failed");
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), "cannot open file for reading");
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string(), std::string("invalid JSON: ") + e.what());
    }
    const std::string p = path.string();
    GroundTruth truth;
    try {
        truth.hop_bound = doc.at("hop_bound").get<std::size_t>();
        truth.qf_query_node = doc.at("qf_query_node").get<std::string>();
        truth.summary_only = doc.at("mode").get<std::string>() == "summary";
        truth.anchor_count = doc.at("anchor_count").get<std::size_t>();
        truth.survivor_count = doc.at("survivor_count").get<std::size_t>();
        truth.member_pair_total = doc.at("member_pair_total").get<std::size_t>();
        truth.full_match_ids = doc.at("full_match_ids").get<std::vector<std::string>>();
        if (!truth.summary_only) {
            for (const auto& a : doc.at("anchors")) {
                TruthAnchor ta;
                ta.query_id = a.at("query_id").get<std::string>();
                ta.data_id = a.at("data_id").get<std::string>();
                ta.full_match = a.at("full_match").get<bool>();
                ta.has_red_flag = a.at("has_red_flag").get<bool>();
                for (const auto& m : a.at("members")) {
                    TruthMember tm;
                    tm.query_id = m.at("query_id").get<std::string>();
                    tm.data_id = m.at("data_id").get<std::string>();
                    tm.witness_query = m.at("witness_query").get<std::vector<std::string>>();
                    tm.witness_data = m.at("witness_data").get<std::vector<std::string>>();
                    ta.members.push_back(std::move(tm));
                }
                truth.anchors.push_back(std::move(ta));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(p, std::string("ground truth document malformed: ") + e.what());
    }
    return truth;
}

}  // namespace invsim::oracle
