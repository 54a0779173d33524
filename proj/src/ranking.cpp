#include "invsim/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <system_error>
#include <utility>

#include "json.hpp"

#include "invsim/errors.hpp"

namespace invsim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("failed to format number");
    return std::string(buf, end);
}

}  // namespace

bool rational_less(const Rational& a, const Rational& b) {
    using wide = unsigned __int128;
    return static_cast<wide>(a.num) * b.den < static_cast<wide>(b.num) * a.den;
}

std::vector<PersonMatch> group_results(const QueryGraph& q, const LabeledGraph& g,
                                       const InvSimResult& result) {
    (void)g;
    std::vector<PersonMatch> out;
    out.reserve(result.survivors.size());

    for (const RelevantSet& rs : result.survivors) {
        PersonMatch m;
        m.anchor = rs.anchor;
        m.relevant_size = rs.members.size();

        m.matched_query_nodes.push_back(rs.anchor.query);
        for (const Member& member : rs.members) {
            if (q.category(member.query) == Category::RF) m.has_red_flag = true;
            m.matched_query_nodes.push_back(member.query);
            for (std::size_t i = 0; i < member.witness.data_nodes.size(); ++i) {
                m.subgraph.nodes.push_back(member.witness.data_nodes[i]);
                if (i > 0) {
                    m.subgraph.edges.emplace_back(member.witness.data_nodes[i - 1],
                                                  member.witness.data_nodes[i]);
                }
            }
        }
        if (rs.members.empty()) m.subgraph.nodes.push_back(rs.anchor.data);

        auto dedup = [](auto& v) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        };
        dedup(m.matched_query_nodes);
        dedup(m.subgraph.nodes);
        dedup(m.subgraph.edges);

        const std::vector<NodeIndex> required =
            reachable_within(q, rs.anchor.query, result.hop_bound);
        m.full_match = result.dual.contains(rs.anchor.query, rs.anchor.data) &&
                       std::includes(m.matched_query_nodes.begin(), m.matched_query_nodes.end(),
                                     required.begin(), required.end());

        m.jaccard = jaccard_similarity(m, q);
        out.push_back(std::move(m));
    }
    return out;
}

Rational jaccard_similarity(const PersonMatch& m, const QueryGraph& q) {
    if (q.node_count() == 0) return Rational{0, 1};
    return Rational{m.matched_query_nodes.size(), q.node_count()};
}

std::vector<PersonMatch> rank_top_k(const std::vector<PersonMatch>& matches, std::size_t k,
                                    SecondaryKey secondary) {
    if (k == 0) throw UsageError("top-k must be at least 1");

    std::vector<PersonMatch> ranked = matches;
    std::sort(ranked.begin(), ranked.end(), [&](const PersonMatch& a, const PersonMatch& b) {
        if (a.has_red_flag != b.has_red_flag) return a.has_red_flag;
        if (secondary == SecondaryKey::relevant_size) {
            if (a.relevant_size != b.relevant_size) return a.relevant_size > b.relevant_size;
        } else {
            if (rational_less(b.jaccard, a.jaccard)) return true;
            if (rational_less(a.jaccard, b.jaccard)) return false;
        }
        if (a.anchor.data != b.anchor.data) return a.anchor.data < b.anchor.data;
        return a.anchor.query < b.anchor.query;
    });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

ReportFormat parse_report_format(const std::string& name) {
    if (name == "json") return ReportFormat::json;
    if (name == "tsv") return ReportFormat::tsv;
    throw UsageError("unknown format \"" + name + "\": expected \"json\" or \"tsv\"");
}

std::string serialize_report(const std::vector<PersonMatch>& ranked, const QueryGraph& q,
                             const LabeledGraph& g, ReportFormat format) {
    if (format == ReportFormat::json) {
        ordered_json arr = ordered_json::array();
        for (const PersonMatch& m : ranked) {
            ordered_json o;
            o["anchor"] = ordered_json{{"query", q.graph().id(m.anchor.query)},
                                       {"data", g.id(m.anchor.data)}};
            o["full_match"] = m.full_match;
            o["has_red_flag"] = m.has_red_flag;
            o["relevant_size"] = m.relevant_size;
            o["jaccard"] = m.jaccard.value();
            ordered_json matched = ordered_json::array();
            for (NodeIndex u : m.matched_query_nodes) matched.push_back(q.graph().id(u));
            o["matched_query_nodes"] = std::move(matched);
            ordered_json nodes = ordered_json::array();
            for (NodeIndex v : m.subgraph.nodes) nodes.push_back(g.id(v));
            ordered_json edges = ordered_json::array();
            for (const auto& [src, dst] : m.subgraph.edges) {
                edges.push_back(ordered_json::array({g.id(src), g.id(dst)}));
            }
            o["subgraph"] = ordered_json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
            arr.push_back(std::move(o));
        }
        return arr.dump(2) + "\n";
    }

    std::string out =
        "anchor\tfull_match\thas_red_flag\trelevant_size\tjaccard\tmatched_query_nodes\n";
    for (const PersonMatch& m : ranked) {
        out += g.id(m.anchor.data);
        out += m.full_match ? "\ttrue" : "\tfalse";
        out += m.has_red_flag ? "\ttrue" : "\tfalse";
        out += '\t';
        out += std::to_string(m.relevant_size);
        out += '\t';
        out += format_double(m.jaccard.value());
        out += '\t';
        for (std::size_t i = 0; i < m.matched_query_nodes.size(); ++i) {
            if (i > 0) out += ',';
            out += q.graph().id(m.matched_query_nodes[i]);
        }
        out += '\n';
    }
    return out;
}

}  // namespace invsim
