#include "invsim/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "invsim/errors.hpp"

namespace invsim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), "cannot open file for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError(path.string(), "cannot open file for writing");
    return out;
}

// Splits on tabs after stripping a trailing CR; returns false for lines that
// carry no record (blank or comment).
bool split_record(std::string& line, std::vector<std::string>& fields) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') return false;
    fields.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return true;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

}  // namespace

LabeledGraph load_graph(const std::filesystem::path& nodes_path,
                        const std::filesystem::path& edges_path) {
    std::vector<NodeRecord> nodes;
    std::vector<std::string> ids;  // for endpoint checks with line context

    {
        std::ifstream in = open_input(nodes_path);
        std::string line;
        std::vector<std::string> fields;
        for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
            if (!split_record(line, fields)) continue;
            if (fields.size() != 2) {
                throw ParseError(nodes_path.string(), lineno,
                                 "expected id<TAB>label, got " + std::to_string(fields.size()) +
                                     " field(s)");
            }
            if (fields[0].empty()) throw ParseError(nodes_path.string(), lineno, "empty node id");
            if (fields[1].empty()) {
                throw ParseError(nodes_path.string(), lineno, "empty node label");
            }
            nodes.push_back(NodeRecord{fields[0], fields[1]});
            ids.push_back(fields[0]);
        }
    }
    std::sort(ids.begin(), ids.end());

    std::vector<EdgeRecord> edges;
    {
        std::ifstream in = open_input(edges_path);
        std::string line;
        std::vector<std::string> fields;
        for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
            if (!split_record(line, fields)) continue;
            if (fields.size() != 2 && fields.size() != 3) {
                throw ParseError(edges_path.string(), lineno,
                                 "expected src<TAB>dst[<TAB>edge_label], got " +
                                     std::to_string(fields.size()) + " field(s)");
            }
            for (int side = 0; side < 2; ++side) {
                if (fields[side].empty()) {
                    throw ParseError(edges_path.string(), lineno, "empty edge endpoint");
                }
                if (!std::binary_search(ids.begin(), ids.end(), fields[side])) {
                    throw ParseError(edges_path.string(), lineno,
                                     "unknown node id \"" + fields[side] + "\"");
                }
            }
            edges.push_back(
                EdgeRecord{fields[0], fields[1], fields.size() == 3 ? fields[2] : std::string()});
        }
    }

    return LabeledGraph::build(nodes, edges);
}

void save_graph(const LabeledGraph& g, const std::filesystem::path& nodes_path,
                const std::filesystem::path& edges_path) {
    {
        std::ofstream out = open_output(nodes_path);
        out << "# id\tlabel\n";
        for (NodeIndex v = 0; v < g.node_count(); ++v) {
            out << g.id(v) << '\t' << g.label(v) << '\n';
        }
        if (!out) throw ParseError(nodes_path.string(), "write failed");
    }
    {
        std::ofstream out = open_output(edges_path);
        out << "# src\tdst\tedge_label(optional)\n";
        const auto& edges = g.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            out << g.id(edges[i].first) << '\t' << g.id(edges[i].second);
            if (const std::string_view label = g.edge_label(i); !label.empty()) {
                out << '\t' << label;
            }
            out << '\n';
        }
        if (!out) throw ParseError(edges_path.string(), "write failed");
    }
}

QueryGraph load_query(const std::filesystem::path& query_path) {
    std::ifstream in = open_input(query_path);
    ordered_json doc;
    try {
        doc = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(query_path.string(), std::string("invalid JSON: ") + e.what());
    }

    const std::string path = query_path.string();
    if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array() ||
        !doc.contains("edges") || !doc["edges"].is_array()) {
        throw ParseError(path, "query document must be an object with \"nodes\" and \"edges\" arrays");
    }

    std::vector<QueryNodeRecord> nodes;
    for (const auto& n : doc["nodes"]) {
        if (!n.is_object() || !n.contains("id") || !n["id"].is_string() || !n.contains("label") ||
            !n["label"].is_string() || !n.contains("category") || !n["category"].is_string()) {
            throw ParseError(path,
                             "each query node must be {\"id\": string, \"label\": string, "
                             "\"category\": string}");
        }
        Category cat;
        try {
            cat = category_from_string(n["category"].get<std::string>());
        } catch (const Error& e) {
            throw ParseError(path, e.what());
        }
        nodes.push_back(
            QueryNodeRecord{n["id"].get<std::string>(), n["label"].get<std::string>(), cat});
    }

    std::vector<EdgeRecord> edges;
    for (const auto& e : doc["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
            throw ParseError(path, "each query edge must be a [\"src\", \"dst\"] pair");
        }
        edges.push_back(EdgeRecord{e[0].get<std::string>(), e[1].get<std::string>(), {}});
    }

    try {
        return QueryGraph::build(nodes, edges);
    } catch (const BuildError& e) {
        throw ParseError(path, e.what());
    }
}

std::string serialize_query(const QueryGraph& q) {
    ordered_json doc;
    ordered_json nodes = ordered_json::array();
    for (NodeIndex u = 0; u < q.node_count(); ++u) {
        nodes.push_back(ordered_json{{"id", q.graph().id(u)},
                                     {"label", q.graph().label(u)},
                                     {"category", to_string(q.category(u))}});
    }
    ordered_json edges = ordered_json::array();
    for (const auto& [src, dst] : q.graph().edges()) {
        edges.push_back(ordered_json::array({q.graph().id(src), q.graph().id(dst)}));
    }
    doc["nodes"] = std::move(nodes);
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

void save_query(const QueryGraph& q, const std::filesystem::path& query_path) {
    std::ofstream out = open_output(query_path);
    out << serialize_query(q);
    if (!out) throw ParseError(query_path.string(), "write failed");
}

GraphStats compute_stats(const LabeledGraph& g) {
    GraphStats stats;
    stats.total_nodes = g.node_count();
    stats.total_edges = g.edge_count();

    for (LabelId l = 0; l < g.label_count(); ++l) {
        const std::size_t count = g.nodes_with_label(l).size();
        if (count > 0) stats.nodes_by_label.emplace_back(g.label_name(l), count);
    }

    std::map<std::pair<LabelId, LabelId>, std::size_t> pair_counts;
    for (const auto& [src, dst] : g.edges()) {
        ++pair_counts[{g.label_id(src), g.label_id(dst)}];
    }
    for (const auto& [labels, count] : pair_counts) {
        stats.edges_by_label_pair.emplace_back(g.label_name(labels.first),
                                               g.label_name(labels.second), count);
    }
    return stats;
}

std::string stats_table(const GraphStats& stats) {
    std::size_t name_width = 11;  // "total nodes"
    for (const auto& [label, count] : stats.nodes_by_label) {
        name_width = std::max(name_width, label.size());
    }
    for (const auto& [src, dst, count] : stats.edges_by_label_pair) {
        name_width = std::max(name_width, src.size() + dst.size() + 4);
    }

    std::ostringstream out;
    auto row = [&](const std::string& name, std::size_t count, int indent) {
        out << std::string(indent, ' ') << name
            << std::string(name_width - name.size() + 2 + (2 - indent), ' ') << count << '\n';
    };
    row("total nodes", stats.total_nodes, 0);
    row("total edges", stats.total_edges, 0);
    out << "nodes by label\n";
    for (const auto& [label, count] : stats.nodes_by_label) row(label, count, 2);
    out << "edges by label pair\n";
    for (const auto& [src, dst, count] : stats.edges_by_label_pair) {
        row(src + " -> " + dst, count, 2);
    }
    return out.str();
}

std::string stats_json(const GraphStats& stats) {
    ordered_json doc;
    doc["total_nodes"] = stats.total_nodes;
    doc["total_edges"] = stats.total_edges;
    ordered_json by_label = ordered_json::object();
    for (const auto& [label, count] : stats.nodes_by_label) by_label[label] = count;
    doc["nodes_by_label"] = std::move(by_label);
    ordered_json pairs = ordered_json::array();
    for (const auto& [src, dst, count] : stats.edges_by_label_pair) {
        pairs.push_back(ordered_json{{"src", src}, {"dst", dst}, {"count", count}});
    }
    doc["edges_by_label_pair"] = std::move(pairs);
    return doc.dump(2) + "\n";
}

}  // namespace invsim
