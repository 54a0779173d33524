#pragma once

// The 17-node worked example used across the suites: four persons with
// accounts, content tags, travel, training, and firearm nodes, plus the
// 7-node investigation query that matches them. Mirrors data/hve-toy.*.

#include <vector>

#include "invsim/graph.hpp"

namespace test_util {

inline std::vector<invsim::NodeRecord> toy_nodes() {
    return {
        {"P1", "person"},          {"P2", "person"},        {"P3", "person"},
        {"P4", "person"},          {"B1", "account"},       {"B2", "account"},
        {"B3", "account"},         {"B4", "account"},       {"D1-1", "extremist-ngram"},
        {"D1-2", "extremist-ngram"}, {"D3", "extremist-ngram"}, {"C3", "radical-ngram"},
        {"C4", "radical-ngram"},   {"E3", "travel"},        {"F3", "training"},
        {"G2", "firearm"},         {"G3", "firearm"},
    };
}

inline std::vector<invsim::EdgeRecord> toy_edges() {
    return {
        {"P1", "B1", ""}, {"B1", "D1-1", ""}, {"B1", "D1-2", ""}, {"P2", "B2", ""},
        {"P2", "G2", ""}, {"P3", "B3", ""},   {"B3", "C3", ""},   {"B3", "D3", ""},
        {"P3", "E3", ""}, {"E3", "F3", ""},   {"P3", "G3", ""},   {"P4", "B4", ""},
        {"B4", "C4", ""},
    };
}

inline invsim::LabeledGraph toy_graph() {
    return invsim::LabeledGraph::build(toy_nodes(), toy_edges());
}

inline invsim::QueryGraph toy_query() {
    using invsim::Category;
    std::vector<invsim::QueryNodeRecord> nodes{
        {"A", "person", Category::QF},          {"B", "account", Category::IIRA},
        {"C", "radical-ngram", Category::IND},  {"D", "extremist-ngram", Category::IND},
        {"E", "travel", Category::IND},         {"F", "training", Category::RF},
        {"G", "firearm", Category::IIRA},
    };
    std::vector<invsim::EdgeRecord> edges{
        {"A", "B", ""}, {"B", "C", ""}, {"B", "D", ""},
        {"A", "E", ""}, {"E", "F", ""}, {"A", "G", ""},
    };
    return invsim::QueryGraph::build(std::move(nodes), std::move(edges));
}

}  // namespace test_util
