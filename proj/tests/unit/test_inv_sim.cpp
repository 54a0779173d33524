#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"

#include "common/instances.hpp"
#include "common/toy.hpp"
#include "invsim/errors.hpp"
#include "invsim/inv_sim.hpp"
#include "invsim/oracle.hpp"

using namespace invsim;

namespace {

// (member query id, member data id, witness data ids joined by '>') triples
// for readable comparisons.
std::vector<std::tuple<std::string, std::string, std::string>> named_members(
    const RelevantSet& rs, const QueryGraph& q, const LabeledGraph& g) {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const Member& m : rs.members) {
        std::string path;
        for (NodeIndex v : m.witness.data_nodes) {
            if (!path.empty()) path += '>';
            path += g.id(v);
        }
        out.emplace_back(q.graph().id(m.query), g.id(m.data), path);
    }
    return out;
}

RelevantSet toy_relevant(const std::string& person, std::size_t hop = 2) {
    QueryGraph q = test_util::toy_query();
    LabeledGraph g = test_util::toy_graph();
    return relevant_set(q, g, q.graph().find("A").value(), g.find(person).value(), hop);
}

}  // namespace

TEST_CASE("toy relevant sets match the worked example") {
    QueryGraph q = test_util::toy_query();
    LabeledGraph g = test_util::toy_graph();

    using T = std::tuple<std::string, std::string, std::string>;

    RelevantSet p3 = toy_relevant("P3");
    CHECK(named_members(p3, q, g) ==
          std::vector<T>{{"B", "B3", "P3>B3"},
                         {"C", "C3", "P3>B3>C3"},
                         {"D", "D3", "P3>B3>D3"},
                         {"E", "E3", "P3>E3"},
                         {"F", "F3", "P3>E3>F3"},
                         {"G", "G3", "P3>G3"}});
    CHECK(p3.has_indicator(q));

    RelevantSet p1 = toy_relevant("P1");
    CHECK(named_members(p1, q, g) == std::vector<T>{{"B", "B1", "P1>B1"},
                                                    {"D", "D1-1", "P1>B1>D1-1"},
                                                    {"D", "D1-2", "P1>B1>D1-2"}});
    CHECK(p1.has_indicator(q));

    RelevantSet p2 = toy_relevant("P2");
    CHECK(named_members(p2, q, g) ==
          std::vector<T>{{"B", "B2", "P2>B2"}, {"G", "G2", "P2>G2"}});
    CHECK_FALSE(p2.has_indicator(q));  // only IIRA members: innocuous

    RelevantSet p4 = toy_relevant("P4");
    CHECK(named_members(p4, q, g) ==
          std::vector<T>{{"B", "B4", "P4>B4"}, {"C", "C4", "P4>B4>C4"}});
    CHECK(p4.has_indicator(q));
}

TEST_CASE("hop bound 1 keeps only direct neighbors") {
    QueryGraph q = test_util::toy_query();
    LabeledGraph g = test_util::toy_graph();
    RelevantSet p3 = toy_relevant("P3", 1);
    using T = std::tuple<std::string, std::string, std::string>;
    CHECK(named_members(p3, q, g) ==
          std::vector<T>{{"B", "B3", "P3>B3"}, {"E", "E3", "P3>E3"}, {"G", "G3", "P3>G3"}});
}

TEST_CASE("relevant_set rejects calls outside its preconditions") {
    QueryGraph q = test_util::toy_query();
    LabeledGraph g = test_util::toy_graph();
    NodeIndex a = q.graph().find("A").value();
    NodeIndex b = q.graph().find("B").value();
    NodeIndex p1 = g.find("P1").value();
    NodeIndex b1 = g.find("B1").value();

    CHECK_THROWS_WITH_AS(relevant_set(q, g, a, p1, 0),
                         doctest::Contains("hop bound must be at least 1"), PreconditionError);
    CHECK_THROWS_WITH_AS(relevant_set(q, g, b, b1, 2), doctest::Contains("category QF"),
                         PreconditionError);
    CHECK_THROWS_WITH_AS(relevant_set(q, g, a, b1, 2), doctest::Contains("mismatched labels"),
                         PreconditionError);
    CHECK_THROWS_AS(relevant_set(q, g, 99, p1, 2), PreconditionError);
    CHECK_THROWS_AS(relevant_set(q, g, a, 99, 2), PreconditionError);
}

TEST_CASE("witness prefers the shortest walk") {
    QueryGraph q = QueryGraph::build({{"A", "person", Category::QF},
                                      {"B", "account", Category::IIRA},
                                      {"C", "ngram", Category::IND}},
                                     {{"A", "B", ""}, {"A", "C", ""}, {"B", "C", ""}});
    LabeledGraph g = LabeledGraph::build(
        {{"p", "person"}, {"a1", "account"}, {"n1", "ngram"}},
        {{"p", "a1", ""}, {"p", "n1", ""}, {"a1", "n1", ""}});
    RelevantSet rs = relevant_set(q, g, q.graph().find("A").value(), g.find("p").value(), 2);
    using T = std::tuple<std::string, std::string, std::string>;
    CHECK(named_members(rs, q, g) ==
          std::vector<T>{{"B", "a1", "p>a1"}, {"C", "n1", "p>n1"}});
}

TEST_CASE("equal-depth witnesses tie-break on the data sequence") {
    QueryGraph q = QueryGraph::build({{"A", "person", Category::QF},
                                      {"B", "account", Category::IIRA},
                                      {"C", "ngram", Category::IND}},
                                     {{"A", "B", ""}, {"B", "C", ""}});
    LabeledGraph g = LabeledGraph::build(
        {{"p", "person"}, {"a1", "account"}, {"a2", "account"}, {"n1", "ngram"}},
        {{"p", "a1", ""}, {"p", "a2", ""}, {"a1", "n1", ""}, {"a2", "n1", ""}});
    RelevantSet rs = relevant_set(q, g, q.graph().find("A").value(), g.find("p").value(), 2);
    using T = std::tuple<std::string, std::string, std::string>;
    CHECK(named_members(rs, q, g) == std::vector<T>{{"B", "a1", "p>a1"},
                                                    {"B", "a2", "p>a2"},
                                                    {"C", "n1", "p>a1>n1"}});
}

TEST_CASE("equal data sequences tie-break on the query sequence") {
    // Two query walks (through B or through D) mirror the same data walk.
    QueryGraph q = QueryGraph::build({{"A", "person", Category::QF},
                                      {"B", "account", Category::IIRA},
                                      {"D", "account", Category::IIRA},
                                      {"C", "ngram", Category::IND}},
                                     {{"A", "B", ""}, {"A", "D", ""}, {"B", "C", ""},
                                      {"D", "C", ""}});
    LabeledGraph g = LabeledGraph::build(
        {{"p", "person"}, {"a1", "account"}, {"n1", "ngram"}},
        {{"p", "a1", ""}, {"a1", "n1", ""}});
    RelevantSet rs = relevant_set(q, g, q.graph().find("A").value(), g.find("p").value(), 2);
    REQUIRE(rs.members.size() == 3);  // (B,a1), (D,a1), (C,n1)
    const Member& c = rs.members[1];  // members sorted by query: B < C < D
    CHECK(q.graph().id(c.query) == "C");
    std::vector<std::string> qids;
    for (NodeIndex u : c.witness.query_nodes) qids.push_back(q.graph().id(u));
    CHECK(qids == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("walks may pass through pairs sharing the anchor query node") {
    QueryGraph q = QueryGraph::build(
        {{"A", "person", Category::QF}, {"N", "ngram", Category::IND}},
        {{"A", "A", ""}, {"A", "N", ""}});
    LabeledGraph g = LabeledGraph::build(
        {{"p1", "person"}, {"p2", "person"}, {"n", "ngram"}},
        {{"p1", "p2", ""}, {"p2", "n", ""}});
    RelevantSet rs = relevant_set(q, g, q.graph().find("A").value(), g.find("p1").value(), 2);
    using T = std::tuple<std::string, std::string, std::string>;
    // (A,p2) is traversed but never reported as a member; (N,n) is reached
    // through it via the query self-loop.
    CHECK(named_members(rs, q, g) == std::vector<T>{{"N", "n", "p1>p2>n"}});

    // The traversed interior pair must surface in the completion.
    MatchRelation s_d(q.node_count());
    MatchRelation completed = complete_partial(q, {rs}, s_d);
    CHECK(completed.contains(q.graph().find("A").value(), g.find("p2").value()));
}

TEST_CASE("prune_innocuous keeps exactly the sets with IND or RF members") {
    QueryGraph q = test_util::toy_query();
    LabeledGraph g = test_util::toy_graph();
    std::vector<RelevantSet> candidates{toy_relevant("P1"), toy_relevant("P2"),
                                        toy_relevant("P3"), toy_relevant("P4")};
    std::vector<RelevantSet> survivors = prune_innocuous(q, candidates);
    REQUIRE(survivors.size() == 3);
    CHECK(g.id(survivors[0].anchor.data) == "P1");
    CHECK(g.id(survivors[1].anchor.data) == "P3");
    CHECK(g.id(survivors[2].anchor.data) == "P4");

    CHECK(prune_innocuous(q, {}).empty());

    // NC members count as innocuous exactly like IIRA ones.
    QueryGraph nc_query = QueryGraph::build({{"A", "person", Category::QF},
                                             {"B", "account", Category::NC},
                                             {"C", "ngram", Category::IND}},
                                            {{"A", "B", ""}, {"B", "C", ""}});
    LabeledGraph nc_graph = LabeledGraph::build({{"p", "person"}, {"a", "account"}},
                                                {{"p", "a", ""}});
    RelevantSet only_nc = relevant_set(nc_query, nc_graph, nc_query.graph().find("A").value(),
                                       nc_graph.find("p").value(), 2);
    CHECK(only_nc.members.size() == 1);
    CHECK(prune_innocuous(nc_query, {only_nc}).empty());
}

TEST_CASE("complete_partial unions dual pairs, anchors, and witness pairs") {
    QueryGraph q = test_util::toy_query();
    LabeledGraph g = test_util::toy_graph();
    MatchRelation dual = dual_refine(q, g);
    std::vector<RelevantSet> survivors =
        prune_innocuous(q, {toy_relevant("P1"), toy_relevant("P2"), toy_relevant("P3"),
                            toy_relevant("P4")});
    MatchRelation completed = complete_partial(q, survivors, dual);

    CHECK(completed.pair_count() == 14);
    for (const auto& [u, v] : dual.pairs()) CHECK(completed.contains(u, v));

    NodeIndex a = q.graph().find("A").value();
    CHECK(completed.contains(a, g.find("P1").value()));
    CHECK(completed.contains(a, g.find("P4").value()));
    CHECK_FALSE(completed.contains(a, g.find("P2").value()));
    CHECK(completed.contains(q.graph().find("D").value(), g.find("D1-1").value()));
    CHECK(completed.contains(q.graph().find("B").value(), g.find("B4").value()));
    CHECK_FALSE(completed.contains(q.graph().find("G").value(), g.find("G2").value()));
}

TEST_CASE("investigative_match runs the whole pipeline on the toy instance") {
    QueryGraph q = test_util::toy_query();
    LabeledGraph g = test_util::toy_graph();
    InvSimResult r = investigative_match(q, g);

    CHECK(r.hop_bound == 2);
    CHECK(r.dual == dual_refine(q, g));
    REQUIRE(r.survivors.size() == 3);
    CHECK(g.id(r.survivors[0].anchor.data) == "P1");
    CHECK(g.id(r.survivors[1].anchor.data) == "P3");
    CHECK(g.id(r.survivors[2].anchor.data) == "P4");
    CHECK(r.relation.pair_count() == 14);
    CHECK(test_util::invsim_invariants_hold(q, g, r));

    // None of P2's witness nodes belongs to the completed relation.
    for (const char* id : {"P2", "B2", "G2"}) {
        NodeIndex v = g.find(id).value();
        for (NodeIndex u = 0; u < q.node_count(); ++u) {
            CHECK_FALSE(r.relation.contains(u, v));
        }
    }
}

TEST_CASE("investigative_match rejects queries that fail validation") {
    LabeledGraph g = test_util::toy_graph();
    QueryGraph no_indicator = QueryGraph::build({{"A", "person", Category::QF}}, {});
    CHECK_THROWS_WITH_AS(investigative_match(no_indicator, g),
                         doctest::Contains("no IND/RF node"), QueryValidationError);

    QueryGraph q = test_util::toy_query();
    CHECK_THROWS_WITH_AS(investigative_match(q, g, 0),
                         doctest::Contains("hop bound must be at least 1"), PreconditionError);
}

TEST_CASE("results are identical for any worker count") {
    QueryGraph q = test_util::toy_query();
    LabeledGraph g = test_util::toy_graph();
    InvSimResult base = investigative_match(q, g, 2, 1);
    for (unsigned threads : {2u, 3u, 8u}) {
        InvSimResult r = investigative_match(q, g, 2, threads);
        CHECK(r.relation == base.relation);
        CHECK(r.dual == base.dual);
        CHECK(r.survivors == base.survivors);
    }

    oracle::RandomSource rng(31);
    for (int round = 0; round < 20; ++round) {
        QueryGraph rq = test_util::random_query(rng);
        LabeledGraph rg = test_util::random_graph(rng);
        InvSimResult single = investigative_match(rq, rg, 2, 1);
        InvSimResult pooled = investigative_match(rq, rg, 2, 4);
        CHECK(single.relation == pooled.relation);
        CHECK(single.survivors == pooled.survivors);
    }
}

TEST_CASE("reachable_within walks forward only, excluding the start node") {
    QueryGraph q = test_util::toy_query();
    auto names = [&](const std::vector<NodeIndex>& xs) {
        std::vector<std::string> out;
        for (NodeIndex x : xs) out.push_back(q.graph().id(x));
        return out;
    };
    NodeIndex a = q.graph().find("A").value();
    CHECK(names(reachable_within(q, a, 1)) == std::vector<std::string>{"B", "E", "G"});
    CHECK(names(reachable_within(q, a, 2)) ==
          std::vector<std::string>{"B", "C", "D", "E", "F", "G"});
    CHECK(names(reachable_within(q, a, 5)) ==
          std::vector<std::string>{"B", "C", "D", "E", "F", "G"});
    CHECK(reachable_within(q, q.graph().find("F").value(), 3).empty());

    QueryGraph looped = QueryGraph::build(
        {{"A", "person", Category::QF}, {"N", "ngram", Category::IND}},
        {{"A", "A", ""}, {"A", "N", ""}});
    NodeIndex la = looped.graph().find("A").value();
    CHECK(names(reachable_within(looped, la, 3)).size() == 1);  // N only, never A itself
}

TEST_CASE("engine and exhaustive reference agree on random instances") {
    oracle::RandomSource rng(424242);
    std::size_t with_survivors = 0;
    for (int round = 0; round < 100; ++round) {
        QueryGraph q = test_util::random_query(rng);
        LabeledGraph g = test_util::random_graph(rng);
        const std::size_t hop = 1 + rng.index(2);

        InvSimResult engine = investigative_match(q, g, hop);
        std::vector<RelevantSet> reference = oracle::exhaustive_partial_search(q, g, hop);
        CHECK(engine.survivors == reference);
        CHECK(test_util::invsim_invariants_hold(q, g, engine));
        if (!engine.survivors.empty()) ++with_survivors;
    }
    CHECK(with_survivors > 5);
}
