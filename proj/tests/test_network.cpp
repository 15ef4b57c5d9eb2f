#include <doctest.h>

#include <random>
#include <sstream>

#include "mainpath/network.hpp"
#include "mainpath/records.hpp"
#include "oracles.hpp"

using namespace mainpath;

namespace {

PublicationRecord rec(std::string id, int year, std::vector<std::string> refs) {
    PublicationRecord r;
    r.id = std::move(id);
    r.year = year;
    r.referenced_pubs = std::move(refs);
    return r;
}

std::vector<std::string> labels_of(const CitationNetwork& net, const std::vector<int>& nodes) {
    std::vector<std::string> out;
    for (int v : nodes) out.push_back(net.label(v));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("a citation becomes a knowledge-flow arc cited -> citing") {
    auto [net, report] = build_network({rec("A", 2020, {"B"}), rec("B", 2019, {})});
    REQUIRE(net.arc_count() == 1);
    CHECK(net.label(net.arc(0).tail) == "B");
    CHECK(net.label(net.arc(0).head) == "A");
    CHECK(report.isolated_works == 0);
}

TEST_CASE("transpose of the network equals the raw citing->cited relation") {
    auto records = std::vector<PublicationRecord>{
        rec("A", 2020, {"B", "C"}), rec("B", 2019, {"C"}), rec("C", 2018, {})};
    auto [net, report] = build_network(records);
    int arcs = 0;
    for (const auto& r : records)
        for (const auto& ref : r.referenced_pubs) {
            CHECK(net.has_arc(*net.find_node(ref), *net.find_node(r.id)));
            ++arcs;
        }
    CHECK(net.arc_count() == arcs);
}

TEST_CASE("five-record chain has one source and one sink") {
    auto [net, report] = build_network({rec("E", 2024, {"D"}), rec("D", 2023, {"C"}),
                                        rec("C", 2022, {"B"}), rec("B", 2021, {"A"}),
                                        rec("A", 2020, {})});
    CHECK(net.arc_count() == 4);
    CHECK(labels_of(net, sources(net)) == std::vector<std::string>{"A"});
    CHECK(labels_of(net, sinks(net)) == std::vector<std::string>{"E"});
    // the chain A->B->C->D->E exists
    for (auto [t, h] : {std::pair{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "E"}})
        CHECK(net.has_arc(*net.find_node(t), *net.find_node(h)));
}

TEST_CASE("sources and sinks on a diamond and on disjoint arcs") {
    auto [diamond, r1] = build_network({rec("S", 2018, {}), rec("a", 2019, {"S"}),
                                        rec("b", 2019, {"S"}), rec("T", 2020, {"a", "b"})});
    CHECK(labels_of(diamond, sources(diamond)) == std::vector<std::string>{"S"});
    CHECK(labels_of(diamond, sinks(diamond)) == std::vector<std::string>{"T"});

    auto [disjoint, r2] = build_network({rec("B", 2020, {"A"}), rec("A", 2019, {}),
                                         rec("D", 2020, {"C"}), rec("C", 2019, {})});
    CHECK(labels_of(disjoint, sources(disjoint)) == std::vector<std::string>{"A", "C"});
    CHECK(labels_of(disjoint, sinks(disjoint)) == std::vector<std::string>{"B", "D"});
}

TEST_CASE("unresolved, self and duplicate references are counted, isolated works excluded") {
    auto [net, report] = build_network({rec("A", 2020, {"B", "B", "A", "GHOST"}),
                                        rec("B", 2019, {}), rec("LONER", 2018, {})});
    CHECK(net.node_count() == 2);
    CHECK(net.arc_count() == 1);
    CHECK(report.unresolved_references == 1);
    CHECK(report.self_references == 1);
    CHECK(report.duplicate_references == 1);
    CHECK(report.isolated_works == 1);
    CHECK(report.isolated_ids == std::vector<std::string>{"LONER"});
}

TEST_CASE("fail mode reports an acyclic diamond unchanged") {
    auto [net, r] = build_network({rec("S", 2018, {}), rec("a", 2019, {"S"}),
                                   rec("b", 2019, {"S"}), rec("T", 2020, {"a", "b"})});
    AcyclicResult res = validate_acyclic(net, CycleMode::Fail);
    CHECK(res.report.removed.empty());
    CHECK(res.net.arc_count() == net.arc_count());
}

TEST_CASE("fail mode names one offending cycle") {
    auto [net, r] = build_network({rec("A", 2010, {"B"}), rec("B", 2012, {"A"})});
    try {
        validate_acyclic(net, CycleMode::Fail);
        FAIL("expected CycleError");
    } catch (const CycleError& e) {
        CHECK(e.cycle().size() >= 3);  // closed walk
        CHECK(e.cycle().front() == e.cycle().back());
        std::string what = e.what();
        CHECK(what.find("A") != std::string::npos);
        CHECK(what.find("B") != std::string::npos);
    }
}

TEST_CASE("break mode removes the time-anomalous arc first") {
    // A (2010) cites B (2012) -> arc B->A has head year 2010 <= tail year 2012
    auto [net, r] = build_network({rec("A", 2010, {"B"}), rec("B", 2012, {"A"})});
    AcyclicResult res = validate_acyclic(net, CycleMode::BreakCycles);
    REQUIRE(res.report.removed.size() == 1);
    CHECK(res.report.removed[0].tail == "B");
    CHECK(res.report.removed[0].head == "A");
    CHECK(res.report.removed[0].reason == "time-anomalous");
    CHECK(res.net.has_arc(*res.net.find_node("A"), *res.net.find_node("B")));
}

TEST_CASE("break mode falls back to the lexicographically smaller pair on equal years") {
    auto [net, r] = build_network({rec("A", 2010, {"B"}), rec("B", 2010, {"A"})});
    AcyclicResult res = validate_acyclic(net, CycleMode::BreakCycles);
    REQUIRE(res.report.removed.size() == 1);
    CHECK(res.report.removed[0].tail == "A");
    CHECK(res.report.removed[0].head == "B");
    CHECK(res.net.has_arc(*res.net.find_node("B"), *res.net.find_node("A")));
}

TEST_CASE("break mode arc accounting reconciles on random digraphs") {
    std::mt19937 rng(20240907);
    std::uniform_int_distribution<int> size_dist(3, 10);
    std::bernoulli_distribution edge(0.35);
    for (int trial = 0; trial < 200; ++trial) {
        int n = size_dist(rng);
        CitationNetwork net;
        for (int i = 0; i < n; ++i) net.add_node(oracles::node_name(i), 2000 + i % 4);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && edge(rng)) net.add_arc(i, j);
        net.finalize();
        AcyclicResult res = validate_acyclic(net, CycleMode::BreakCycles);
        CHECK(res.report.arcs_before ==
              res.report.arcs_after + static_cast<int>(res.report.removed.size()));
        CHECK_NOTHROW(topological_order(res.net));
    }
}

TEST_CASE("topological order respects all arcs") {
    auto [net, r] = build_network({rec("T", 2020, {"a", "b"}), rec("a", 2019, {"S"}),
                                   rec("b", 2019, {"S"}), rec("S", 2018, {})});
    auto order = topological_order(net);
    std::vector<int> position(static_cast<std::size_t>(net.node_count()));
    for (std::size_t i = 0; i < order.size(); ++i)
        position[static_cast<std::size_t>(order[i])] = static_cast<int>(i);
    for (int a = 0; a < net.arc_count(); ++a)
        CHECK(position[static_cast<std::size_t>(net.arc(a).tail)] <
              position[static_cast<std::size_t>(net.arc(a).head)]);
}
