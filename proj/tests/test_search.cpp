#include <doctest.h>

#include <random>

#include "mainpath/search.hpp"
#include "oracles.hpp"

using namespace mainpath;
using oracles::make_weighted;

namespace {

bool same_arcs(const TrajectoryPath& a, const TrajectoryPath& b) { return a.arcs == b.arcs; }

// Every maximal walk inside the path must start at a parent source and end
// at a parent sink.
void check_walk_endpoints(const TrajectoryPath& path, const WeightedNetwork& parent) {
    for (const auto& node : path.nodes) {
        bool has_in = false, has_out = false;
        for (const auto& [t, h] : path.arcs) {
            if (h == node) has_in = true;
            if (t == node) has_out = true;
        }
        int v = *parent.net.find_node(node);
        if (!has_in) CHECK(parent.net.in_degree(v) == 0);
        if (!has_out) CHECK(parent.net.out_degree(v) == 0);
    }
    for (const auto& [t, h] : path.arcs) {
        CHECK(parent.net.has_arc(*parent.net.find_node(t), *parent.net.find_node(h)));
    }
}

}  // namespace

TEST_CASE("forward search follows a chain end to end") {
    auto wnet = make_weighted({"A", "B", "C"}, {{"A", "B", 3.0}, {"B", "C", 1.0}});
    auto path = forward_search(wnet);
    CHECK(path.nodes == std::vector<std::string>{"A", "B", "C"});
    CHECK(path.arcs.size() == 2);
    CHECK(path.total_weight == 4.0);
    CHECK(path.label() == "SPC FW");
}

TEST_CASE("forward search tolerance: weak branch pruned, near branch kept") {
    auto diamond = [](double sb) {
        return make_weighted({"S", "a", "b", "T"},
                             {{"S", "a", 5.0}, {"S", "b", sb}, {"a", "T", 1.0}, {"b", "T", 1.0}});
    };
    auto pruned = forward_search(diamond(1.0), {0.1, true});
    CHECK(pruned.arcs == std::vector<std::pair<std::string, std::string>>{{"S", "a"}, {"a", "T"}});

    auto kept = forward_search(diamond(4.6), {0.1, true});
    CHECK(kept.arcs.size() == 4);  // 4.6 >= 0.9 * 5
}

TEST_CASE("zero tolerance keeps only maximal arcs, ties still branch") {
    auto strict = forward_search(
        make_weighted({"S", "a", "b", "T"},
                      {{"S", "a", 5.0}, {"S", "b", 4.999}, {"a", "T", 1.0}, {"b", "T", 1.0}}),
        {0.0, true});
    CHECK(strict.arcs == std::vector<std::pair<std::string, std::string>>{{"S", "a"}, {"a", "T"}});

    auto tied = forward_search(
        make_weighted({"S", "a", "b", "T"},
                      {{"S", "a", 5.0}, {"S", "b", 5.0}, {"a", "T", 1.0}, {"b", "T", 1.0}}),
        {0.0, true});
    CHECK(tied.arcs.size() == 4);
}

TEST_CASE("backward search mirrors forward on the transposed weights") {
    auto wnet = make_weighted({"S", "a", "b", "T"},
                              {{"S", "a", 1.0}, {"S", "b", 1.0}, {"a", "T", 5.0}, {"b", "T", 1.0}});
    auto path = backward_search(wnet, {0.1, true});
    CHECK(path.arcs == std::vector<std::pair<std::string, std::string>>{{"S", "a"}, {"a", "T"}});
    CHECK(path.label() == "SPC BW");
}

TEST_CASE("forward and backward coincide on a weight-symmetric diamond") {
    auto wnet = make_weighted({"S", "a", "b", "T"},
                              {{"S", "a", 2.0}, {"S", "b", 2.0}, {"a", "T", 2.0}, {"b", "T", 2.0}});
    CHECK(same_arcs(forward_search(wnet), backward_search(wnet)));
}

TEST_CASE("critical path picks the heavier branch and keeps ties") {
    auto wnet = make_weighted({"S", "a", "b", "T"},
                              {{"S", "a", 5.0}, {"S", "b", 1.0}, {"a", "T", 1.0}, {"b", "T", 1.0}});
    auto path = critical_path(wnet);
    CHECK(path.arcs == std::vector<std::pair<std::string, std::string>>{{"S", "a"}, {"a", "T"}});
    CHECK(path.total_weight == 6.0);

    auto tied = make_weighted({"S", "a", "b", "T"},
                              {{"S", "a", 3.0}, {"S", "b", 3.0}, {"a", "T", 3.0}, {"b", "T", 3.0}});
    CHECK(critical_path(tied).arcs.size() == 4);
}

TEST_CASE("critical path equals the brute-force optimum union on random dags") {
    std::mt19937 rng(31337);
    int done = 0;
    while (done < 300) {
        CitationNetwork net = oracles::random_dag(rng, 10, 0.3);
        if (net.arc_count() == 0) continue;
        ++done;
        auto wnet = oracles::with_random_integer_weights(std::move(net), rng);
        auto path = critical_path(wnet);
        auto [expected_arcs, best] = oracles::brute_force_critical(wnet);
        std::set<std::pair<std::string, std::string>> expected;
        for (int a : expected_arcs)
            expected.emplace(wnet.net.label(wnet.net.arc(a).tail), wnet.net.label(wnet.net.arc(a).head));
        std::set<std::pair<std::string, std::string>> got(path.arcs.begin(), path.arcs.end());
        REQUIRE(got == expected);
    }
}

TEST_CASE("key routes: maximum arc, clamping, lexicographic tie-break") {
    auto wnet = make_weighted({"A", "B", "C", "D"},
                              {{"A", "B", 3.0}, {"B", "C", 3.0}, {"C", "D", 1.0}});
    auto top1 = key_routes(wnet, 1);
    REQUIRE(top1.size() == 1);
    CHECK(wnet.net.label(wnet.net.arc(top1[0]).tail) == "A");  // (A,B) < (B,C)

    auto all = key_routes(wnet, 99);
    REQUIRE(all.size() == 3);
    CHECK(wnet.net.label(wnet.net.arc(all[0]).tail) == "A");
    CHECK(wnet.net.label(wnet.net.arc(all[1]).tail) == "B");
    CHECK(wnet.net.label(wnet.net.arc(all[2]).tail) == "C");

    CHECK_THROWS_AS(key_routes(wnet, 0), InputError);
}

TEST_CASE("key-route local on a single arc returns that arc") {
    auto wnet = make_weighted({"S", "T"}, {{"S", "T", 7.0}});
    auto path = key_route_search_local(wnet, 1);
    CHECK(path.arcs == std::vector<std::pair<std::string, std::string>>{{"S", "T"}});
    CHECK(path.label() == "SPC KR");
}

TEST_CASE("key-route local traces a mid-chain maximum out to both ends") {
    auto wnet = make_weighted({"A", "B", "C", "D"},
                              {{"A", "B", 1.0}, {"B", "C", 9.0}, {"C", "D", 1.0}});
    auto path = key_route_search_local(wnet, 1);
    CHECK(path.arcs.size() == 3);
    CHECK(path.nodes == std::vector<std::string>{"A", "B", "C", "D"});
}

TEST_CASE("key-route results contain all k key-route arcs") {
    std::mt19937 rng(555);
    int done = 0;
    while (done < 100) {
        CitationNetwork net = oracles::random_dag(rng, 10, 0.35);
        if (net.arc_count() == 0) continue;
        ++done;
        auto wnet = oracles::with_random_integer_weights(std::move(net), rng);
        for (int k : {1, 3, 10}) {
            auto routes = key_routes(wnet, k);
            for (const TrajectoryPath& path :
                 {key_route_search_local(wnet, k), key_route_search_global(wnet, k)}) {
                for (int a : routes)
                    CHECK(path.contains_arc(wnet.net.label(wnet.net.arc(a).tail),
                                            wnet.net.label(wnet.net.arc(a).head)));
            }
        }
    }
}

TEST_CASE("key-route local and global differ when greedy is shortsighted") {
    // From M the heaviest arc leads into a light tail; the heavier total goes
    // through B.
    auto wnet = make_weighted({"S", "M", "A", "B", "T"},
                              {{"S", "M", 100.0},
                               {"M", "A", 3.0},
                               {"M", "B", 2.5},
                               {"A", "T", 0.5},
                               {"B", "T", 10.0}});
    auto local = key_route_search_local(wnet, 1, {0.1, true});
    auto global = key_route_search_global(wnet, 1);
    CHECK(local.contains_node("A"));
    CHECK_FALSE(local.contains_node("B"));
    CHECK(global.contains_node("B"));
    CHECK_FALSE(global.contains_node("A"));
    CHECK_FALSE(same_arcs(local, global));
}

TEST_CASE("key-route local and global coincide when every continuation is forced") {
    std::mt19937 rng(808);
    auto wnet = oracles::with_random_integer_weights(
        [] {
            CitationNetwork net;
            for (int i = 0; i < 6; ++i) net.add_node(oracles::node_name(i));
            for (int i = 0; i + 1 < 6; ++i) net.add_arc(i, i + 1);
            net.finalize();
            return net;
        }(),
        rng);
    auto local = key_route_search_local(wnet, 1, {0.0, true});
    auto global = key_route_search_global(wnet, 1);
    CHECK(same_arcs(local, global));
}

TEST_CASE("every scheme returns a sub-dag whose maximal walks span source to sink") {
    std::mt19937 rng(2025);
    int done = 0;
    while (done < 100) {
        CitationNetwork net = oracles::random_dag(rng, 10, 0.3);
        if (net.arc_count() == 0) continue;
        ++done;
        auto wnet = oracles::with_random_integer_weights(std::move(net), rng);
        for (const TrajectoryPath& path :
             {forward_search(wnet), backward_search(wnet), critical_path(wnet),
              key_route_search_local(wnet, 3), key_route_search_global(wnet, 3)}) {
            check_walk_endpoints(path, wnet);
        }
    }
}

TEST_CASE("searches are deterministic across repeated runs") {
    std::mt19937 rng(99999);
    CitationNetwork net = oracles::random_dag(rng, 12, 0.4);
    auto wnet = oracles::with_random_integer_weights(std::move(net), rng);
    if (wnet.net.arc_count() == 0) return;
    for (int rep = 0; rep < 3; ++rep) {
        CHECK(same_arcs(forward_search(wnet), forward_search(wnet)));
        CHECK(same_arcs(backward_search(wnet), backward_search(wnet)));
        CHECK(same_arcs(critical_path(wnet), critical_path(wnet)));
        CHECK(same_arcs(key_route_search_local(wnet, 5), key_route_search_local(wnet, 5)));
        CHECK(same_arcs(key_route_search_global(wnet, 5), key_route_search_global(wnet, 5)));
    }
}
