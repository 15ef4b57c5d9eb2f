#pragma once

// Trajectory extraction from a weighted citation network. Five schemes:
// forward, backward, critical path (global), key-route local and key-route
// global. All results are arc sets (sub-DAGs), because tolerance and tie
// rules can branch. Ties always keep every tied arc.

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mainpath/common.hpp"
#include "mainpath/network.hpp"
#include "mainpath/weighting.hpp"

namespace mainpath {

enum class SearchScheme { Forward, Backward, CriticalPath, KeyRouteLocal, KeyRouteGlobal };

inline const char* to_string(SearchScheme s) {
    switch (s) {
        case SearchScheme::Forward: return "FW";
        case SearchScheme::Backward: return "BW";
        case SearchScheme::CriticalPath: return "CPM";
        case SearchScheme::KeyRouteLocal: return "KR";
        case SearchScheme::KeyRouteGlobal: return "KR";
    }
    return "?";
}

struct TrajectoryPath {
    SearchScheme scheme = SearchScheme::Forward;
    WeightScheme weights = WeightScheme::Spc;
    std::vector<std::string> nodes;                            // sorted work ids
    std::vector<std::pair<std::string, std::string>> arcs;     // sorted (tail, head) ids
    double total_weight = 0.0;                                 // sum over kept arcs

    // e.g. "SPC FW", "FV CPM"
    std::string label() const {
        return std::string(weights == WeightScheme::Spc ? "SPC" : "FV") + " " + to_string(scheme);
    }
    bool contains_node(const std::string& id) const {
        return std::binary_search(nodes.begin(), nodes.end(), id);
    }
    bool contains_arc(const std::string& tail, const std::string& head) const {
        return std::binary_search(arcs.begin(), arcs.end(), std::pair(tail, head));
    }
};

struct SearchOptions {
    double tolerance = 0.1;  // keep arcs with weight >= (1 - tolerance) * step max
    // At the first step the tolerance pool spans all start nodes together;
    // afterwards each frontier node is expanded on its own.
    bool collective_first_step = true;
};

namespace detail {

inline TrajectoryPath make_path(const WeightedNetwork& wnet, SearchScheme scheme,
                                const std::set<int>& arc_ids) {
    TrajectoryPath p;
    p.scheme = scheme;
    p.weights = wnet.scheme;
    std::set<std::string> node_set;
    for (int a : arc_ids) {
        const Arc& arc = wnet.net.arc(a);
        node_set.insert(wnet.net.label(arc.tail));
        node_set.insert(wnet.net.label(arc.head));
        p.arcs.emplace_back(wnet.net.label(arc.tail), wnet.net.label(arc.head));
        p.total_weight += wnet.weight(a);
    }
    std::sort(p.arcs.begin(), p.arcs.end());
    p.nodes.assign(node_set.begin(), node_set.end());
    return p;
}

// Keeps every arc in `pool` whose weight is within the tolerance band of the
// pool maximum.
inline void keep_within_tolerance(const WeightedNetwork& wnet, const std::vector<int>& pool,
                                  double tolerance, std::set<int>& result,
                                  std::deque<int>& frontier, bool forward) {
    if (pool.empty()) return;
    double w_max = wnet.weight(pool.front());
    for (int a : pool) w_max = std::max(w_max, wnet.weight(a));
    double threshold = (1.0 - tolerance) * w_max;
    for (int a : pool) {
        if (wnet.weight(a) >= threshold) {
            result.insert(a);
            frontier.push_back(forward ? wnet.net.arc(a).head : wnet.net.arc(a).tail);
        }
    }
}

// Greedy tolerance expansion. forward=true walks tail->head from the start
// set to sinks; forward=false walks head->tail to sources.
inline std::set<int> tolerance_expand(const WeightedNetwork& wnet, const std::vector<int>& starts,
                                      bool forward, const SearchOptions& opts) {
    const CitationNetwork& net = wnet.net;
    std::set<int> kept;
    std::deque<int> frontier;
    std::vector<bool> expanded(static_cast<std::size_t>(net.node_count()), false);

    if (opts.collective_first_step) {
        std::vector<int> pool;
        for (int v : starts) {
            const auto& arcs = forward ? net.out_arcs(v) : net.in_arcs(v);
            pool.insert(pool.end(), arcs.begin(), arcs.end());
            expanded[static_cast<std::size_t>(v)] = true;
        }
        keep_within_tolerance(wnet, pool, opts.tolerance, kept, frontier, forward);
    } else {
        for (int v : starts) frontier.push_back(v);
    }

    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        auto vi = static_cast<std::size_t>(v);
        if (expanded[vi]) continue;
        expanded[vi] = true;
        const auto& pool = forward ? net.out_arcs(v) : net.in_arcs(v);
        keep_within_tolerance(wnet, pool, opts.tolerance, kept, frontier, forward);
    }
    return kept;
}

}  // namespace detail

// Greedy expansion from all sources toward sinks, pooling the first step's
// candidate arcs over every source.
inline TrajectoryPath forward_search(const WeightedNetwork& wnet, const SearchOptions& opts = {}) {
    auto kept = detail::tolerance_expand(wnet, sources(wnet.net), true, opts);
    return detail::make_path(wnet, SearchScheme::Forward, kept);
}

// Mirror of forward search on the transposed network, reported in the
// original orientation.
inline TrajectoryPath backward_search(const WeightedNetwork& wnet, const SearchOptions& opts = {}) {
    auto kept = detail::tolerance_expand(wnet, sinks(wnet.net), false, opts);
    return detail::make_path(wnet, SearchScheme::Backward, kept);
}

namespace detail {

struct PathDp {
    std::vector<double> from_source;  // max total weight of a source-to-v walk
    std::vector<double> to_sink;      // max total weight of a v-to-sink walk
};

inline PathDp longest_path_dp(const WeightedNetwork& wnet) {
    const CitationNetwork& net = wnet.net;
    auto order = topological_order(net);
    PathDp dp;
    dp.from_source.assign(static_cast<std::size_t>(net.node_count()), 0.0);
    dp.to_sink.assign(static_cast<std::size_t>(net.node_count()), 0.0);
    for (int v : order)
        for (int a : net.in_arcs(v)) {
            double cand = dp.from_source[static_cast<std::size_t>(net.arc(a).tail)] + wnet.weight(a);
            auto vi = static_cast<std::size_t>(v);
            dp.from_source[vi] = std::max(dp.from_source[vi], cand);
        }
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        for (int a : net.out_arcs(*it)) {
            double cand = dp.to_sink[static_cast<std::size_t>(net.arc(a).head)] + wnet.weight(a);
            auto vi = static_cast<std::size_t>(*it);
            dp.to_sink[vi] = std::max(dp.to_sink[vi], cand);
        }
    return dp;
}

// All arcs lying on a maximum-total source-to-target walk, for every target
// in `targets` (equality backtrack; ties all retained).
inline void best_prefix_arcs(const WeightedNetwork& wnet, const PathDp& dp, int target,
                             std::set<int>& result) {
    const CitationNetwork& net = wnet.net;
    std::deque<int> queue{target};
    std::set<int> seen{target};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int a : net.in_arcs(v)) {
            int u = net.arc(a).tail;
            if (dp.from_source[static_cast<std::size_t>(u)] + wnet.weight(a) ==
                dp.from_source[static_cast<std::size_t>(v)]) {
                result.insert(a);
                if (seen.insert(u).second) queue.push_back(u);
            }
        }
    }
}

inline void best_suffix_arcs(const WeightedNetwork& wnet, const PathDp& dp, int start,
                             std::set<int>& result) {
    const CitationNetwork& net = wnet.net;
    std::deque<int> queue{start};
    std::set<int> seen{start};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int a : net.out_arcs(v)) {
            int w = net.arc(a).head;
            if (wnet.weight(a) + dp.to_sink[static_cast<std::size_t>(w)] ==
                dp.to_sink[static_cast<std::size_t>(v)]) {
                result.insert(a);
                if (seen.insert(w).second) queue.push_back(w);
            }
        }
    }
}

}  // namespace detail

// Global search: the source-to-sink walk(s) with the largest total weight.
// Equal-total alternatives are all retained, so the result can branch.
inline TrajectoryPath critical_path(const WeightedNetwork& wnet) {
    const CitationNetwork& net = wnet.net;
    std::set<int> kept;
    if (net.arc_count() > 0) {
        auto dp = detail::longest_path_dp(wnet);
        double best_total = 0.0;
        for (int v = 0; v < net.node_count(); ++v)
            if (net.out_degree(v) == 0)
                best_total = std::max(best_total, dp.from_source[static_cast<std::size_t>(v)]);
        for (int a = 0; a < net.arc_count(); ++a) {
            const Arc& arc = net.arc(a);
            if (dp.from_source[static_cast<std::size_t>(arc.tail)] + wnet.weight(a) +
                    dp.to_sink[static_cast<std::size_t>(arc.head)] ==
                best_total)
                kept.insert(a);
        }
    }
    return detail::make_path(wnet, SearchScheme::CriticalPath, kept);
}

// Top-k arcs by weight; ties broken by (tail id, head id) label order.
inline std::vector<int> key_routes(const WeightedNetwork& wnet, int k) {
    if (k < 1) throw InputError("key-route count must be >= 1");
    std::vector<int> ids(static_cast<std::size_t>(wnet.net.arc_count()));
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        if (wnet.weight(a) != wnet.weight(b)) return wnet.weight(a) > wnet.weight(b);
        const Arc& aa = wnet.net.arc(a);
        const Arc& ab = wnet.net.arc(b);
        return std::pair(wnet.net.label(aa.tail), wnet.net.label(aa.head)) <
               std::pair(wnet.net.label(ab.tail), wnet.net.label(ab.head));
    });
    if (static_cast<int>(ids.size()) > k) ids.resize(static_cast<std::size_t>(k));
    return ids;
}

// From each key-route arc, backward search from its cited end to sources and
// forward search from its citing end to sinks; union over all k routes.
inline TrajectoryPath key_route_search_local(const WeightedNetwork& wnet, int k = 10,
                                             const SearchOptions& opts = {}) {
    std::set<int> kept;
    for (int route : key_routes(wnet, k)) {
        kept.insert(route);
        const Arc& arc = wnet.net.arc(route);
        auto back = detail::tolerance_expand(wnet, {arc.tail}, false, opts);
        auto fwd = detail::tolerance_expand(wnet, {arc.head}, true, opts);
        kept.insert(back.begin(), back.end());
        kept.insert(fwd.begin(), fwd.end());
    }
    return detail::make_path(wnet, SearchScheme::KeyRouteLocal, kept);
}

// From each key-route arc, the maximum-total-weight source prefix and sink
// suffix (ties retained); union over all k routes.
inline TrajectoryPath key_route_search_global(const WeightedNetwork& wnet, int k = 10) {
    std::set<int> kept;
    if (wnet.net.arc_count() > 0) {
        auto dp = detail::longest_path_dp(wnet);
        for (int route : key_routes(wnet, k)) {
            kept.insert(route);
            const Arc& arc = wnet.net.arc(route);
            detail::best_prefix_arcs(wnet, dp, arc.tail, kept);
            detail::best_suffix_arcs(wnet, dp, arc.head, kept);
        }
    }
    return detail::make_path(wnet, SearchScheme::KeyRouteGlobal, kept);
}

// Extracts a path's induced weighted subnetwork (for Pajek/DOT export).
inline WeightedNetwork path_subnetwork(const TrajectoryPath& path, const WeightedNetwork& parent) {
    WeightedNetwork sub;
    sub.scheme = parent.scheme;
    for (const auto& id : path.nodes) {
        auto v = parent.net.find_node(id);
        sub.net.add_node(id, v ? parent.net.year(*v) : std::nullopt);
    }
    for (const auto& [tail, head] : path.arcs)
        sub.net.add_arc(*sub.net.find_node(tail), *sub.net.find_node(head));
    sub.net.finalize();
    for (int a = 0; a < sub.net.arc_count(); ++a) {
        const Arc& arc = sub.net.arc(a);
        auto pt = parent.net.find_node(sub.net.label(arc.tail));
        auto ph = parent.net.find_node(sub.net.label(arc.head));
        double w = 0.0;
        if (pt && ph) {
            for (int pa : parent.net.out_arcs(*pt))
                if (parent.net.arc(pa).head == *ph) {
                    w = parent.weight(pa);
                    break;
                }
        }
        sub.weights.push_back(w);
    }
    return sub;
}

}  // namespace mainpath
