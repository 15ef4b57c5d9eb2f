#pragma once

// Citation network in knowledge-flow orientation: every arc points from the
// cited work (tail) to the citing work (head). Input references run the
// other way (citing -> cited) and are reversed while building.

#include <algorithm>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mainpath/common.hpp"
#include "mainpath/records.hpp"

namespace mainpath {

struct Arc {
    int tail = -1;  // cited work
    int head = -1;  // citing work

    friend bool operator==(const Arc&, const Arc&) = default;
    friend auto operator<=>(const Arc&, const Arc&) = default;
};

class CitationNetwork {
public:
    CitationNetwork() = default;

    int add_node(std::string label, std::optional<int> year = std::nullopt) {
        auto it = index_.find(label);
        if (it != index_.end()) {
            if (year && !years_[static_cast<std::size_t>(it->second)])
                years_[static_cast<std::size_t>(it->second)] = year;
            return it->second;
        }
        int id = static_cast<int>(labels_.size());
        index_.emplace(label, id);
        labels_.push_back(std::move(label));
        years_.push_back(year);
        return id;
    }

    // Arcs are deduplicated; self-arcs are rejected.
    void add_arc(int tail, int head, std::optional<double> weight = std::nullopt) {
        if (tail < 0 || head < 0 || tail >= node_count() || head >= node_count())
            throw InputError("arc endpoint out of range");
        if (tail == head)
            throw InputError("self-arc on \"" + labels_[static_cast<std::size_t>(tail)] + "\"");
        if (!arc_set_.insert((static_cast<std::uint64_t>(tail) << 32) |
                             static_cast<std::uint32_t>(head))
                 .second)
            return;
        arcs_.push_back({tail, head});
        raw_weights_.push_back(weight);
        adjacency_stale_ = true;
    }

    bool has_arc(int tail, int head) const {
        return arc_set_.count((static_cast<std::uint64_t>(tail) << 32) |
                              static_cast<std::uint32_t>(head)) != 0;
    }

    // Sorts arcs by (tail, head) index so arc ids are canonical, and builds
    // the adjacency lists. Call after the last mutation.
    void finalize() {
        std::vector<std::size_t> order(arcs_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return arcs_[a] < arcs_[b]; });
        std::vector<Arc> sorted_arcs;
        std::vector<std::optional<double>> sorted_weights;
        sorted_arcs.reserve(arcs_.size());
        sorted_weights.reserve(arcs_.size());
        for (std::size_t i : order) {
            sorted_arcs.push_back(arcs_[i]);
            sorted_weights.push_back(raw_weights_[i]);
        }
        arcs_ = std::move(sorted_arcs);
        raw_weights_ = std::move(sorted_weights);

        out_arcs_.assign(static_cast<std::size_t>(node_count()), {});
        in_arcs_.assign(static_cast<std::size_t>(node_count()), {});
        for (std::size_t a = 0; a < arcs_.size(); ++a) {
            out_arcs_[static_cast<std::size_t>(arcs_[a].tail)].push_back(static_cast<int>(a));
            in_arcs_[static_cast<std::size_t>(arcs_[a].head)].push_back(static_cast<int>(a));
        }
        adjacency_stale_ = false;
    }

    int node_count() const { return static_cast<int>(labels_.size()); }
    int arc_count() const { return static_cast<int>(arcs_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int node) const { return labels_[static_cast<std::size_t>(node)]; }
    std::optional<int> year(int node) const { return years_[static_cast<std::size_t>(node)]; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const Arc& arc(int id) const { return arcs_[static_cast<std::size_t>(id)]; }
    std::optional<double> raw_weight(int id) const { return raw_weights_[static_cast<std::size_t>(id)]; }

    std::optional<int> find_node(const std::string& label) const {
        auto it = index_.find(label);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<int>& out_arcs(int node) const {
        check_finalized();
        return out_arcs_[static_cast<std::size_t>(node)];
    }
    const std::vector<int>& in_arcs(int node) const {
        check_finalized();
        return in_arcs_[static_cast<std::size_t>(node)];
    }
    int out_degree(int node) const { return static_cast<int>(out_arcs(node).size()); }
    int in_degree(int node) const { return static_cast<int>(in_arcs(node).size()); }

    bool finalized() const { return !adjacency_stale_; }

private:
    void check_finalized() const {
        if (adjacency_stale_) throw AnalysisError("network used before finalize()");
    }

    std::vector<std::string> labels_;
    std::vector<std::optional<int>> years_;
    std::unordered_map<std::string, int> index_;
    std::vector<Arc> arcs_;
    std::vector<std::optional<double>> raw_weights_;
    std::unordered_set<std::uint64_t> arc_set_;
    std::vector<std::vector<int>> out_arcs_;
    std::vector<std::vector<int>> in_arcs_;
    bool adjacency_stale_ = true;
};

struct BuildReport {
    int records_total = 0;
    int works_in_network = 0;
    int arcs_in_network = 0;
    int unresolved_references = 0;  // referenced ids not present in the dataset
    int self_references = 0;
    int duplicate_references = 0;
    int isolated_works = 0;  // records with no in-dataset citation links
    std::vector<std::string> isolated_ids;
};

struct BuildResult {
    CitationNetwork net;
    BuildReport report;
};

// Builds the knowledge-flow network from parsed records: each in-dataset
// reference c of record r becomes arc c -> r. Works with no in-dataset links
// are excluded from the network and counted instead.
inline BuildResult build_network(const std::vector<PublicationRecord>& records) {
    BuildReport report;
    report.records_total = static_cast<int>(records.size());

    std::unordered_map<std::string, const PublicationRecord*> by_id;
    for (const auto& r : records) by_id.emplace(r.id, &r);

    std::unordered_set<std::string> linked;
    std::vector<std::pair<const PublicationRecord*, const PublicationRecord*>> links;  // (cited, citing)
    for (const auto& r : records) {
        std::unordered_set<std::string> seen_refs;
        for (const auto& ref : r.referenced_pubs) {
            if (ref == r.id) {
                ++report.self_references;
                continue;
            }
            auto it = by_id.find(ref);
            if (it == by_id.end()) {
                ++report.unresolved_references;
                continue;
            }
            if (!seen_refs.insert(ref).second) {
                ++report.duplicate_references;
                continue;
            }
            links.emplace_back(it->second, &r);
            linked.insert(ref);
            linked.insert(r.id);
        }
    }

    CitationNetwork net;
    for (const auto& r : records) {
        if (linked.count(r.id)) {
            net.add_node(r.id, r.year);
        } else {
            ++report.isolated_works;
            report.isolated_ids.push_back(r.id);
        }
    }
    for (const auto& [cited, citing] : links)
        net.add_arc(*net.find_node(cited->id), *net.find_node(citing->id));
    net.finalize();

    report.works_in_network = net.node_count();
    report.arcs_in_network = net.arc_count();
    return {std::move(net), report};
}

// ---- acyclicity ------------------------------------------------------------

namespace detail {

// Iterative Tarjan; returns the component id per node. Component ids are
// assigned in reverse topological order of the condensation.
inline std::vector<int> strongly_connected_components(const CitationNetwork& net, int& component_count) {
    int n = net.node_count();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<int> dfn(static_cast<std::size_t>(n), -1), low(static_cast<std::size_t>(n), 0);
    std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
    std::vector<int> stack;
    int next_dfn = 0;
    component_count = 0;

    struct Frame {
        int node;
        std::size_t next_out;
    };
    std::vector<Frame> call;
    for (int start = 0; start < n; ++start) {
        if (dfn[static_cast<std::size_t>(start)] != -1) continue;
        call.push_back({start, 0});
        while (!call.empty()) {
            auto& [v, ei] = call.back();
            auto vi = static_cast<std::size_t>(v);
            if (ei == 0) {
                dfn[vi] = low[vi] = next_dfn++;
                stack.push_back(v);
                on_stack[vi] = true;
            }
            bool descended = false;
            const auto& outs = net.out_arcs(v);
            while (ei < outs.size()) {
                int w = net.arc(outs[ei]).head;
                ++ei;
                auto wi = static_cast<std::size_t>(w);
                if (dfn[wi] == -1) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[wi]) low[vi] = std::min(low[vi], dfn[wi]);
            }
            if (descended) continue;
            if (low[vi] == dfn[vi]) {
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = false;
                    comp[static_cast<std::size_t>(w)] = component_count;
                    if (w == v) break;
                }
                ++component_count;
            }
            call.pop_back();
            if (!call.empty()) {
                auto& parent = call.back();
                auto pi = static_cast<std::size_t>(parent.node);
                low[pi] = std::min(low[pi], low[vi]);
            }
        }
    }
    return comp;
}

}  // namespace detail

// Finds one directed cycle if any exists, as a closed label sequence.
inline std::optional<std::vector<std::string>> find_cycle(const CitationNetwork& net) {
    int component_count = 0;
    auto comp = detail::strongly_connected_components(net, component_count);
    std::vector<int> comp_size(static_cast<std::size_t>(component_count), 0);
    for (int c : comp) ++comp_size[static_cast<std::size_t>(c)];

    int target = -1;
    for (int c = 0; c < component_count; ++c)
        if (comp_size[static_cast<std::size_t>(c)] > 1) {
            target = c;
            break;
        }
    if (target == -1) return std::nullopt;

    // Walk inside the component until a node repeats.
    int start = -1;
    for (int v = 0; v < net.node_count(); ++v)
        if (comp[static_cast<std::size_t>(v)] == target) {
            start = v;
            break;
        }
    std::vector<int> visited_at(static_cast<std::size_t>(net.node_count()), -1);
    std::vector<int> walk;
    int v = start;
    while (visited_at[static_cast<std::size_t>(v)] == -1) {
        visited_at[static_cast<std::size_t>(v)] = static_cast<int>(walk.size());
        walk.push_back(v);
        for (int a : net.out_arcs(v)) {
            int w = net.arc(a).head;
            if (comp[static_cast<std::size_t>(w)] == target) {
                v = w;
                break;
            }
        }
    }
    std::vector<std::string> cycle;
    for (std::size_t i = static_cast<std::size_t>(visited_at[static_cast<std::size_t>(v)]); i < walk.size(); ++i)
        cycle.push_back(net.label(walk[i]));
    cycle.push_back(net.label(v));  // close the loop
    return cycle;
}

enum class CycleMode { Fail, BreakCycles };

struct RemovedArc {
    std::string tail;
    std::string head;
    std::string reason;  // "time-anomalous" or "lexicographic"
};

struct AcyclicReport {
    int arcs_before = 0;
    int arcs_after = 0;
    std::vector<RemovedArc> removed;
};

struct AcyclicResult {
    CitationNetwork net;
    AcyclicReport report;
};

// Checks (mode Fail) or repairs (mode BreakCycles) acyclicity. Repair removes
// arcs inside non-trivial strongly connected components one at a time until
// none remain, preferring time-anomalous arcs (head's year not later than the
// tail's), then falling back to the lexicographically smallest (tail, head)
// label pair. Every removal is reported.
inline AcyclicResult validate_acyclic(const CitationNetwork& net, CycleMode mode) {
    if (!net.finalized()) throw AnalysisError("validate_acyclic requires a finalized network");
    AcyclicReport report;
    report.arcs_before = net.arc_count();

    if (mode == CycleMode::Fail) {
        if (auto cycle = find_cycle(net)) {
            std::string msg = "citation cycle detected: ";
            for (std::size_t i = 0; i < cycle->size(); ++i) {
                if (i) msg += " -> ";
                msg += (*cycle)[i];
            }
            throw CycleError(msg, *cycle);
        }
        report.arcs_after = report.arcs_before;
        CitationNetwork copy = net;
        return {std::move(copy), report};
    }

    // Work on a mutable arc list; rebuild candidate SCCs after each removal.
    CitationNetwork current = net;
    while (true) {
        int component_count = 0;
        auto comp = detail::strongly_connected_components(current, component_count);
        std::vector<int> comp_size(static_cast<std::size_t>(component_count), 0);
        for (int c : comp) ++comp_size[static_cast<std::size_t>(c)];

        // Candidate arcs: both endpoints in the same non-trivial component.
        int best = -1;
        bool best_anomalous = false;
        auto arc_less = [&](int a, int b) {
            const auto& aa = current.arc(a);
            const auto& ab = current.arc(b);
            return std::pair(current.label(aa.tail), current.label(aa.head)) <
                   std::pair(current.label(ab.tail), current.label(ab.head));
        };
        for (int a = 0; a < current.arc_count(); ++a) {
            const Arc& arc = current.arc(a);
            if (comp[static_cast<std::size_t>(arc.tail)] != comp[static_cast<std::size_t>(arc.head)])
                continue;
            if (comp_size[static_cast<std::size_t>(comp[static_cast<std::size_t>(arc.tail)])] < 2)
                continue;
            auto ty = current.year(arc.tail);
            auto hy = current.year(arc.head);
            bool anomalous = ty && hy && *hy <= *ty;
            if (best == -1 || (anomalous && !best_anomalous) ||
                (anomalous == best_anomalous && arc_less(a, best))) {
                best = a;
                best_anomalous = anomalous;
            }
        }
        if (best == -1) break;

        const Arc& arc = current.arc(best);
        report.removed.push_back({current.label(arc.tail), current.label(arc.head),
                                  best_anomalous ? "time-anomalous" : "lexicographic"});
        CitationNetwork next;
        for (int v = 0; v < current.node_count(); ++v) next.add_node(current.label(v), current.year(v));
        for (int a = 0; a < current.arc_count(); ++a) {
            if (a == best) continue;
            next.add_arc(current.arc(a).tail, current.arc(a).head, current.raw_weight(a));
        }
        next.finalize();
        current = std::move(next);
    }
    report.arcs_after = current.arc_count();
    return {std::move(current), report};
}

// Sources do not cite any other work in the network; sinks are not cited by
// any. In knowledge-flow orientation that is in-degree 0 / out-degree 0.
inline std::vector<int> sources(const CitationNetwork& net) {
    std::vector<int> out;
    for (int v = 0; v < net.node_count(); ++v)
        if (net.in_degree(v) == 0) out.push_back(v);
    return out;
}

inline std::vector<int> sinks(const CitationNetwork& net) {
    std::vector<int> out;
    for (int v = 0; v < net.node_count(); ++v)
        if (net.out_degree(v) == 0) out.push_back(v);
    return out;
}

// Kahn's algorithm; ties resolved by smallest node index. Throws on cycles.
inline std::vector<int> topological_order(const CitationNetwork& net) {
    int n = net.node_count();
    std::vector<int> indeg(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) indeg[static_cast<std::size_t>(v)] = net.in_degree(v);
    std::vector<int> ready;
    for (int v = n - 1; v >= 0; --v)
        if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    while (!ready.empty()) {
        // smallest index first for determinism
        auto it = std::min_element(ready.begin(), ready.end());
        int v = *it;
        ready.erase(it);
        order.push_back(v);
        for (int a : net.out_arcs(v)) {
            int w = net.arc(a).head;
            if (--indeg[static_cast<std::size_t>(w)] == 0) ready.push_back(w);
        }
    }
    if (static_cast<int>(order.size()) != n)
        throw AnalysisError("topological sort failed: network contains a cycle");
    return order;
}

}  // namespace mainpath
