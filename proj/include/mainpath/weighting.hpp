#pragma once

// Arc weight assignment. Two schemes:
//   SPC          — an arc's weight is the number of source-to-sink paths
//                  traversing it, computed as N-(tail) * N+(head) by dynamic
//                  programming over a topological order.
//   FVNormalized — flow-vergence gradient per arc, affinely rescaled into
//                  [1,2] so the most negative gradient gets the top weight.
// The node measures behind FV (degrees in the citation sense, eigenvector
// centrality, FV index) are exposed individually.

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "mainpath/common.hpp"
#include "mainpath/csv.hpp"
#include "mainpath/network.hpp"

namespace mainpath {

enum class WeightScheme { Spc, Fv, FvNormalized };

inline const char* to_string(WeightScheme s) {
    switch (s) {
        case WeightScheme::Spc: return "SPC";
        case WeightScheme::Fv: return "FV";
        case WeightScheme::FvNormalized: return "FV-normalized";
    }
    return "?";
}

struct WeightedNetwork {
    CitationNetwork net;
    std::vector<double> weights;  // parallel to net.arcs()
    WeightScheme scheme = WeightScheme::Spc;

    double weight(int arc_id) const { return weights[static_cast<std::size_t>(arc_id)]; }
};

// ---- SPC -------------------------------------------------------------------

struct SpcCounts {
    std::vector<std::uint64_t> from_sources;  // N-(v): source-to-v path count
    std::vector<std::uint64_t> to_sinks;      // N+(v): v-to-sink path count
    std::uint64_t total_paths = 0;            // all source-to-sink paths
};

inline SpcCounts spc_counts(const CitationNetwork& net) {
    auto order = topological_order(net);
    int n = net.node_count();
    SpcCounts c;
    c.from_sources.assign(static_cast<std::size_t>(n), 0);
    c.to_sinks.assign(static_cast<std::size_t>(n), 0);
    for (int v : order) {
        auto vi = static_cast<std::size_t>(v);
        if (net.in_degree(v) == 0) {
            c.from_sources[vi] = 1;
        } else {
            for (int a : net.in_arcs(v))
                c.from_sources[vi] += c.from_sources[static_cast<std::size_t>(net.arc(a).tail)];
        }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto vi = static_cast<std::size_t>(*it);
        if (net.out_degree(*it) == 0) {
            c.to_sinks[vi] = 1;
        } else {
            for (int a : net.out_arcs(*it))
                c.to_sinks[vi] += c.to_sinks[static_cast<std::size_t>(net.arc(a).head)];
        }
    }
    for (int v = 0; v < n; ++v)
        if (net.in_degree(v) == 0) c.total_paths += c.to_sinks[static_cast<std::size_t>(v)];
    return c;
}

inline WeightedNetwork spc_weights(const CitationNetwork& net) {
    if (net.arc_count() == 0)
        throw AnalysisError("SPC weighting needs at least one source-sink path (network has no arcs)");
    SpcCounts c = spc_counts(net);
    WeightedNetwork w;
    w.net = net;
    w.scheme = WeightScheme::Spc;
    w.weights.reserve(static_cast<std::size_t>(net.arc_count()));
    for (int a = 0; a < net.arc_count(); ++a) {
        const Arc& arc = net.arc(a);
        w.weights.push_back(static_cast<double>(c.from_sources[static_cast<std::size_t>(arc.tail)] *
                                                c.to_sinks[static_cast<std::size_t>(arc.head)]));
    }
    return w;
}

// ---- eigenvector centrality --------------------------------------------------

struct EigOptions {
    double tolerance = 1e-12;
    std::size_t max_iterations = 100000;
    // Uniform teleport added to the propagation operator. The citation DAG's
    // adjacency is nilpotent, so without this there is no positive principal
    // vector to converge to.
    double teleport = 1e-6;
};

// Power iteration on the propagation operator M[v][u] = [arc u->v] + eps/n:
// a work's score accumulates from the works whose knowledge it received,
// so heavily cited works dominate. The result is scaled to max entry 1.
inline std::vector<double> eigenvector_centrality(const CitationNetwork& net,
                                                  const EigOptions& opts = {}) {
    int n = net.node_count();
    if (n == 0) throw AnalysisError("eigenvector centrality of an empty network");
    auto nn = static_cast<std::size_t>(n);
    std::vector<double> x(nn, 1.0), next(nn, 0.0);
    double residual = 0.0;
    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        double sum = 0.0;
        for (double xi : x) sum += xi;
        double teleport_mass = opts.teleport * sum / static_cast<double>(n);
        for (auto& v : next) v = teleport_mass;
        for (int a = 0; a < net.arc_count(); ++a) {
            const Arc& arc = net.arc(a);
            next[static_cast<std::size_t>(arc.head)] += x[static_cast<std::size_t>(arc.tail)];
        }
        double max_entry = 0.0;
        for (double v : next) max_entry = std::max(max_entry, v);
        if (max_entry == 0.0)
            throw AnalysisError("propagation operator annihilated the score vector; teleport must be > 0");
        for (auto& v : next) v /= max_entry;
        residual = 0.0;
        for (std::size_t i = 0; i < nn; ++i) residual = std::max(residual, std::fabs(next[i] - x[i]));
        x.swap(next);
        if (residual < opts.tolerance) return x;
    }
    throw ConvergenceError("eigenvector centrality did not converge (residual " +
                               std::to_string(residual) + " after " +
                               std::to_string(opts.max_iterations) + " iterations)",
                           residual, opts.max_iterations);
}

// ---- FV index and gradient ---------------------------------------------------

struct NodeMeasures {
    // citation-sense degrees: indeg = citations received, outdeg = citations made
    std::vector<int> indeg;
    std::vector<int> outdeg;
    std::vector<double> eig;
    std::vector<double> w_fv;
};

// FV index per node: (indeg - outdeg)/(indeg + outdeg) + eig, with indeg the
// citations received inside the network. In knowledge-flow orientation,
// citations received = out-degree and citations made = in-degree.
inline std::vector<double> fv_index(const CitationNetwork& net, const std::vector<double>& eig) {
    std::vector<double> w(static_cast<std::size_t>(net.node_count()));
    for (int v = 0; v < net.node_count(); ++v) {
        int received = net.out_degree(v);
        int made = net.in_degree(v);
        if (received + made == 0)
            throw AnalysisError("FV index undefined for isolated work \"" + net.label(v) + "\"");
        w[static_cast<std::size_t>(v)] =
            static_cast<double>(received - made) / static_cast<double>(received + made) +
            eig[static_cast<std::size_t>(v)];
    }
    return w;
}

inline NodeMeasures node_measures(const CitationNetwork& net, const EigOptions& opts = {}) {
    NodeMeasures m;
    m.eig = eigenvector_centrality(net, opts);
    m.w_fv = fv_index(net, m.eig);
    m.indeg.reserve(static_cast<std::size_t>(net.node_count()));
    m.outdeg.reserve(static_cast<std::size_t>(net.node_count()));
    for (int v = 0; v < net.node_count(); ++v) {
        m.indeg.push_back(net.out_degree(v));
        m.outdeg.push_back(net.in_degree(v));
    }
    return m;
}

// Per-arc FV gradient: w_fv(cited) - w_fv(citing). A negative gradient marks
// an FV-effect arc (knowledge flowing from a lower- to a higher-potential work).
inline std::vector<double> fv_gradient(const CitationNetwork& net, const std::vector<double>& w_fv) {
    std::vector<double> g(static_cast<std::size_t>(net.arc_count()));
    for (int a = 0; a < net.arc_count(); ++a) {
        const Arc& arc = net.arc(a);
        g[static_cast<std::size_t>(a)] =
            w_fv[static_cast<std::size_t>(arc.tail)] - w_fv[static_cast<std::size_t>(arc.head)];
    }
    return g;
}

inline std::vector<bool> fv_effect_flags(const std::vector<double>& gradients) {
    std::vector<bool> flags(gradients.size());
    for (std::size_t i = 0; i < gradients.size(); ++i) flags[i] = gradients[i] < 0.0;
    return flags;
}

struct FvNormalized {
    std::vector<double> weights;  // in [1,2]
    bool degenerate = false;      // all gradients equal; weights pinned to 1
};

// 1 + (max - g)/(max - min): the minimum gradient maps to 2, the maximum to 1.
inline FvNormalized fv_normalize(const std::vector<double>& gradients) {
    if (gradients.empty()) throw AnalysisError("fv_normalize needs at least one arc");
    double lo = gradients[0], hi = gradients[0];
    for (double g : gradients) {
        lo = std::min(lo, g);
        hi = std::max(hi, g);
    }
    FvNormalized out;
    out.weights.resize(gradients.size());
    if (lo == hi) {
        out.degenerate = true;
        for (auto& w : out.weights) w = 1.0;
        return out;
    }
    for (std::size_t i = 0; i < gradients.size(); ++i)
        out.weights[i] = 1.0 + (hi - gradients[i]) / (hi - lo);
    return out;
}

struct FvWeightResult {
    WeightedNetwork wnet;
    NodeMeasures measures;
    std::vector<double> gradients;
    bool degenerate = false;
};

inline FvWeightResult fv_weights(const CitationNetwork& net, const EigOptions& opts = {}) {
    if (net.arc_count() == 0) throw AnalysisError("FV weighting needs at least one arc");
    FvWeightResult r;
    r.measures = node_measures(net, opts);
    r.gradients = fv_gradient(net, r.measures.w_fv);
    FvNormalized norm = fv_normalize(r.gradients);
    r.degenerate = norm.degenerate;
    r.wnet.net = net;
    r.wnet.weights = std::move(norm.weights);
    r.wnet.scheme = WeightScheme::FvNormalized;
    return r;
}

// "id,indeg,outdeg,eig,w_fv" — indeg/outdeg in the citation sense.
inline void write_node_measures_csv(const CitationNetwork& net, const NodeMeasures& m,
                                    std::ostream& os) {
    csv::write_row(os, {"id", "indeg", "outdeg", "eig", "w_fv"});
    for (int v = 0; v < net.node_count(); ++v) {
        auto vi = static_cast<std::size_t>(v);
        csv::write_row(os, {net.label(v), std::to_string(m.indeg[vi]), std::to_string(m.outdeg[vi]),
                            to_roundtrip(m.eig[vi]), to_roundtrip(m.w_fv[vi])});
    }
}

}  // namespace mainpath
