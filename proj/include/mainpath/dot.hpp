#pragma once

// Graphviz DOT emitters for networks, trajectory paths and concept paths.

#include <ostream>
#include <sstream>
#include <string>

#include "mainpath/concept_paths.hpp"
#include "mainpath/network.hpp"
#include "mainpath/search.hpp"
#include "mainpath/weighting.hpp"

namespace mainpath {

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace detail

inline void write_dot(const CitationNetwork& net, std::ostream& os,
                      const std::vector<double>* weights = nullptr,
                      const std::string& name = "citation_network") {
    os << "digraph \"" << detail::dot_escape(name) << "\" {\n";
    for (int v = 0; v < net.node_count(); ++v) {
        os << "  n" << v << " [label=\"" << detail::dot_escape(net.label(v));
        if (auto y = net.year(v)) os << "\\n" << *y;
        os << "\"];\n";
    }
    for (int a = 0; a < net.arc_count(); ++a) {
        const Arc& arc = net.arc(a);
        os << "  n" << arc.tail << " -> n" << arc.head;
        if (weights) os << " [label=\"" << to_roundtrip((*weights)[static_cast<std::size_t>(a)]) << "\"]";
        os << ";\n";
    }
    os << "}\n";
}

inline void write_dot(const TrajectoryPath& path, const WeightedNetwork& parent, std::ostream& os) {
    WeightedNetwork sub = path_subnetwork(path, parent);
    write_dot(sub.net, os, &sub.weights, path.label());
}

// Concept paths are multigraphs; arc multiplicity above 1 becomes an edge label.
inline void write_dot(const ConceptPath& cp, std::ostream& os,
                      const std::string& name = "concept_path") {
    os << "digraph \"" << detail::dot_escape(name) << "\" {\n";
    for (std::size_t i = 0; i < cp.concepts.size(); ++i)
        os << "  c" << i << " [label=\"" << detail::dot_escape(cp.concepts[i]) << "\"];\n";
    for (const auto& arc : cp.arcs) {
        os << "  c" << arc.tail << " -> c" << arc.head;
        if (arc.multiplicity > 1) os << " [label=\"" << arc.multiplicity << "\"]";
        os << ";\n";
    }
    os << "}\n";
}

inline std::string to_dot(const ConceptPath& cp, const std::string& name = "concept_path") {
    std::ostringstream ss;
    write_dot(cp, ss, name);
    return ss.str();
}

}  // namespace mainpath
