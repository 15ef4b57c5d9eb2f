#pragma once

// Pajek .net reader/writer (1-based vertex indices, quoted labels, optional
// arc weights) plus the "citing,cited" CSV edge-list alternative.

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mainpath/common.hpp"
#include "mainpath/csv.hpp"
#include "mainpath/network.hpp"

namespace mainpath {

namespace detail {

inline bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

// Parses "1 \"label with spaces\"" or "1 label". Returns (index, label).
inline std::pair<long, std::optional<std::string>> parse_vertex_line(const std::string& line,
                                                                     std::size_t line_no) {
    std::istringstream ss(line);
    long idx = 0;
    if (!(ss >> idx))
        throw InputError("line " + std::to_string(line_no) + ": expected vertex index");
    ss >> std::ws;
    if (ss.peek() == EOF) return {idx, std::nullopt};
    std::string label;
    if (ss.peek() == '"') {
        ss.get();
        char c = '\0';
        while (ss.get(c) && c != '"') label += c;
        if (c != '"')
            throw InputError("line " + std::to_string(line_no) + ": unterminated vertex label");
    } else {
        ss >> label;
    }
    return {idx, label};
}

}  // namespace detail

// Reads a Pajek .net file. Arc weights, when present on every arc line, are
// attached to the network; a partially weighted file is an error.
inline CitationNetwork read_pajek_net(std::istream& in) {
    CitationNetwork net;
    std::string line;
    std::size_t line_no = 0;
    long declared_vertices = -1;
    enum class Section { None, Vertices, Arcs } section = Section::None;
    std::vector<std::optional<std::string>> vertex_labels;
    int weighted_arcs = 0, total_arcs = 0;
    std::vector<std::tuple<long, long, std::optional<double>>> arcs;

    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '%') continue;
        if (t[0] == '*') {
            std::istringstream ss(t);
            std::string keyword;
            ss >> keyword;
            if (detail::iequals(keyword, "*vertices")) {
                if (!(ss >> declared_vertices) || declared_vertices < 0)
                    throw InputError("line " + std::to_string(line_no) + ": bad *Vertices count");
                vertex_labels.assign(static_cast<std::size_t>(declared_vertices), std::nullopt);
                section = Section::Vertices;
            } else if (detail::iequals(keyword, "*arcs")) {
                if (declared_vertices < 0)
                    throw InputError("line " + std::to_string(line_no) + ": *Arcs before *Vertices");
                section = Section::Arcs;
            } else {
                throw InputError("line " + std::to_string(line_no) + ": unsupported section \"" +
                                 keyword + "\"");
            }
            continue;
        }
        if (section == Section::Vertices) {
            auto [idx, label] = detail::parse_vertex_line(line, line_no);
            if (idx < 1 || idx > declared_vertices)
                throw InputError("line " + std::to_string(line_no) + ": vertex index " +
                                 std::to_string(idx) + " out of range 1.." +
                                 std::to_string(declared_vertices));
            vertex_labels[static_cast<std::size_t>(idx - 1)] = label;
        } else if (section == Section::Arcs) {
            std::istringstream ss(t);
            long u = 0, v = 0;
            if (!(ss >> u >> v))
                throw InputError("line " + std::to_string(line_no) + ": expected \"u v [w]\"");
            if (u < 1 || u > declared_vertices || v < 1 || v > declared_vertices)
                throw InputError("line " + std::to_string(line_no) + ": arc endpoint out of range 1.." +
                                 std::to_string(declared_vertices));
            std::optional<double> w;
            std::string rest;
            if (ss >> rest) {
                try {
                    std::size_t consumed = 0;
                    w = std::stod(rest, &consumed);
                    if (consumed != rest.size()) throw std::invalid_argument(rest);
                } catch (...) {
                    throw InputError("line " + std::to_string(line_no) + ": non-numeric weight \"" +
                                     rest + "\"");
                }
            }
            arcs.emplace_back(u, v, w);
            ++total_arcs;
            if (w) ++weighted_arcs;
        } else {
            throw InputError("line " + std::to_string(line_no) + ": data before *Vertices");
        }
    }
    if (declared_vertices < 0) throw InputError("no *Vertices section found");
    if (weighted_arcs != 0 && weighted_arcs != total_arcs)
        throw InputError("mixed weighted and unweighted arc lines");

    for (long i = 0; i < declared_vertices; ++i) {
        const auto& lbl = vertex_labels[static_cast<std::size_t>(i)];
        net.add_node(lbl ? *lbl : std::to_string(i + 1));
    }
    for (const auto& [u, v, w] : arcs)
        net.add_arc(static_cast<int>(u - 1), static_cast<int>(v - 1), w);
    net.finalize();
    return net;
}

inline CitationNetwork read_pajek_net(const std::string& text) {
    std::istringstream ss(text);
    return read_pajek_net(ss);
}

namespace detail {

inline std::string quote_pajek_label(const std::string& label) {
    if (label.find('"') != std::string::npos)
        throw InputError("vertex label contains a quote character: " + label);
    return "\"" + label + "\"";
}

}  // namespace detail

inline void write_pajek_net(const CitationNetwork& net, std::ostream& os,
                            const std::vector<double>* weights = nullptr) {
    os << "*Vertices " << net.node_count() << '\n';
    for (int v = 0; v < net.node_count(); ++v)
        os << (v + 1) << ' ' << detail::quote_pajek_label(net.label(v)) << '\n';
    os << "*Arcs\n";
    for (int a = 0; a < net.arc_count(); ++a) {
        const Arc& arc = net.arc(a);
        os << (arc.tail + 1) << ' ' << (arc.head + 1);
        if (weights) {
            os << ' ' << to_roundtrip((*weights)[static_cast<std::size_t>(a)]);
        } else if (auto w = net.raw_weight(a)) {
            os << ' ' << to_roundtrip(*w);
        }
        os << '\n';
    }
}

inline std::string write_pajek_net(const CitationNetwork& net,
                                   const std::vector<double>* weights = nullptr) {
    std::ostringstream ss;
    write_pajek_net(net, ss, weights);
    return ss.str();
}

// ---- CSV edge list: header "citing,cited", one arc per row -----------------
// Rows are in raw citation orientation; the network stores the reverse
// (knowledge-flow) arc cited -> citing.

inline CitationNetwork read_csv_edges(std::istream& in) {
    CitationNetwork net;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<std::string, std::string>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = csv::parse_line(line);
        if (line_no == 1) {
            if (fields != std::vector<std::string>{"citing", "cited"})
                throw InputError("expected header \"citing,cited\"");
            continue;
        }
        if (fields.size() != 2)
            throw InputError("line " + std::to_string(line_no) + ": expected 2 fields");
        rows.emplace_back(fields[0], fields[1]);
    }
    for (const auto& [citing, cited] : rows) {
        net.add_node(citing);
        net.add_node(cited);
    }
    for (const auto& [citing, cited] : rows)
        net.add_arc(*net.find_node(cited), *net.find_node(citing));
    net.finalize();
    return net;
}

inline void write_csv_edges(const CitationNetwork& net, std::ostream& os) {
    csv::write_row(os, {"citing", "cited"});
    for (int a = 0; a < net.arc_count(); ++a) {
        const Arc& arc = net.arc(a);
        csv::write_row(os, {net.label(arc.head), net.label(arc.tail)});
    }
}

}  // namespace mainpath
