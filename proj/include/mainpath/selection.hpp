#pragma once

// Deduplication of candidate trajectory paths. The uniqueness index of two
// paths compares their work sets: 0.5 means identical, 1 means disjoint.
// Pairs below the delta threshold keep only the larger path (both on a tie),
// and eliminated paths drop out of later comparisons.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "mainpath/common.hpp"
#include "mainpath/csv.hpp"
#include "mainpath/search.hpp"

namespace mainpath {

// (|Pi| + |Pj| - |Pi n Pj|) / (|Pi| + |Pj|), cardinalities over work sets.
inline double uniqueness_index(const TrajectoryPath& pi, const TrajectoryPath& pj) {
    if (pi.nodes.empty() || pj.nodes.empty())
        throw AnalysisError("uniqueness index undefined for an empty path");
    std::vector<std::string> common;
    std::set_intersection(pi.nodes.begin(), pi.nodes.end(), pj.nodes.begin(), pj.nodes.end(),
                          std::back_inserter(common));
    double total = static_cast<double>(pi.nodes.size() + pj.nodes.size());
    return (total - static_cast<double>(common.size())) / total;
}

struct UMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> values;  // symmetric; diagonal is NaN ("*")
};

inline UMatrix u_matrix(const std::vector<TrajectoryPath>& paths) {
    UMatrix m;
    std::size_t n = paths.size();
    m.labels.reserve(n);
    for (const auto& p : paths) m.labels.push_back(p.label());
    m.values.assign(n, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double u = uniqueness_index(paths[i], paths[j]);
            m.values[i][j] = u;
            m.values[j][i] = u;
        }
    return m;
}

// Layout mirrors the usual presentation: "*" on the diagonal, and on the
// lower triangle too when upper_triangle_only is set.
inline void write_u_matrix_csv(const UMatrix& m, std::ostream& os, bool upper_triangle_only = true) {
    std::vector<std::string> header{""};
    header.insert(header.end(), m.labels.begin(), m.labels.end());
    csv::write_row(os, header);
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        std::vector<std::string> row{m.labels[i]};
        for (std::size_t j = 0; j < m.labels.size(); ++j) {
            bool starred = i == j || (upper_triangle_only && j < i);
            row.push_back(starred ? "*" : to_fixed(m.values[i][j], 3));
        }
        csv::write_row(os, row);
    }
}

struct Elimination {
    std::string dropped;
    std::string kept;
    double u = 0.0;
    std::size_t dropped_size = 0;
    std::size_t kept_size = 0;
};

struct SelectionResult {
    std::vector<TrajectoryPath> selected;  // survivors, original order
    std::vector<std::size_t> selected_indices;
    std::vector<Elimination> log;
};

// Pairs are visited in the order the paths are given (callers pass the
// canonical scheme order). When U < delta the smaller path is deactivated
// immediately and skips every later pair; equal sizes keep both.
inline SelectionResult select_paths(const std::vector<TrajectoryPath>& paths, double delta = 0.65) {
    std::vector<bool> active(paths.size(), true);
    SelectionResult result;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        for (std::size_t j = i + 1; j < paths.size(); ++j) {
            if (!active[i]) break;
            if (!active[j]) continue;
            double u = uniqueness_index(paths[i], paths[j]);
            if (u >= delta) continue;
            std::size_t si = paths[i].nodes.size(), sj = paths[j].nodes.size();
            if (si == sj) continue;  // tie: keep both
            std::size_t drop = si < sj ? i : j;
            std::size_t keep = si < sj ? j : i;
            active[drop] = false;
            result.log.push_back({paths[drop].label(), paths[keep].label(), u,
                                  paths[drop].nodes.size(), paths[keep].nodes.size()});
        }
    }
    for (std::size_t i = 0; i < paths.size(); ++i)
        if (active[i]) {
            result.selected.push_back(paths[i]);
            result.selected_indices.push_back(i);
        }
    return result;
}

}  // namespace mainpath
