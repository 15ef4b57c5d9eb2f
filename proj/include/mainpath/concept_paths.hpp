#pragma once

// Concept evolution paths: a trajectory path with every work replaced by its
// highest-relevance concept. The result is a directed multigraph over concept
// strings; works on consecutive path arcs sharing a concept yield self-loops,
// and parallel arcs keep their multiplicity.

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "mainpath/common.hpp"
#include "mainpath/csv.hpp"
#include "mainpath/records.hpp"
#include "mainpath/search.hpp"

namespace mainpath {

// work id -> scored concepts. Concept strings are trimmed on ingest and
// compared byte-exact afterwards.
using ConceptAffiliations = std::unordered_map<std::string, std::vector<ConceptScore>>;

inline ConceptAffiliations affiliations_from_records(const std::vector<PublicationRecord>& records) {
    ConceptAffiliations aff;
    for (const auto& r : records) {
        auto& list = aff[r.id];
        for (const auto& cs : r.concepts_scores) list.push_back({trim(cs.term), cs.score});
    }
    return aff;
}

// Highest-relevance concept; ties resolved toward the lexicographically
// smallest concept string.
inline const ConceptScore& top_concept(const std::string& work_id, const ConceptAffiliations& aff) {
    auto it = aff.find(work_id);
    if (it == aff.end() || it->second.empty())
        throw AnalysisError("work \"" + work_id + "\" has no scored concepts");
    const ConceptScore* best = &it->second.front();
    for (const auto& cs : it->second) {
        if (cs.score > best->score || (cs.score == best->score && cs.term < best->term))
            best = &cs;
    }
    return *best;
}

struct ConceptArc {
    int tail = 0;  // concept node index
    int head = 0;
    int multiplicity = 0;
};

struct ConceptLabel {
    std::string work_id;
    std::string term;
    double relevance = 0.0;
};

struct ConceptPath {
    std::vector<std::string> concepts;  // node index -> concept string
    std::vector<ConceptArc> arcs;       // sorted by (tail, head)
    std::vector<ConceptLabel> labels;   // chosen label per path work, in work-id order

    int arc_total() const {
        int n = 0;
        for (const auto& a : arcs) n += a.multiplicity;
        return n;
    }
};

// Relabels every trajectory arc u -> v as concept(u) -> concept(v). Concept
// node ids follow first appearance over the sorted work list, so the result
// is deterministic for a given path.
inline ConceptPath concept_path(const TrajectoryPath& path, const ConceptAffiliations& aff) {
    ConceptPath cp;
    std::unordered_map<std::string, int> concept_id;
    std::unordered_map<std::string, int> work_concept;  // work id -> concept node
    for (const auto& work : path.nodes) {
        const ConceptScore& top = top_concept(work, aff);
        auto [it, inserted] = concept_id.emplace(top.term, static_cast<int>(cp.concepts.size()));
        if (inserted) cp.concepts.push_back(top.term);
        work_concept[work] = it->second;
        cp.labels.push_back({work, top.term, top.score});
    }
    std::map<std::pair<int, int>, int> counts;
    for (const auto& [tail, head] : path.arcs)
        ++counts[{work_concept.at(tail), work_concept.at(head)}];
    for (const auto& [key, n] : counts) cp.arcs.push_back({key.first, key.second, n});
    return cp;
}

// "work_id,concept,relevance" audit listing of the chosen labels.
inline void write_concept_labels_csv(const ConceptPath& cp, std::ostream& os) {
    csv::write_row(os, {"work_id", "concept", "relevance"});
    for (const auto& l : cp.labels)
        csv::write_row(os, {l.work_id, l.term, to_roundtrip(l.relevance)});
}

}  // namespace mainpath
