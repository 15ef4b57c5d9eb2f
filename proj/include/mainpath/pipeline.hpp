#pragma once

// End-to-end orchestration: ingest -> build -> validate -> weight -> search
// -> select -> concept paths -> indicators -> manifest. Every stage writes
// its artifacts to the output directory so any stage can be re-run from disk,
// and the manifest lists each artifact with a content digest. Identical
// inputs and configuration produce byte-identical bundles.

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mainpath/common.hpp"
#include "mainpath/concept_paths.hpp"
#include "mainpath/dot.hpp"
#include "mainpath/indicators.hpp"
#include "mainpath/network.hpp"
#include "mainpath/pajek.hpp"
#include "mainpath/records.hpp"
#include "mainpath/search.hpp"
#include "mainpath/selection.hpp"
#include "mainpath/weighting.hpp"

namespace mainpath {

enum class KeyRouteVariant { Local, Global };

struct RunConfig {
    std::string records_path;
    std::optional<std::string> gender_map_path;
    std::optional<std::string> mentions_path;
    std::string output_dir = "out";

    double tolerance = 0.1;      // in [0,1)
    int key_route_count = 10;    // >= 1
    double delta = 0.65;         // in (0.5, 1]
    CycleMode cycle_mode = CycleMode::Fail;
    KeyRouteVariant key_route_variant = KeyRouteVariant::Local;
    bool strict = false;         // any ingest line error becomes fatal
    double min_gender_accuracy = 70.0;
    int altmetric_window_begin = 2011;
    int altmetric_window_end = 2020;
    EigOptions eig;

    void validate() const {
        if (tolerance < 0.0 || tolerance >= 1.0) throw InputError("tolerance must be in [0,1)");
        if (delta <= 0.5 || delta > 1.0) throw InputError("delta must be in (0.5,1]");
        if (key_route_count < 1) throw InputError("key-route count must be >= 1");
    }
};

struct PipelineResult {
    std::filesystem::path output_dir;
    std::vector<std::string> artifacts;  // relative paths, sorted
    std::string manifest_json;
    // stage summaries useful to callers and tests
    ParseResult parse;
    BuildReport build_report;
    AcyclicReport acyclic_report;
    std::vector<TrajectoryPath> candidate_paths;  // canonical order
    SelectionResult selection;
};

namespace detail {

class ArtifactWriter {
public:
    explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {
        std::filesystem::create_directories(root_);
    }

    void write(const std::string& relative, const std::string& bytes) {
        std::filesystem::path full = root_ / relative;
        std::filesystem::create_directories(full.parent_path());
        std::ofstream out(full, std::ios::binary);
        if (!out) throw InputError("cannot write " + full.string());
        out << bytes;
        entries_[relative] = {bytes.size(), fnv1a64_hex(bytes)};
    }

    std::string manifest() const {
        nlohmann::json artifacts = nlohmann::json::array();
        for (const auto& [path, info] : entries_)
            artifacts.push_back({{"path", path}, {"bytes", info.first}, {"fnv1a64", info.second}});
        nlohmann::json j;
        j["artifacts"] = artifacts;
        return j.dump(2) + "\n";
    }

    std::vector<std::string> paths() const {
        std::vector<std::string> out;
        for (const auto& [path, info] : entries_) out.push_back(path);
        return out;
    }

private:
    std::filesystem::path root_;
    std::map<std::string, std::pair<std::size_t, std::string>> entries_;  // path -> (bytes, digest)
};

inline std::string slug(const std::string& label) {
    std::string out;
    for (char c : label) out += c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Re-raises module errors with the failing stage named, preserving the
// error kind and payload.
template <typename Fn>
auto stage(const char* name, Fn&& fn) {
    auto prefixed = [&](const char* what) { return "stage " + std::string(name) + ": " + what; };
    try {
        return fn();
    } catch (const CycleError& e) {
        throw CycleError(prefixed(e.what()), e.cycle());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(prefixed(e.what()), e.residual(), e.iterations());
    } catch (const InputError& e) {
        throw InputError(prefixed(e.what()));
    } catch (const std::exception& e) {
        throw AnalysisError(prefixed(e.what()));
    }
}

inline nlohmann::json errors_json(const std::vector<LineError>& errors) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : errors) arr.push_back({{"line", e.line}, {"reason", e.reason}});
    return arr;
}

}  // namespace detail

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline PipelineResult run_pipeline(const RunConfig& config) {
    config.validate();
    PipelineResult result;
    result.output_dir = config.output_dir;
    detail::ArtifactWriter out(result.output_dir);

    // ingest
    {
        std::istringstream stream(read_file(config.records_path));
        result.parse = parse_records(stream);
    }
    if (config.strict && !result.parse.errors.empty()) {
        const auto& first = result.parse.errors.front();
        throw InputError("stage ingest: line " + std::to_string(first.line) + ": " + first.reason);
    }
    const auto& records = result.parse.records;
    {
        nlohmann::json report;
        report["records_accepted"] = records.size();
        report["line_errors"] = detail::errors_json(result.parse.errors);
        out.write("ingest_report.json", report.dump(2) + "\n");
        std::ostringstream validated;
        write_records_jsonl(records, validated);
        out.write("records_validated.jsonl", validated.str());
    }

    GenderMap gender_map;
    if (config.gender_map_path) {
        std::istringstream stream(read_file(*config.gender_map_path));
        gender_map = parse_gender_map(stream);
        if (config.strict && !gender_map.errors.empty())
            throw InputError("stage ingest: gender map line " +
                             std::to_string(gender_map.errors.front().line) + ": " +
                             gender_map.errors.front().reason);
    }
    MentionsTable mentions;
    if (config.mentions_path) {
        std::istringstream stream(read_file(*config.mentions_path));
        mentions = parse_mentions(stream);
        if (config.strict && !mentions.errors.empty())
            throw InputError("stage ingest: mentions line " +
                             std::to_string(mentions.errors.front().line) + ": " +
                             mentions.errors.front().reason);
    }

    // build
    BuildResult built = detail::stage("build", [&] { return build_network(records); });
    result.build_report = built.report;
    {
        nlohmann::json report;
        report["records_total"] = built.report.records_total;
        report["works_in_network"] = built.report.works_in_network;
        report["arcs_in_network"] = built.report.arcs_in_network;
        report["unresolved_references"] = built.report.unresolved_references;
        report["self_references"] = built.report.self_references;
        report["duplicate_references"] = built.report.duplicate_references;
        report["isolated_works"] = built.report.isolated_works;
        report["isolated_ids"] = built.report.isolated_ids;
        out.write("build_report.json", report.dump(2) + "\n");
    }

    // validate acyclicity
    AcyclicResult acyclic = detail::stage("validate", [&] {
        return validate_acyclic(built.net, config.cycle_mode);
    });
    result.acyclic_report = acyclic.report;
    const CitationNetwork& net = acyclic.net;
    {
        nlohmann::json report;
        report["mode"] = config.cycle_mode == CycleMode::Fail ? "fail" : "break_cycles";
        report["arcs_before"] = acyclic.report.arcs_before;
        report["arcs_after"] = acyclic.report.arcs_after;
        nlohmann::json removed = nlohmann::json::array();
        for (const auto& r : acyclic.report.removed)
            removed.push_back({{"tail", r.tail}, {"head", r.head}, {"reason", r.reason}});
        report["removed"] = removed;
        out.write("acyclic_report.json", report.dump(2) + "\n");
        out.write("network.net", write_pajek_net(net));
        std::ostringstream edges;
        write_csv_edges(net, edges);
        out.write("network_edges.csv", edges.str());
    }

    // weighting
    WeightedNetwork spc = detail::stage("weight", [&] { return spc_weights(net); });
    FvWeightResult fv = detail::stage("weight", [&] { return fv_weights(net, config.eig); });
    {
        out.write("weighted_spc.net", write_pajek_net(spc.net, &spc.weights));
        out.write("weighted_fv.net", write_pajek_net(fv.wnet.net, &fv.wnet.weights));
        std::ostringstream measures;
        write_node_measures_csv(net, fv.measures, measures);
        out.write("node_measures.csv", measures.str());
    }

    // searches: the eight candidate paths in canonical order
    SearchOptions search_opts{config.tolerance, true};
    auto key_route = [&](const WeightedNetwork& wnet) {
        return config.key_route_variant == KeyRouteVariant::Local
                   ? key_route_search_local(wnet, config.key_route_count, search_opts)
                   : key_route_search_global(wnet, config.key_route_count);
    };
    detail::stage("search", [&] {
        for (const WeightedNetwork* wnet : {&spc, &fv.wnet}) {
            result.candidate_paths.push_back(forward_search(*wnet, search_opts));
            result.candidate_paths.push_back(backward_search(*wnet, search_opts));
            result.candidate_paths.push_back(key_route(*wnet));
            result.candidate_paths.push_back(critical_path(*wnet));
        }
        return 0;
    });
    for (const auto& path : result.candidate_paths) {
        const WeightedNetwork& parent = path.weights == WeightScheme::Spc ? spc : fv.wnet;
        WeightedNetwork sub = path_subnetwork(path, parent);
        std::string base = "paths/" + detail::slug(path.label());
        out.write(base + ".net", write_pajek_net(sub.net, &sub.weights));
        std::ostringstream dot;
        write_dot(path, parent, dot);
        out.write(base + ".dot", dot.str());
    }

    // selection
    UMatrix matrix = detail::stage("select", [&] { return u_matrix(result.candidate_paths); });
    result.selection = detail::stage("select", [&] {
        return select_paths(result.candidate_paths, config.delta);
    });
    {
        std::ostringstream um;
        write_u_matrix_csv(matrix, um);
        out.write("u_matrix.csv", um.str());
        nlohmann::json sel;
        nlohmann::json kept = nlohmann::json::array();
        for (const auto& p : result.selection.selected) kept.push_back(p.label());
        sel["selected"] = kept;
        nlohmann::json log = nlohmann::json::array();
        for (const auto& e : result.selection.log)
            log.push_back({{"dropped", e.dropped},
                           {"kept", e.kept},
                           {"u", e.u},
                           {"dropped_size", e.dropped_size},
                           {"kept_size", e.kept_size}});
        sel["eliminations"] = log;
        out.write("selection.json", sel.dump(2) + "\n");
    }

    // concept paths for the selected trajectories
    ConceptAffiliations affiliations = affiliations_from_records(records);
    for (const auto& path : result.selection.selected) {
        ConceptPath cp = detail::stage("concepts", [&] { return concept_path(path, affiliations); });
        std::string base = "concepts/" + detail::slug(path.label());
        out.write(base + ".dot", to_dot(cp, path.label() + " concepts"));
        std::ostringstream labels;
        write_concept_labels_csv(cp, labels);
        out.write(base + "_labels.csv", labels.str());
    }

    // indicators, each table as CSV and JSON
    detail::stage("indicators", [&] {
        IndicatorTable annual = annual_table(records);
        std::ostringstream annual_csv;
        write_annual_csv(annual, annual_csv);
        out.write("indicators/annual.csv", annual_csv.str());
        out.write("indicators/annual.json", to_json(annual).dump(2) + "\n");
        for (EntityKey key : {EntityKey::Country, EntityKey::Institution, EntityKey::Funder, EntityKey::Sdg}) {
            auto rows = entity_table(records, key);
            std::ostringstream table;
            write_entity_csv(rows, key, table);
            out.write(std::string("indicators/") + to_string(key) + ".csv", table.str());
            out.write(std::string("indicators/") + to_string(key) + ".json",
                      to_json(rows, key).dump(2) + "\n");
        }
        AuthorshipBuckets authorship = authorship_buckets(records);
        std::ostringstream authorship_csv;
        write_authorship_csv(authorship, authorship_csv);
        out.write("indicators/authorship.csv", authorship_csv.str());
        out.write("indicators/authorship.json", to_json(authorship).dump(2) + "\n");
        CollaborationBreakdown collab = collaboration_breakdown(records);
        std::ostringstream collab_csv;
        write_collaboration_csv(collab, collab_csv);
        out.write("indicators/collaboration.csv", collab_csv.str());
        out.write("indicators/collaboration.json", to_json(collab).dump(2) + "\n");
        OaBreakdown oa = oa_breakdown(records);
        std::ostringstream oa_csv;
        write_oa_csv(oa, oa_csv);
        out.write("indicators/open_access.csv", oa_csv.str());
        out.write("indicators/open_access.json", to_json(oa).dump(2) + "\n");
        if (config.gender_map_path) {
            auto rows = gender_distribution(records, gender_map, config.min_gender_accuracy);
            std::ostringstream gender;
            write_gender_csv(rows, gender);
            out.write("indicators/gender.csv", gender.str());
            out.write("indicators/gender.json", to_json(rows).dump(2) + "\n");
        }
        if (config.mentions_path) {
            AltmetricCoverage coverage = altmetric_coverage(
                records, mentions, config.altmetric_window_begin, config.altmetric_window_end);
            std::ostringstream altmetric;
            write_altmetric_csv(coverage, altmetric);
            out.write("indicators/altmetric.csv", altmetric.str());
            out.write("indicators/altmetric.json", to_json(coverage).dump(2) + "\n");
        }
        return 0;
    });

    result.manifest_json = out.manifest();
    {
        std::ofstream manifest(result.output_dir / "manifest.json", std::ios::binary);
        manifest << result.manifest_json;
    }
    result.artifacts = out.paths();
    return result;
}

}  // namespace mainpath
