// mainpath — command-line front end for the citation-trajectory toolkit.
//
// Subcommands mirror the pipeline stages so each step can be run (and its
// output inspected) on its own: ingest, build, weight, search, select,
// concepts, indicators, report, run.
//
// Exit codes: 0 success, 1 input error, 2 analysis error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mainpath/mainpath.hpp"

namespace fs = std::filesystem;
using namespace mainpath;

namespace {

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

ParseResult load_records(const std::string& path, bool strict) {
    std::istringstream stream(read_file(path));
    ParseResult parsed = parse_records(stream);
    for (const auto& e : parsed.errors)
        std::cerr << "records line " << e.line << ": " << e.reason << '\n';
    if (strict && !parsed.errors.empty())
        throw InputError("ingest failed under --strict: " + std::to_string(parsed.errors.size()) +
                         " malformed line(s)");
    return parsed;
}

// .net files parse as Pajek; .csv files as the "citing,cited" edge list.
CitationNetwork load_net(const std::string& path) {
    std::istringstream stream(read_file(path));
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return read_csv_edges(stream);
    return read_pajek_net(stream);
}

WeightedNetwork load_weighted_net(const std::string& path, WeightScheme scheme) {
    CitationNetwork net = load_net(path);
    WeightedNetwork wnet;
    wnet.scheme = scheme;
    wnet.weights.reserve(static_cast<std::size_t>(net.arc_count()));
    for (int a = 0; a < net.arc_count(); ++a) {
        auto w = net.raw_weight(a);
        if (!w) throw InputError("arc " + net.label(net.arc(a).tail) + " -> " +
                                 net.label(net.arc(a).head) + " has no weight; run `weight` first");
        wnet.weights.push_back(*w);
    }
    wnet.net = std::move(net);
    return wnet;
}

TrajectoryPath path_from_net_file(const std::string& file, WeightScheme wscheme, SearchScheme sscheme) {
    CitationNetwork net = load_net(file);
    TrajectoryPath p;
    p.scheme = sscheme;
    p.weights = wscheme;
    for (int v = 0; v < net.node_count(); ++v) p.nodes.push_back(net.label(v));
    std::sort(p.nodes.begin(), p.nodes.end());
    for (int a = 0; a < net.arc_count(); ++a) {
        p.arcs.emplace_back(net.label(net.arc(a).tail), net.label(net.arc(a).head));
        if (auto w = net.raw_weight(a)) p.total_weight += *w;
    }
    std::sort(p.arcs.begin(), p.arcs.end());
    return p;
}

WeightScheme parse_weight_scheme(const std::string& s) {
    if (s == "spc") return WeightScheme::Spc;
    if (s == "fv") return WeightScheme::FvNormalized;
    throw InputError("unknown weight scheme \"" + s + "\" (expected spc or fv)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Main path analysis and bibliometric indicators for citation networks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from an INI file (flags take precedence)");
    app.get_config_formatter_base()->valueSeparator('=');

    // shared options
    std::string records_path, gender_path, mentions_path, net_path, out_dir = "out", out_file;
    std::string weights_name = "spc", scheme_name = "fw", group_by = "year", cycle_mode_name = "fail";
    double tolerance = 0.1, delta = 0.65, min_accuracy = 70.0;
    int key_route_count = 10;
    int window_begin = 2011, window_end = 2020;
    bool strict = false;

    auto* ingest = app.add_subcommand("ingest", "Parse and validate records and sidecar files");
    ingest->add_option("--records", records_path, "JSON-lines records file")->required();
    ingest->add_option("--gender", gender_path, "Gender map CSV (name,country,gender,accuracy)");
    ingest->add_option("--mentions", mentions_path, "Altmetric mentions CSV");
    ingest->add_option("--out", out_dir, "Output directory");
    ingest->add_flag("--strict", strict, "Treat any malformed line as fatal");

    auto* build = app.add_subcommand("build", "Build the knowledge-flow citation network");
    build->add_option("--records", records_path)->required();
    build->add_option("--out", out_dir);
    build->add_option("--cycle-mode", cycle_mode_name, "fail | break")
        ->check(CLI::IsMember({"fail", "break"}));
    build->add_flag("--strict", strict);

    auto* weight = app.add_subcommand("weight", "Assign SPC or FV-normalized arc weights");
    weight->add_option("--net", net_path, "Citation network (.net)")->required();
    weight->add_option("--weights", weights_name, "spc | fv")->check(CLI::IsMember({"spc", "fv"}));
    weight->add_option("--out", out_dir);

    auto* search = app.add_subcommand("search", "Extract a trajectory path from a weighted network");
    search->add_option("--net", net_path, "Weighted network (.net)")->required();
    search->add_option("--scheme", scheme_name, "fw | bw | cpm | kr-local | kr-global")
        ->check(CLI::IsMember({"fw", "bw", "cpm", "kr-local", "kr-global"}));
    search->add_option("--weights", weights_name, "Weight scheme the network carries (spc | fv)")
        ->check(CLI::IsMember({"spc", "fv"}));
    search->add_option("--tolerance", tolerance, "Arc weight tolerance")->check(CLI::Range(0.0, 0.999));
    search->add_option("--key-routes", key_route_count, "Key-route count")->check(CLI::PositiveNumber);
    search->add_option("--out", out_dir);

    auto* select = app.add_subcommand("select", "U-matrix and path selection over candidate paths");
    std::vector<std::string> path_files;
    select->add_option("--paths", path_files, "Candidate path .net files, canonical order")
        ->required()
        ->expected(-2);
    select->add_option("--delta", delta, "Uniqueness threshold")->check(CLI::Range(0.501, 1.0));
    select->add_option("--out", out_dir);

    auto* concepts = app.add_subcommand("concepts", "Relabel a trajectory path with top concepts");
    concepts->add_option("--path", net_path, "Trajectory path (.net)")->required();
    concepts->add_option("--records", records_path)->required();
    concepts->add_option("--out", out_dir);

    auto* indicators = app.add_subcommand("indicators", "Bibliometric indicator tables");
    indicators->add_option("--records", records_path)->required();
    indicators->add_option("--group-by", group_by, "year | country | institution | funder | sdg")
        ->check(CLI::IsMember({"year", "country", "institution", "funder", "sdg"}));
    indicators->add_option("--out", out_file, "Output CSV (stdout when omitted)");
    indicators->add_flag("--strict", strict);

    auto* report = app.add_subcommand("report", "All indicator reports in one go");
    report->add_option("--records", records_path)->required();
    report->add_option("--gender", gender_path);
    report->add_option("--mentions", mentions_path);
    report->add_option("--min-accuracy", min_accuracy, "Gender accuracy threshold");
    report->add_option("--window-begin", window_begin, "Altmetric window start year");
    report->add_option("--window-end", window_end, "Altmetric window end year");
    report->add_option("--out", out_dir);
    report->add_flag("--strict", strict);

    auto* run = app.add_subcommand("run", "Full pipeline: ingest through reports");
    run->add_option("--records", records_path)->required();
    run->add_option("--gender", gender_path);
    run->add_option("--mentions", mentions_path);
    run->add_option("--out", out_dir);
    run->add_option("--tolerance", tolerance)->check(CLI::Range(0.0, 0.999));
    run->add_option("--key-routes", key_route_count)->check(CLI::PositiveNumber);
    run->add_option("--delta", delta)->check(CLI::Range(0.501, 1.0));
    run->add_option("--cycle-mode", cycle_mode_name, "fail | break")
        ->check(CLI::IsMember({"fail", "break"}));
    std::string kr_variant = "local";
    run->add_option("--kr-variant", kr_variant, "Key-route search variant (local | global)")
        ->check(CLI::IsMember({"local", "global"}));
    run->add_option("--min-accuracy", min_accuracy);
    run->add_option("--window-begin", window_begin);
    run->add_option("--window-end", window_end);
    run->add_flag("--strict", strict);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            ParseResult parsed = load_records(records_path, strict);
            auto out = open_out(fs::path(out_dir) / "records_validated.jsonl");
            write_records_jsonl(parsed.records, out);
            if (!gender_path.empty()) {
                std::istringstream gs(read_file(gender_path));
                GenderMap gm = parse_gender_map(gs);
                for (const auto& e : gm.errors)
                    std::cerr << "gender map line " << e.line << ": " << e.reason << '\n';
                if (strict && !gm.errors.empty()) throw InputError("gender map has malformed rows");
            }
            if (!mentions_path.empty()) {
                std::istringstream ms(read_file(mentions_path));
                MentionsTable mt = parse_mentions(ms);
                for (const auto& e : mt.errors)
                    std::cerr << "mentions line " << e.line << ": " << e.reason << '\n';
                if (strict && !mt.errors.empty()) throw InputError("mentions file has malformed rows");
            }
            std::cout << "accepted " << parsed.records.size() << " records, "
                      << parsed.errors.size() << " line error(s)\n";
        } else if (*build) {
            ParseResult parsed = load_records(records_path, strict);
            BuildResult built = build_network(parsed.records);
            AcyclicResult acyclic = validate_acyclic(
                built.net, cycle_mode_name == "break" ? CycleMode::BreakCycles : CycleMode::Fail);
            auto net_out = open_out(fs::path(out_dir) / "network.net");
            write_pajek_net(acyclic.net, net_out);
            auto csv_out = open_out(fs::path(out_dir) / "network_edges.csv");
            write_csv_edges(acyclic.net, csv_out);
            std::cout << "network: " << acyclic.net.node_count() << " works, "
                      << acyclic.net.arc_count() << " arcs (" << built.report.isolated_works
                      << " isolated excluded, " << acyclic.report.removed.size()
                      << " arcs removed breaking cycles)\n";
        } else if (*weight) {
            CitationNetwork net = load_net(net_path);
            if (weights_name == "spc") {
                WeightedNetwork w = spc_weights(net);
                auto out = open_out(fs::path(out_dir) / "weighted_spc.net");
                write_pajek_net(w.net, out, &w.weights);
            } else {
                FvWeightResult fv = fv_weights(net);
                if (fv.degenerate)
                    std::cerr << "warning: all FV gradients equal; normalized weights pinned to 1\n";
                auto out = open_out(fs::path(out_dir) / "weighted_fv.net");
                write_pajek_net(fv.wnet.net, out, &fv.wnet.weights);
                auto measures = open_out(fs::path(out_dir) / "node_measures.csv");
                write_node_measures_csv(net, fv.measures, measures);
            }
            std::cout << "weighted network written to " << out_dir << '\n';
        } else if (*search) {
            WeightedNetwork wnet = load_weighted_net(net_path, parse_weight_scheme(weights_name));
            SearchOptions opts{tolerance, true};
            TrajectoryPath path;
            if (scheme_name == "fw") path = forward_search(wnet, opts);
            else if (scheme_name == "bw") path = backward_search(wnet, opts);
            else if (scheme_name == "cpm") path = critical_path(wnet);
            else if (scheme_name == "kr-local") path = key_route_search_local(wnet, key_route_count, opts);
            else path = key_route_search_global(wnet, key_route_count);
            WeightedNetwork sub = path_subnetwork(path, wnet);
            std::string base = weights_name + "_" + scheme_name;
            auto net_out = open_out(fs::path(out_dir) / (base + ".net"));
            write_pajek_net(sub.net, net_out, &sub.weights);
            auto dot_out = open_out(fs::path(out_dir) / (base + ".dot"));
            write_dot(path, wnet, dot_out);
            std::cout << path.label() << ": " << path.nodes.size() << " works, " << path.arcs.size()
                      << " arcs, total weight " << path.total_weight << '\n';
        } else if (*select) {
            // Candidate labels follow the canonical order for as many files as given.
            static const std::pair<WeightScheme, SearchScheme> canonical[8] = {
                {WeightScheme::Spc, SearchScheme::Forward},
                {WeightScheme::Spc, SearchScheme::Backward},
                {WeightScheme::Spc, SearchScheme::KeyRouteLocal},
                {WeightScheme::Spc, SearchScheme::CriticalPath},
                {WeightScheme::FvNormalized, SearchScheme::Forward},
                {WeightScheme::FvNormalized, SearchScheme::Backward},
                {WeightScheme::FvNormalized, SearchScheme::KeyRouteLocal},
                {WeightScheme::FvNormalized, SearchScheme::CriticalPath},
            };
            if (path_files.size() > 8) throw InputError("at most 8 candidate paths expected");
            std::vector<TrajectoryPath> paths;
            for (std::size_t i = 0; i < path_files.size(); ++i)
                paths.push_back(path_from_net_file(path_files[i], canonical[i].first, canonical[i].second));
            UMatrix m = u_matrix(paths);
            auto um_out = open_out(fs::path(out_dir) / "u_matrix.csv");
            write_u_matrix_csv(m, um_out);
            SelectionResult sel = select_paths(paths, delta);
            for (const auto& e : sel.log)
                std::cout << "dropped " << e.dropped << " (" << e.dropped_size << " works) for "
                          << e.kept << " (" << e.kept_size << " works), U = " << to_fixed(e.u, 3)
                          << '\n';
            std::cout << "selected:";
            for (const auto& p : sel.selected) std::cout << ' ' << p.label();
            std::cout << '\n';
        } else if (*concepts) {
            ParseResult parsed = load_records(records_path, strict);
            TrajectoryPath path = path_from_net_file(net_path, WeightScheme::Spc, SearchScheme::Forward);
            ConceptAffiliations aff = affiliations_from_records(parsed.records);
            ConceptPath cp = concept_path(path, aff);
            auto dot_out = open_out(fs::path(out_dir) / "concept_path.dot");
            write_dot(cp, dot_out);
            auto labels_out = open_out(fs::path(out_dir) / "concept_labels.csv");
            write_concept_labels_csv(cp, labels_out);
            std::cout << "concept path: " << cp.concepts.size() << " concepts, " << cp.arc_total()
                      << " arcs\n";
        } else if (*indicators) {
            ParseResult parsed = load_records(records_path, strict);
            std::ostringstream table;
            if (group_by == "year") {
                write_annual_csv(annual_table(parsed.records), table);
            } else {
                EntityKey key = group_by == "country"       ? EntityKey::Country
                                : group_by == "institution" ? EntityKey::Institution
                                : group_by == "funder"      ? EntityKey::Funder
                                                            : EntityKey::Sdg;
                write_entity_csv(entity_table(parsed.records, key), key, table);
            }
            if (out_file.empty()) {
                std::cout << table.str();
            } else {
                auto out = open_out(out_file);
                out << table.str();
            }
        } else if (*report) {
            ParseResult parsed = load_records(records_path, strict);
            const auto& recs = parsed.records;
            auto annual = open_out(fs::path(out_dir) / "annual.csv");
            write_annual_csv(annual_table(recs), annual);
            for (EntityKey key :
                 {EntityKey::Country, EntityKey::Institution, EntityKey::Funder, EntityKey::Sdg}) {
                auto out = open_out(fs::path(out_dir) / (std::string(to_string(key)) + ".csv"));
                write_entity_csv(entity_table(recs, key), key, out);
            }
            auto authorship = open_out(fs::path(out_dir) / "authorship.csv");
            write_authorship_csv(authorship_buckets(recs), authorship);
            auto collab = open_out(fs::path(out_dir) / "collaboration.csv");
            write_collaboration_csv(collaboration_breakdown(recs), collab);
            auto oa = open_out(fs::path(out_dir) / "open_access.csv");
            write_oa_csv(oa_breakdown(recs), oa);
            if (!gender_path.empty()) {
                std::istringstream gs(read_file(gender_path));
                auto out = open_out(fs::path(out_dir) / "gender.csv");
                write_gender_csv(gender_distribution(recs, parse_gender_map(gs), min_accuracy), out);
            }
            if (!mentions_path.empty()) {
                std::istringstream ms(read_file(mentions_path));
                auto out = open_out(fs::path(out_dir) / "altmetric.csv");
                write_altmetric_csv(
                    altmetric_coverage(recs, parse_mentions(ms), window_begin, window_end), out);
            }
            std::cout << "reports written to " << out_dir << '\n';
        } else if (*run) {
            RunConfig config;
            config.records_path = records_path;
            if (!gender_path.empty()) config.gender_map_path = gender_path;
            if (!mentions_path.empty()) config.mentions_path = mentions_path;
            config.output_dir = out_dir;
            config.tolerance = tolerance;
            config.key_route_count = key_route_count;
            config.delta = delta;
            config.cycle_mode = cycle_mode_name == "break" ? CycleMode::BreakCycles : CycleMode::Fail;
            config.key_route_variant =
                kr_variant == "global" ? KeyRouteVariant::Global : KeyRouteVariant::Local;
            config.strict = strict;
            config.min_gender_accuracy = min_accuracy;
            config.altmetric_window_begin = window_begin;
            config.altmetric_window_end = window_end;
            PipelineResult result = run_pipeline(config);
            std::cout << "pipeline complete: " << result.artifacts.size() << " artifacts in "
                      << result.output_dir.string() << '\n';
            for (const auto& e : result.selection.log)
                std::cout << "  dropped " << e.dropped << " for " << e.kept << " (U = "
                          << to_fixed(e.u, 3) << ")\n";
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const CycleError& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "analysis error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
