#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "mainpath/pipeline.hpp"

using namespace mainpath;
namespace fs = std::filesystem;

namespace {

const char* kChainRecords =
    R"({"id":"A","year":2018,"concepts_scores":[{"concept":"grid computing","score":0.9}],"times_cited":30})" "\n"
    R"({"id":"B","year":2019,"referenced_pubs":["A"],"concepts_scores":[{"concept":"cloud computing","score":0.8}],"times_cited":12})" "\n"
    R"({"id":"C","year":2020,"referenced_pubs":["B"],"concepts_scores":[{"concept":"edge computing","score":0.7}],"times_cited":2})" "\n";

fs::path write_temp(const std::string& name, const std::string& contents) {
    fs::path dir = fs::path("pipeline_tmp");
    fs::create_directories(dir);
    fs::path file = dir / name;
    std::ofstream out(file, std::ios::binary);
    out << contents;
    return file;
}

RunConfig chain_config(const std::string& out_name) {
    RunConfig config;
    config.records_path = write_temp("chain.jsonl", kChainRecords).string();
    config.output_dir = (fs::path("pipeline_tmp") / out_name).string();
    return config;
}

}  // namespace

TEST_CASE("three-record chain: eight identical candidates, all kept by the tie rule") {
    fs::remove_all("pipeline_tmp");
    PipelineResult result = run_pipeline(chain_config("chain_out"));

    REQUIRE(result.candidate_paths.size() == 8);
    const auto expected_arcs =
        std::vector<std::pair<std::string, std::string>>{{"A", "B"}, {"B", "C"}};
    for (const auto& path : result.candidate_paths) {
        CHECK(path.arcs == expected_arcs);
        CHECK(path.nodes == std::vector<std::string>{"A", "B", "C"});
    }
    // all pairs are identical (U = 0.5 < delta) with equal sizes, so the tie
    // rule keeps every path
    CHECK(result.selection.selected.size() == 8);
    CHECK(result.selection.log.empty());

    // u-matrix artifact holds 0.5 everywhere off the diagonal
    std::ifstream um(result.output_dir / "u_matrix.csv");
    std::string line, all;
    while (std::getline(um, line)) all += line + "\n";
    CHECK(all.find("0.500") != std::string::npos);
    CHECK(all.find("1.000") == std::string::npos);

    // stage outputs reload from disk
    CitationNetwork reloaded = read_pajek_net(read_file((result.output_dir / "paths/spc_fw.net").string()));
    CHECK(reloaded.node_count() == 3);
    CHECK(reloaded.arc_count() == 2);

    // concept relabeling produced one dot per selected path
    CHECK(fs::exists(result.output_dir / "concepts/spc_fw.dot"));
    CHECK(fs::exists(result.output_dir / "indicators/annual.csv"));
    CHECK(fs::exists(result.output_dir / "manifest.json"));
}

TEST_CASE("identical runs produce identical manifests") {
    PipelineResult a = run_pipeline(chain_config("det_a"));
    PipelineResult b = run_pipeline(chain_config("det_b"));
    CHECK_FALSE(a.manifest_json.empty());
    CHECK(a.manifest_json == b.manifest_json);
    CHECK(a.artifacts == b.artifacts);
}

TEST_CASE("a citation cycle halts the pipeline at the validate stage") {
    std::string cyclic =
        R"({"id":"A","year":2018,"referenced_pubs":["B"],"concepts_scores":[{"concept":"x","score":0.5}]})" "\n"
        R"({"id":"B","year":2019,"referenced_pubs":["A"],"concepts_scores":[{"concept":"y","score":0.5}]})" "\n";
    RunConfig config;
    config.records_path = write_temp("cyclic.jsonl", cyclic).string();
    config.output_dir = (fs::path("pipeline_tmp") / "cyclic_out").string();
    try {
        run_pipeline(config);
        FAIL("expected CycleError");
    } catch (const CycleError& e) {
        std::string what = e.what();
        CHECK(what.find("validate") != std::string::npos);
        CHECK(what.find("A") != std::string::npos);
        CHECK(what.find("B") != std::string::npos);
    }
}

TEST_CASE("break mode lets the cyclic dataset through and reports removals") {
    std::string cyclic =
        R"({"id":"A","year":2018,"referenced_pubs":["B","Z"],"concepts_scores":[{"concept":"x","score":0.5}]})" "\n"
        R"({"id":"B","year":2019,"referenced_pubs":["A"],"concepts_scores":[{"concept":"y","score":0.5}]})" "\n"
        R"({"id":"Z","year":2017,"concepts_scores":[{"concept":"z","score":0.5}]})" "\n";
    RunConfig config;
    config.records_path = write_temp("cyclic2.jsonl", cyclic).string();
    config.output_dir = (fs::path("pipeline_tmp") / "break_out").string();
    config.cycle_mode = CycleMode::BreakCycles;
    PipelineResult result = run_pipeline(config);
    CHECK(result.acyclic_report.removed.size() == 1);
    CHECK(result.acyclic_report.arcs_before == result.acyclic_report.arcs_after + 1);
}

TEST_CASE("strict mode turns line errors into input errors") {
    RunConfig config;
    config.records_path = write_temp("bad.jsonl", "{\"id\":\"A\",\"year\":2020}\nnot json\n").string();
    config.output_dir = (fs::path("pipeline_tmp") / "strict_out").string();
    config.strict = true;
    CHECK_THROWS_AS(run_pipeline(config), InputError);
}

TEST_CASE("config validation rejects out-of-range knobs") {
    RunConfig config;
    config.records_path = "unused";
    config.tolerance = 1.0;
    CHECK_THROWS_AS(run_pipeline(config), InputError);
    config.tolerance = 0.1;
    config.delta = 0.5;
    CHECK_THROWS_AS(run_pipeline(config), InputError);
    config.delta = 0.65;
    config.key_route_count = 0;
    CHECK_THROWS_AS(run_pipeline(config), InputError);
}
