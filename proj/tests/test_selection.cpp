#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mainpath/selection.hpp"

using namespace mainpath;

namespace {

TrajectoryPath path_with(WeightScheme w, SearchScheme s, std::vector<std::string> nodes) {
    TrajectoryPath p;
    p.weights = w;
    p.scheme = s;
    std::sort(nodes.begin(), nodes.end());
    p.nodes = std::move(nodes);
    return p;
}

std::vector<std::string> numbered(int from, int count) {
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i) out.push_back("w" + std::to_string(from + i));
    return out;
}

}  // namespace

TEST_CASE("identical paths have uniqueness 0.5, disjoint paths 1.0") {
    auto a = path_with(WeightScheme::Spc, SearchScheme::Forward, {"x", "y", "z"});
    auto b = path_with(WeightScheme::Spc, SearchScheme::Backward, {"x", "y", "z"});
    auto c = path_with(WeightScheme::Spc, SearchScheme::CriticalPath, {"p", "q"});
    CHECK(uniqueness_index(a, b) == 0.5);
    CHECK(uniqueness_index(a, a) == 0.5);
    CHECK(uniqueness_index(a, c) == 1.0);
    CHECK(uniqueness_index(a, b) == uniqueness_index(b, a));
}

TEST_CASE("sizes 10 and 6 with overlap 4 give 0.75") {
    auto pi = path_with(WeightScheme::Spc, SearchScheme::Forward, numbered(0, 10));
    auto pj = path_with(WeightScheme::Spc, SearchScheme::Backward, numbered(6, 6));  // w6..w11 overlap w6..w9
    CHECK(uniqueness_index(pi, pj) == 0.75);
}

TEST_CASE("uniqueness rejects empty paths") {
    auto a = path_with(WeightScheme::Spc, SearchScheme::Forward, {"x"});
    TrajectoryPath empty;
    CHECK_THROWS_AS(uniqueness_index(a, empty), AnalysisError);
}

TEST_CASE("uniqueness grows as overlap shrinks at fixed sizes") {
    auto base = numbered(0, 8);
    double prev = 0.0;
    for (int overlap = 8; overlap >= 0; --overlap) {
        std::vector<std::string> other;
        for (int i = 0; i < overlap; ++i) other.push_back(base[static_cast<std::size_t>(i)]);
        for (int i = overlap; i < 8; ++i) other.push_back("other" + std::to_string(i));
        auto pi = path_with(WeightScheme::Spc, SearchScheme::Forward, base);
        auto pj = path_with(WeightScheme::Spc, SearchScheme::Backward, other);
        double u = uniqueness_index(pi, pj);
        CHECK(u > prev);
        prev = u;
    }
    CHECK(prev == 1.0);
}

TEST_CASE("u-matrix over three paths: identical pair plus a disjoint third") {
    std::vector<TrajectoryPath> paths = {
        path_with(WeightScheme::Spc, SearchScheme::Forward, {"x", "y"}),
        path_with(WeightScheme::Spc, SearchScheme::Backward, {"x", "y"}),
        path_with(WeightScheme::Spc, SearchScheme::CriticalPath, {"a", "b"})};
    UMatrix m = u_matrix(paths);
    CHECK(m.values[0][1] == 0.5);
    CHECK(m.values[0][2] == 1.0);
    CHECK(m.values[1][2] == 1.0);
    CHECK(std::isnan(m.values[1][1]));
}

TEST_CASE("u-matrix over eight paths is symmetric with 28 pair values") {
    std::vector<TrajectoryPath> paths;
    for (int i = 0; i < 8; ++i) {
        auto nodes = numbered(i * 2, 4);  // staggered overlaps
        paths.push_back(path_with(i < 4 ? WeightScheme::Spc : WeightScheme::FvNormalized,
                                  static_cast<SearchScheme>(i % 4), std::move(nodes)));
    }
    UMatrix m = u_matrix(paths);
    int pairs = 0;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            if (i == j) {
                CHECK(std::isnan(m.values[i][j]));
            } else {
                CHECK(m.values[i][j] == m.values[j][i]);
                if (i < j) ++pairs;
            }
        }
    CHECK(pairs == 28);
}

TEST_CASE("selection keeps everything when all pairs clear the threshold") {
    std::vector<TrajectoryPath> paths = {
        path_with(WeightScheme::Spc, SearchScheme::Forward, {"a", "b"}),
        path_with(WeightScheme::Spc, SearchScheme::Backward, {"c", "d"}),
        path_with(WeightScheme::Spc, SearchScheme::CriticalPath, {"e", "f"})};
    SelectionResult r = select_paths(paths, 0.65);
    CHECK(r.selected.size() == 3);
    CHECK(r.log.empty());
}

TEST_CASE("selection drops the smaller path of a redundant pair") {
    // 213-work path fully contained in a 287-work path: U = 287/500 = 0.574
    auto small = path_with(WeightScheme::Spc, SearchScheme::Backward, numbered(0, 213));
    auto large = path_with(WeightScheme::Spc, SearchScheme::KeyRouteLocal, numbered(0, 287));
    CHECK(std::fabs(uniqueness_index(small, large) - 0.574) < 1e-12);

    SelectionResult r = select_paths({small, large}, 0.65);
    REQUIRE(r.selected.size() == 1);
    CHECK(r.selected[0].label() == "SPC KR");
    REQUIRE(r.log.size() == 1);
    CHECK(r.log[0].dropped == "SPC BW");
    CHECK(r.log[0].kept == "SPC KR");
    CHECK(std::fabs(r.log[0].u - 0.574) < 1e-12);
}

TEST_CASE("equal-size redundant paths are both kept") {
    auto a = path_with(WeightScheme::Spc, SearchScheme::Forward, {"a", "b", "c", "x"});
    auto b = path_with(WeightScheme::Spc, SearchScheme::Backward, {"a", "b", "c", "y"});
    CHECK(uniqueness_index(a, b) < 0.65);
    SelectionResult r = select_paths({a, b}, 0.65);
    CHECK(r.selected.size() == 2);
    CHECK(r.log.empty());
}

TEST_CASE("eliminated paths do not participate in later pairs") {
    // B loses to A immediately, so the (B, C) pair is never evaluated and C
    // survives even though B would have eliminated it.
    auto a = path_with(WeightScheme::Spc, SearchScheme::Forward, numbered(0, 6));
    auto b = path_with(WeightScheme::Spc, SearchScheme::Backward, numbered(0, 4));
    auto c = path_with(WeightScheme::Spc, SearchScheme::KeyRouteLocal,
                       {"w0", "w1", "w2"});
    REQUIRE(uniqueness_index(a, b) < 0.65);
    REQUIRE(uniqueness_index(b, c) < 0.65);
    REQUIRE(uniqueness_index(a, c) >= 0.65);
    SelectionResult r = select_paths({a, b, c}, 0.65);
    REQUIRE(r.selected.size() == 2);
    CHECK(r.selected[0].label() == "SPC FW");
    CHECK(r.selected[1].label() == "SPC KR");
    REQUIRE(r.log.size() == 1);
    CHECK(r.log[0].dropped == "SPC BW");
}

TEST_CASE("u-matrix csv stars the diagonal and lower triangle") {
    std::vector<TrajectoryPath> paths = {
        path_with(WeightScheme::Spc, SearchScheme::Forward, {"a", "b"}),
        path_with(WeightScheme::Spc, SearchScheme::Backward, {"a", "b"})};
    std::ostringstream os;
    write_u_matrix_csv(u_matrix(paths), os);
    CHECK(os.str() ==
          ",SPC FW,SPC BW\n"
          "SPC FW,*,0.500\n"
          "SPC BW,*,*\n");
}
