#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "csd/error.hpp"
#include "csd/graph.hpp"
#include "csd/tsv.hpp"
#include "oracles.hpp"

using namespace csd;

namespace {

SimilarityMatrix triangle(double ab, double bc, double ac) {
    SimilarityMatrix w(3);
    w.set(0, 1, ab);
    w.set(1, 2, bc);
    w.set(0, 2, ac);
    return w;
}

std::vector<std::vector<std::size_t>> comps(const WeightedGraph& g) { return connected_components(g); }

} // namespace

TEST(SimilarityMatrix, RejectsAsymmetry) {
    std::vector<double> v{0, 0.5, 0.4, 0};
    try {
        SimilarityMatrix w(2, v);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos) << e.what();
    }
}

TEST(SimilarityMatrix, RejectsDiagonalAndRange) {
    EXPECT_THROW(SimilarityMatrix(2, std::vector<double>{0.1, 0.5, 0.5, 0}), DataError);
    EXPECT_THROW(SimilarityMatrix(2, std::vector<double>{0, 1.5, 1.5, 0}), DataError);
    EXPECT_THROW(SimilarityMatrix(2, std::vector<double>{0, -0.1, -0.1, 0}), DataError);
    EXPECT_THROW(SimilarityMatrix(2, std::vector<double>{0, 0.5, 0.5}), DataError);
}

TEST(ThresholdGraph, IndicatorExamples) {
    auto w = triangle(0.9, 0.5, 0.2);
    EXPECT_EQ(threshold_graph(w, 0.0).edge_count(), 3u);
    auto g = threshold_graph(w, 0.6);
    ASSERT_EQ(g.edge_count(), 1u);
    EXPECT_EQ(g.edges()[0], (Edge{0, 1, 0.9}));
    EXPECT_EQ(threshold_graph(w, 1.0).edge_count(), 0u);
    EXPECT_THROW(threshold_graph(w, 1.1), ParameterError);
    EXPECT_THROW(threshold_graph(w, -0.1), ParameterError);
}

TEST(ThresholdGraph, Monotone) {
    Rng rng(7);
    auto w = oracle::random_connected(12, 0.6, rng);
    for (double a = 0; a <= 1.0; a += 0.1)
        for (double b = a; b <= 1.0; b += 0.1) {
            auto lo = threshold_graph(w, a).edges(), hi = threshold_graph(w, b).edges();
            for (const auto& e : hi) EXPECT_NE(std::find(lo.begin(), lo.end(), e), lo.end());
        }
}

TEST(Components, Examples) {
    EXPECT_EQ(comps(WeightedGraph(4, {})), (std::vector<std::vector<std::size_t>>{{0}, {1}, {2}, {3}}));
    WeightedGraph g(5, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}});
    EXPECT_EQ(comps(g), (std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3, 4}}));
    EXPECT_EQ(component_of(WeightedGraph(4, {}), 2), (std::vector<std::size_t>{2}));
    EXPECT_EQ(component_of(WeightedGraph(3, {{0, 1, 1}, {1, 2, 1}}), 1), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(component_of(WeightedGraph(5, {{0, 1, 1}, {3, 4, 1}}), 4), (std::vector<std::size_t>{3, 4}));
    EXPECT_THROW(component_of(g, 5), ParameterError);
}

TEST(WeightedGraph, RejectsBadEdges) {
    EXPECT_THROW(WeightedGraph(3, {{0, 0, 1.0}}), DataError);
    EXPECT_THROW(WeightedGraph(3, {{0, 1, 0.0}}), DataError);
    EXPECT_THROW(WeightedGraph(3, {{0, 1, 0.5}, {1, 0, 0.5}}), DataError);
    EXPECT_THROW(WeightedGraph(3, {{0, 3, 0.5}}), DataError);
}

TEST(SpanningTreeShape, Validated) {
    EXPECT_THROW(SpanningTree(WeightedGraph(3, {{0, 1, 1}})), DataError);
    EXPECT_THROW(SpanningTree(WeightedGraph(4, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}})), DataError);
    EXPECT_NO_THROW(SpanningTree(WeightedGraph(3, {{0, 1, 1}, {1, 2, 1}})));
}

TEST(MaximumSpanningTree, Examples) {
    SimilarityMatrix path(3);
    path.set(0, 1, 0.9);
    path.set(1, 2, 0.8);
    EXPECT_EQ(maximum_spanning_tree(path).edges(), (std::vector<Edge>{{0, 1, 0.9}, {1, 2, 0.8}}));
    EXPECT_EQ(maximum_spanning_tree(triangle(0.9, 0.8, 0.2)).edges(), (std::vector<Edge>{{0, 1, 0.9}, {1, 2, 0.8}}));
}

TEST(MaximumSpanningTree, MatchesKruskalOnCompleteGraphs) {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        auto w = oracle::random_connected(6 + t % 10, 1.0, rng);
        EXPECT_EQ(maximum_spanning_tree(w).edges(), oracle::kruskal(oracle::dense(w)));
    }
}

TEST(MaximumSpanningTree, TieBreakIsLexicographic) {
    SimilarityMatrix w(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) w.set(i, j, 0.5);
    EXPECT_EQ(maximum_spanning_tree(w).edges(), oracle::kruskal(oracle::dense(w)));
    EXPECT_EQ(maximum_spanning_tree(w).edges(), (std::vector<Edge>{{0, 1, 0.5}, {0, 2, 0.5}, {0, 3, 0.5}}));
}

TEST(MaximumSpanningTree, BottleneckProperty) {
    Rng rng(3);
    for (int t = 0; t < 60; ++t) {
        auto w = oracle::random_connected(2 + t % 14, 0.4, rng);
        auto tree = maximum_spanning_tree(w);
        EXPECT_EQ(tree.edges().size(), w.size() - 1);
        EXPECT_EQ(connected_components(tree.graph()).size(), 1u);
        auto cap = oracle::max_capacity(oracle::dense(w));
        auto path = oracle::tree_path_minimum(tree);
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = 0; j < w.size(); ++j)
                if (i != j) EXPECT_EQ(path[i][j], cap[i][j]);
    }
}

TEST(MaximumSpanningTree, PreservesThresholdComponents) {
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        auto w = oracle::random_connected(3 + t % 13, 0.5, rng);
        auto tree = maximum_spanning_tree(w);
        for (double lambda : w.values()) {
            if (lambda <= 0) continue;
            EXPECT_EQ(comps(threshold_graph(w, lambda)), comps(threshold_graph(tree.graph(), lambda)));
        }
    }
}

TEST(MaximumSpanningTree, DisconnectedNamesComponentCount) {
    SimilarityMatrix w(5);
    w.set(0, 1, 0.5);
    w.set(2, 3, 0.5);
    EXPECT_EQ(positive_component_count(w), 3u);
    try {
        maximum_spanning_tree(w);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
    }
}

TEST(SimilarityTsv, RoundTripWithAndWithoutLabels) {
    auto dir = std::filesystem::temp_directory_path() / "csd_graph_test";
    std::filesystem::create_directories(dir);
    Rng rng(1);
    auto w = oracle::random_connected(7, 0.5, rng);
    tsv::write_atomic(dir / "w.tsv", format_similarity(w));
    auto back = read_similarity(dir / "w.tsv");
    EXPECT_EQ(back.values(), w.values());
    EXPECT_EQ(back.label(0), "n1");

    SimilarityMatrix labeled(2, std::vector<double>{0, 0.25, 0.25, 0}, {"a", "b"});
    tsv::write_atomic(dir / "l.tsv", format_similarity(labeled));
    auto back2 = read_similarity(dir / "l.tsv");
    EXPECT_EQ(back2.labels(), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(back2.values(), labeled.values());

    std::ofstream(dir / "bad.tsv") << "0\t0.5\n0.4\t0\n";
    try {
        read_similarity(dir / "bad.tsv");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("column"), std::string::npos) << e.what();
    }
    std::filesystem::remove_all(dir);
}
