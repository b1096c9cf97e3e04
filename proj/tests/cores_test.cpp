#include <gtest/gtest.h>

#include "csd/cores.hpp"
#include "csd/error.hpp"
#include "csd/evaluation.hpp"
#include "csd/simgen.hpp"
#include "csd/dataio.hpp"
#include "oracles.hpp"

using namespace csd;

namespace {

using Sets = std::vector<std::vector<std::size_t>>;

SpanningTree tree_of(std::size_t p, std::vector<Edge> edges) { return SpanningTree(WeightedGraph(p, std::move(edges))); }

} // namespace

TEST(DetectCores, TwoPathsJoinedByWeakEdge) {
    auto t = tree_of(6, {{0, 1, 0.9}, {1, 2, 0.8}, {2, 3, 0.1}, {3, 4, 0.9}, {4, 5, 0.8}});
    auto q = detect_cores(t, 2);
    EXPECT_EQ(q.cores, (Sets{{0, 1, 2}, {3, 4, 5}}));
    EXPECT_TRUE(q.outer.empty());
}

TEST(DetectCores, MinSizeAboveNodeCount) {
    auto t = tree_of(3, {{0, 1, 0.9}, {1, 2, 0.8}});
    auto q = detect_cores(t, 4);
    EXPECT_TRUE(q.cores.empty());
    EXPECT_EQ(q.outer, (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_THROW(complete_clusters(q, t), ParameterError);
}

TEST(DetectCores, StarIsOneCore) {
    auto t = tree_of(5, {{0, 1, 0.9}, {0, 2, 0.7}, {0, 3, 0.5}, {0, 4, 0.3}});
    auto q = detect_cores(t, 2);
    EXPECT_EQ(q.cores, (Sets{{0, 1, 2, 3, 4}}));
    EXPECT_TRUE(q.outer.empty());
}

TEST(DetectCores, RejectsZeroMinSize) {
    auto t = tree_of(2, {{0, 1, 0.5}});
    EXPECT_THROW(detect_cores(t, 0), ParameterError);
}

TEST(DetectCores, SplitDropsPrunedMembers) {
    // Leaf 2 is cut off before the split at 0.3, so the split leaves it outer.
    auto t = tree_of(5, {{0, 1, 0.9}, {1, 2, 0.2}, {1, 3, 0.3}, {3, 4, 0.9}});
    auto q = detect_cores(t, 2);
    EXPECT_EQ(q.cores, (Sets{{0, 1}, {3, 4}}));
    EXPECT_EQ(q.outer, (std::vector<std::size_t>{2}));
}

TEST(DetectCores, MatchesThresholdHierarchyOracle) {
    Rng rng(2024);
    for (int t = 0; t < 300; ++t) {
        const std::size_t p = 2 + rng.below(11);
        const double density = 0.2 + 0.8 * rng.uniform();
        auto w = oracle::random_connected(p, density, rng);
        const std::size_t n = 2 + t % 3;
        auto q = detect_cores(maximum_spanning_tree(w), n);
        auto expected = oracle::threshold_hierarchy_cores(oracle::dense(w), n);
        ASSERT_EQ(q.cores, expected.cores) << "case " << t << " p=" << p << " n=" << n;
        ASSERT_EQ(q.outer, expected.outer) << "case " << t;
    }
}

TEST(DetectCores, FamilyInvariants) {
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        auto w = oracle::random_connected(5 + rng.below(30), 0.5, rng);
        const std::size_t n = 1 + rng.below(6);
        auto q = detect_cores(maximum_spanning_tree(w), n);
        std::vector<int> seen(w.size(), 0);
        for (const auto& c : q.cores) {
            EXPECT_GE(c.size(), n);
            EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
            for (auto v : c) ++seen[v];
        }
        for (auto v : q.outer) ++seen[v];
        for (int s : seen) EXPECT_EQ(s, 1);
        for (std::size_t k = 1; k < q.cores.size(); ++k) EXPECT_LT(q.cores[k - 1][0], q.cores[k][0]);
        EXPECT_EQ(q.core_node_count() + q.outer.size(), w.size());
    }
}

TEST(CompleteClusters, Examples) {
    // a-b(0.9)-x(0.7)-d(0.4)-e(0.9) with cores {a,b}, {d,e}
    auto t = tree_of(5, {{0, 1, 0.9}, {1, 2, 0.7}, {2, 3, 0.4}, {3, 4, 0.9}});
    CoreStructureFamily q{{{0, 1}, {3, 4}}, {2}, 2, 5};
    EXPECT_EQ(complete_clusters(q, t).labels(), (std::vector<Label>{1, 1, 1, 2, 2}));

    CoreStructureFamily all{{{0, 1, 2}, {3, 4}}, {}, 2, 5};
    EXPECT_EQ(complete_clusters(all, t).labels(), (std::vector<Label>{1, 1, 1, 2, 2}));

    CoreStructureFamily single{{{3, 4}}, {0, 1, 2}, 2, 5};
    EXPECT_EQ(complete_clusters(single, t).labels(), (std::vector<Label>{1, 1, 1, 1, 1}));
}

TEST(CompleteClusters, NearestNeighborsShareCluster) {
    Rng rng(17);
    for (int t = 0; t < 60; ++t) {
        auto w = oracle::random_connected(10 + rng.below(30), 0.7, rng);
        auto r = core_structure_clustering(w, 2 + rng.below(3));
        EXPECT_EQ(r.partition.unclustered_count(), 0u);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double* row = w.row(i);
            std::size_t arg = 0;
            int count = 0;
            double best = -1;
            for (std::size_t j = 0; j < w.size(); ++j) {
                if (j == i) continue;
                if (row[j] > best) best = row[j], arg = j, count = 1;
                else if (row[j] == best) ++count;
            }
            if (count == 1) EXPECT_EQ(r.partition[i], r.partition[arg]);
        }
        for (std::size_t k = 0; k < r.cores.cores.size(); ++k)
            for (auto v : r.cores.cores[k]) EXPECT_EQ(r.partition[v], static_cast<Label>(k + 1));
    }
}

TEST(Csd, TwoBlocksJoinedByWeakEdge) {
    SimilarityMatrix w(6);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) {
            w.set(i, j, 0.8 + 0.01 * static_cast<double>(i + j));
            w.set(i + 3, j + 3, 0.7 + 0.01 * static_cast<double>(i + j));
        }
    w.set(2, 3, 0.05);
    auto r = core_structure_clustering(w, 2);
    EXPECT_EQ(r.partition.labels(), (std::vector<Label>{1, 1, 1, 2, 2, 2}));
    EXPECT_THROW(core_structure_clustering(w, 7), ParameterError);
}

TEST(Csd, Deterministic) {
    Rng rng(1);
    auto w = oracle::random_connected(60, 0.3, rng);
    auto a = core_structure_clustering(w, 4), b = core_structure_clustering(w, 4);
    EXPECT_EQ(a.partition, b.partition);
    EXPECT_EQ(a.cores, b.cores);
}

TEST(Sweep, SingleEntryMatchesCsdAndJobsAgree) {
    Rng rng(4);
    auto w = oracle::random_connected(80, 0.5, rng);
    auto s = sweep(w, {3});
    ASSERT_EQ(s.entries.size(), 1u);
    EXPECT_TRUE(s.consecutive_ari.empty());
    EXPECT_EQ(s.entries[0].result.partition, core_structure_clustering(w, 3).partition);

    std::vector<std::size_t> ns{2, 3, 4, 5, 6};
    auto serial = sweep(w, ns, 1), parallel = sweep(w, ns, 4);
    ASSERT_EQ(serial.entries.size(), parallel.entries.size());
    for (std::size_t k = 0; k < ns.size(); ++k)
        EXPECT_EQ(serial.entries[k].result.partition, parallel.entries[k].result.partition);
    EXPECT_EQ(serial.consecutive_ari, parallel.consecutive_ari);
    EXPECT_THROW(sweep(w, {3, 3}), ParameterError);
    EXPECT_THROW(sweep(w, {}), ParameterError);
}

TEST(Sweep, CoreCountNonIncreasingOnScenarios) {
    for (int s = 0; s < 6; ++s) {
        ScenarioConfig cfg;
        cfg.scenario = static_cast<Scenario>(s);
        cfg.seed = 100 + s;
        auto data = generate_scenario(cfg);
        auto w = similarity_matrix(data.x, Correlation::Pearson);
        auto tree = maximum_spanning_tree(w);
        std::size_t last = SIZE_MAX;
        for (std::size_t n : {2, 5, 10, 20, 40}) {
            auto q = detect_cores(tree, n);
            EXPECT_LE(q.core_count(), last) << scenario_name(cfg.scenario) << " n=" << n;
            last = q.core_count();
        }
    }
}

TEST(Csd, RecoversScenarioOne) {
    ScenarioConfig cfg;
    cfg.seed = 42;
    auto data = generate_scenario(cfg);
    auto r = core_structure_clustering(similarity_matrix(data.x, Correlation::Pearson), 10);
    EXPECT_GE(adjusted_rand(r.partition, data.truth()), 0.95);
}
