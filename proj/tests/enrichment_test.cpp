#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "csd/enrichment.hpp"
#include "csd/error.hpp"
#include "oracles.hpp"

using namespace csd;

namespace {

AnnotationSet make(std::size_t universe, std::map<std::string, std::vector<int>> terms) {
    AnnotationSet a;
    for (std::size_t i = 0; i < universe; ++i) a.universe.insert("g" + std::to_string(i));
    for (auto& [t, ids] : terms)
        for (int i : ids) a.terms[t].insert("g" + std::to_string(i));
    return a;
}

std::vector<std::string> ids(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back("g" + std::to_string(i));
    return out;
}

} // namespace

TEST(Hypergeometric, Examples) {
    EXPECT_NEAR(hypergeometric_upper_tail(5, 10, 5, 5), 1.0 / 252.0, 1e-15);
    EXPECT_EQ(hypergeometric_upper_tail(0, 10, 0, 5), 1.0);
    EXPECT_EQ(hypergeometric_upper_tail(0, 10, 3, 4), 1.0);
    EXPECT_EQ(hypergeometric_upper_tail(4, 10, 3, 4), 0.0);
}

TEST(Hypergeometric, MatchesExactRational) {
    for (std::uint64_t n = 1; n <= 30; ++n)
        for (std::uint64_t s = 0; s <= n; ++s)
            for (std::uint64_t d = 0; d <= n; ++d)
                for (std::uint64_t k = 0; k <= std::min(s, d); ++k) {
                    const long double want = oracle::hypergeometric_tail(k, n, s, d);
                    const double got = hypergeometric_upper_tail(k, n, s, d);
                    ASSERT_LE(std::abs(got - static_cast<double>(want)), 1e-10 * static_cast<double>(want))
                        << k << " " << n << " " << s << " " << d;
                }
}

TEST(Enrichment, PerfectOverlapAndBonferroni) {
    auto a = make(10, {{"t1", {0, 1, 2, 3, 4}}, {"t2", {5}}});
    auto p = Partition::from_labels(std::vector<Label>{1, 1, 1, 1, 1, 2, 2, 2, 2, 2});
    auto rows = hypergeometric_enrichment(p, ids(10), a, 0.05);
    // Every (cluster, term) pair is tested: 2 clusters x 2 terms.
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].cluster, 1);
    EXPECT_EQ(rows[0].term, "t1");
    EXPECT_EQ(rows[0].overlap, 5u);
    EXPECT_NEAR(rows[0].p_value, 1.0 / 252.0, 1e-15);
    EXPECT_NEAR(rows[0].adjusted_p_value, 4.0 / 252.0, 1e-15);
    EXPECT_TRUE(rows[0].significant);
    EXPECT_EQ(rows[0].rank, 1u);
    for (const auto& r : rows) {
        EXPECT_LE(r.overlap, std::min(r.cluster_size, r.term_size));
        EXPECT_EQ(r.adjusted_p_value, std::min(1.0, r.p_value * 4.0));
        EXPECT_EQ(r.universe_size, 10u);
        if (r.overlap == 0) EXPECT_EQ(r.p_value, 1.0);
    }
}

TEST(Enrichment, SkipsUnclusteredAndValidates) {
    auto a = make(6, {{"t", {0, 1}}});
    auto p = Partition::from_labels(std::vector<Label>{1, 1, 0, 0, 2, 2});
    auto rows = hypergeometric_enrichment(p, ids(6), a, 0.05);
    EXPECT_EQ(rows.size(), 2u);
    for (const auto& r : rows) EXPECT_NE(r.cluster, 0);

    auto bad = a;
    bad.terms["t"].insert("zz");
    EXPECT_THROW(bad.validate(), DataError);
    EXPECT_THROW(hypergeometric_enrichment(p, ids(6), AnnotationSet{}, 0.05), DataError);
    EXPECT_THROW(hypergeometric_enrichment(p, ids(6), a, 0.0), ParameterError);
    auto missing = ids(6);
    missing[0] = "nope";
    EXPECT_THROW(hypergeometric_enrichment(p, missing, a, 0.05), DataError);
}

TEST(Enrichment, RestrictedUniverse) {
    auto a = make(10, {{"t", {0, 1, 8}}});
    auto r = a.restricted_to({"g0", "g1", "g2"});
    EXPECT_EQ(r.universe.size(), 3u);
    EXPECT_EQ(r.terms.at("t").size(), 2u);
}

TEST(Annotations, ReadFile) {
    auto dir = std::filesystem::temp_directory_path() / "csd_enrich_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "a.tsv") << "variable_id\tterm_id\tterm_name\ng1\tGO:1\tcell cycle\ng2\tGO:1\tcell cycle\ng2\tGO:2\n";
    auto a = read_annotations(dir / "a.tsv");
    EXPECT_EQ(a.universe.size(), 2u);
    EXPECT_EQ(a.terms.at("GO:1").size(), 2u);
    EXPECT_EQ(a.term_names.at("GO:1"), "cell cycle");
    std::ofstream(dir / "empty.tsv") << "";
    EXPECT_THROW(read_annotations(dir / "empty.tsv"), DataError);
    std::ofstream(dir / "ragged.tsv") << "g1\n";
    EXPECT_THROW(read_annotations(dir / "ragged.tsv"), DataError);
    std::filesystem::remove_all(dir);
}
