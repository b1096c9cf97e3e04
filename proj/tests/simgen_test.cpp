#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "csd/dataio.hpp"
#include "csd/error.hpp"
#include "csd/simgen.hpp"

using namespace csd;

namespace {

double corr(const double* a, const double* b, std::size_t n) {
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < n; ++i) ma += a[i], mb += b[i];
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

ScenarioConfig config(Scenario s, std::uint64_t seed) {
    ScenarioConfig c;
    c.scenario = s;
    c.seed = seed;
    return c;
}

} // namespace

TEST(Scenario, Names) {
    EXPECT_EQ(parse_scenario("S3"), Scenario::S3);
    EXPECT_EQ(parse_scenario("S-6"), Scenario::S6);
    EXPECT_EQ(scenario_name(Scenario::S1), "S1");
    EXPECT_THROW(parse_scenario("S7"), ParameterError);
    EXPECT_THROW(parse_scenario("x"), ParameterError);
}

TEST(Config, Validation) {
    ScenarioConfig c;
    EXPECT_NO_THROW(c.validate());
    c.samples = 1;
    EXPECT_THROW(c.validate(), ParameterError);
    c = {};
    c.communities = 0;
    EXPECT_THROW(c.validate(), ParameterError);
    c = {};
    c.size_choices = {1};
    EXPECT_THROW(c.validate(), ParameterError);
}

TEST(FollowerCorrelation, Formula) {
    EXPECT_DOUBLE_EQ(follower_correlation(2, 50, kDenseCommunity), 0.98);
    EXPECT_DOUBLE_EQ(follower_correlation(50, 50, kDenseCommunity), 0.5);
    EXPECT_DOUBLE_EQ(follower_correlation(100, 100, kSparseCommunity), 0.4);
}

TEST(GenerateCommunity, Errors) {
    Rng rng(1);
    EXPECT_THROW(generate_community(10, 5, {0.0, 1.0}, rng), ParameterError);
    EXPECT_THROW(generate_community(10, 1, kDenseCommunity, rng), ParameterError);
    EXPECT_THROW(generate_community(10, 5, {0.8, 0.5}, rng), ParameterError);
}

TEST(GenerateCommunity, PopulationCorrelation) {
    Rng rng(2);
    // With r_min = r_max every follower targets the same correlation.
    auto c = generate_community(100000, 3, {0.7, 0.7}, rng);
    EXPECT_LT(std::abs(corr(c.profiles.column(0), c.profiles.column(1), 100000) - 0.7), 0.01);
    EXPECT_LT(std::abs(corr(c.profiles.column(0), c.profiles.column(2), 100000) - 0.7), 0.01);
    EXPECT_EQ(c.hub, 0u);
}

TEST(GenerateCommunity, CorrelationDecreasesWithIndex) {
    Rng rng(3);
    for (std::size_t size : {50, 100})
        for (auto range : {kDenseCommunity, kSparseCommunity}) {
            auto c = generate_community(100, size, range, rng);
            std::vector<double> r;
            for (std::size_t j = 1; j < size; ++j) r.push_back(corr(c.profiles.column(0), c.profiles.column(j), 100));
            std::vector<double> idx(r.size());
            for (std::size_t j = 0; j < r.size(); ++j) idx[j] = static_cast<double>(j);
            const auto rr = average_ranks(r.data(), r.size());
            EXPECT_LE(corr(idx.data(), rr.data(), r.size()), -0.5);
        }
}

TEST(Scenario, DeterministicAndSized) {
    auto a = generate_scenario(config(Scenario::S1, 5)), b = generate_scenario(config(Scenario::S1, 5));
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(format_labels(a), format_labels(b));
    EXPECT_EQ(format_expression(a.x), format_expression(b.x));
    EXPECT_NE(generate_scenario(config(Scenario::S1, 6)).x, a.x);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto d = generate_scenario(config(Scenario::S1, seed));
        auto sizes = d.truth().cluster_sizes();
        ASSERT_EQ(sizes.size(), 5u);
        for (auto s : sizes) EXPECT_TRUE(s == 50 || s == 100);
        EXPECT_EQ(d.x.samples(), 100u);
        for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(d.labels[d.hubs[k]], static_cast<Label>(k + 1));
    }
}

TEST(Scenario, IrrelevantHalf) {
    for (auto s : {Scenario::S5, Scenario::S6}) {
        auto d = generate_scenario(config(s, 9));
        EXPECT_EQ(d.relevant_count() * 2, d.labels.size());
        for (std::size_t v = d.relevant_count(); v < d.labels.size(); ++v) EXPECT_EQ(d.labels[v], kUnclustered);
    }
    EXPECT_EQ(generate_scenario(config(Scenario::S1, 9)).relevant_count(),
              generate_scenario(config(Scenario::S1, 9)).labels.size());
}

TEST(Scenario, DrawsFromDocumentedSets) {
    std::set<double> leader, noise;
    bool sparse = false, dense = false;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto d6 = generate_scenario(config(Scenario::S6, seed));
        leader.insert(d6.leader_correlation);
        noise.insert(d6.noise_sd);
        auto d2 = generate_scenario(config(Scenario::S2, seed));
        for (auto r : d2.ranges) {
            sparse |= r.r_min == 0.4 && r.r_max == 0.7;
            dense |= r.r_min == 0.5 && r.r_max == 1.0;
        }
    }
    EXPECT_EQ(leader, (std::set<double>{0.2, 0.4, 0.6}));
    EXPECT_EQ(noise, (std::set<double>{0.1, 0.5, 1.0}));
    EXPECT_TRUE(sparse && dense);
    EXPECT_EQ(generate_scenario(config(Scenario::S3, 1)).leader_correlation, 0.8);
    EXPECT_EQ(generate_scenario(config(Scenario::S4, 1)).noise_sd, 1.0);
}

TEST(Scenario, LeaderPairCorrelation) {
    // Mean over replicates of the sample correlation between the first two leaders.
    double sum = 0;
    const int reps = 60;
    for (int r = 0; r < reps; ++r) {
        auto d = generate_scenario(config(Scenario::S3, 1000 + r));
        sum += corr(d.x.column(d.hubs[0]), d.x.column(d.hubs[1]), 100);
    }
    EXPECT_NEAR(sum / reps, 0.8, 0.03);
}

TEST(Scenario, StandardizedBeforeNoise) {
    // Noise-free S4 equals the standardized S1 draw, so the S4 noise is the difference.
    auto s1 = generate_scenario(config(Scenario::S1, 4));
    auto s4 = generate_scenario(config(Scenario::S4, 4));
    auto z = standardize(s1.x);
    for (std::size_t v = 0; v < z.variables(); ++v) {
        double m = 0, ss = 0;
        for (std::size_t i = 0; i < 100; ++i) m += z(i, v);
        m /= 100;
        for (std::size_t i = 0; i < 100; ++i) ss += (z(i, v) - m) * (z(i, v) - m);
        EXPECT_LT(std::abs(m), 1e-12);
        EXPECT_NEAR(ss / 99, 1.0, 1e-12);
    }
    double diff = 0;
    for (std::size_t v = 0; v < z.variables(); ++v)
        for (std::size_t i = 0; i < 100; ++i) diff += (s4.x(i, v) - z(i, v)) * (s4.x(i, v) - z(i, v));
    EXPECT_NEAR(diff / static_cast<double>(z.variables() * 100), 1.0, 0.05);
}

TEST(Scenario, IrrelevantWeaklyCorrelatedWithHubs) {
    double total = 0;
    std::size_t count = 0;
    for (std::uint64_t r = 0; r < 100; ++r) {
        auto d = generate_scenario(config(Scenario::S5, 2000 + r));
        for (std::size_t h : d.hubs)
            for (std::size_t v = d.relevant_count(); v < d.labels.size(); v += 7) {
                total += std::abs(corr(d.x.column(h), d.x.column(v), 100));
                ++count;
            }
    }
    EXPECT_LT(total / static_cast<double>(count), 0.25);
}

TEST(ReplicateSuite, ContractCases) {
    auto c = config(Scenario::S1, 77);
    auto one = replicate_suite(c);
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].x, generate_scenario(c, 0).x);

    c.replicates = 100;
    auto many = replicate_suite(c, 4);
    ASSERT_EQ(many.size(), 100u);
    std::set<std::vector<double>> first_columns;
    for (const auto& d : many) {
        first_columns.emplace(d.x.column(0), d.x.column(0) + 100);
        for (Label l : d.labels) EXPECT_TRUE(l >= 1 && l <= 5);
        EXPECT_EQ(d.labels.size(), d.x.variables());
    }
    EXPECT_EQ(first_columns.size(), 100u);
    auto serial = replicate_suite(c, 1);
    for (std::size_t r = 0; r < 100; ++r) EXPECT_EQ(serial[r].x, many[r].x);

    auto other = config(Scenario::S1, 78);
    EXPECT_NE(generate_scenario(other, 0).x, many[0].x);
}

TEST(Labels, Format) {
    ScenarioConfig c = config(Scenario::S5, 1);
    c.communities = 1;
    c.size_choices = {3};
    auto d = generate_scenario(c);
    EXPECT_EQ(format_labels(d), "variable_id\tcommunity_id\tis_hub\ng0001\t1\t1\ng0002\t1\t0\ng0003\t1\t0\n"
                                "g0004\t0\t0\ng0005\t0\t0\ng0006\t0\t0\n");
}
