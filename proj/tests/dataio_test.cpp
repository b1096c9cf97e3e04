#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "csd/dataio.hpp"
#include "csd/error.hpp"
#include "csd/rng.hpp"
#include "csd/tsv.hpp"

using namespace csd;

namespace {

ExpressionMatrix random_matrix(std::size_t n, std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    ExpressionMatrix x(n, p);
    for (std::size_t v = 0; v < p; ++v)
        for (std::size_t s = 0; s < n; ++s) x(s, v) = rng.normal();
    return x;
}

double pearson_two_pass(const ExpressionMatrix& x, std::size_t a, std::size_t b) {
    const std::size_t n = x.samples();
    double ma = 0, mb = 0;
    for (std::size_t s = 0; s < n; ++s) ma += x(s, a), mb += x(s, b);
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t s = 0; s < n; ++s) {
        sab += (x(s, a) - ma) * (x(s, b) - mb);
        saa += (x(s, a) - ma) * (x(s, a) - ma);
        sbb += (x(s, b) - mb) * (x(s, b) - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

} // namespace

TEST(LoadExpression, WellFormedAndMissing) {
    auto x = parse_expression("id\ta\tb\ns1\t1\t2\ns2\t3\t4\n");
    EXPECT_EQ(x.samples(), 2u);
    EXPECT_EQ(x.variables(), 2u);
    EXPECT_EQ(x.missing_count(), 0u);
    EXPECT_EQ(x(1, 0), 3.0);
    EXPECT_EQ(x.variable_ids(), (std::vector<std::string>{"a", "b"}));

    auto m = parse_expression("id\ta\tb\ns1\t1\t\ns2\tNA\t4\n");
    EXPECT_TRUE(m.missing(0, 1));
    EXPECT_TRUE(m.missing(1, 0));
    EXPECT_EQ(m.missing_count(), 2u);
}

TEST(LoadExpression, Errors) {
    try {
        parse_expression("id\ta\ta\ns1\t1\t2\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos) << e.what();
    }
    try {
        parse_expression("id\ta\tb\ns1\t1\t2\ns2\t1\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find(":3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_expression("id\ta\ns1\tx\n"), DataError);
    EXPECT_THROW(parse_expression("id\ta\ns1\t1\ns1\t2\n"), DataError);
    EXPECT_THROW(parse_expression(""), DataError);
    EXPECT_THROW(load_expression("/nonexistent/file.tsv"), DataError);
}

TEST(LoadExpression, RoundTrip) {
    auto x = random_matrix(5, 4, 1);
    x.set_missing(2, 3);
    auto dir = std::filesystem::temp_directory_path() / "csd_dataio_test";
    std::filesystem::create_directories(dir);
    tsv::write_atomic(dir / "x.tsv", format_expression(x));
    EXPECT_EQ(load_expression(dir / "x.tsv"), x);
    std::filesystem::remove_all(dir);
}

TEST(Filter, Thresholds) {
    // 100 samples: variable 0 has 21 missing, variable 1 exactly 20.
    ExpressionMatrix x(100, 4);
    for (std::size_t s = 0; s < 100; ++s) {
        x(s, 0) = x(s, 1) = (s % 2) ? 1.0 : -1.0;
        x(s, 2) = (s % 2 ? 1.0 : -1.0) * 0.39 * std::sqrt(99.0 / 100.0);
        x(s, 3) = (s % 2 ? 1.0 : -1.0) * 0.41 * std::sqrt(99.0 / 100.0);
    }
    for (std::size_t s = 0; s < 21; ++s) x.set_missing(s, 0);
    for (std::size_t s = 0; s < 20; ++s) x.set_missing(s, 1);
    auto [out, rep] = filter_variables(x, 0.2, 0.4);
    EXPECT_EQ(out.variable_ids(), (std::vector<std::string>{"v2", "v4"}));
    ASSERT_EQ(rep.removed_missing.size(), 1u);
    EXPECT_EQ(rep.removed_missing[0].id, "v1");
    EXPECT_DOUBLE_EQ(rep.removed_missing[0].value, 0.21);
    ASSERT_EQ(rep.removed_low_sd.size(), 1u);
    EXPECT_EQ(rep.removed_low_sd[0].id, "v3");
    EXPECT_NEAR(rep.removed_low_sd[0].value, 0.39, 1e-12);
    EXPECT_EQ(rep.output_variables, 2u);

    auto [same, rep2] = filter_variables(x, 1.0, 0.0);
    EXPECT_EQ(same, x);
    EXPECT_TRUE(rep2.removed_missing.empty() && rep2.removed_low_sd.empty());

    EXPECT_THROW(filter_variables(x, 0.0, 100.0), DataError);
    EXPECT_THROW(filter_variables(x, 1.5, 0.4), ParameterError);
    EXPECT_THROW(filter_variables(x, 0.2, -1.0), ParameterError);
    EXPECT_NE(rep.format().find("removed_missing\tv1"), std::string::npos);
}

TEST(Impute, Examples) {
    auto full = random_matrix(6, 5, 2);
    auto [same, rep] = knn_impute(full, 3);
    EXPECT_EQ(same, full);
    EXPECT_EQ(rep.imputed_cells, 0u);

    // Variable 0 equals variable 2 wherever observed; variable 1 is far away.
    ExpressionMatrix x(4, 3);
    const double g[] = {1, 2, 3, 4}, far[] = {10, -10, 10, -10};
    for (std::size_t s = 0; s < 4; ++s) {
        x(s, 0) = g[s];
        x(s, 1) = far[s];
        x(s, 2) = g[s] + (s == 2 ? 0.5 : 0.0);
    }
    x.set_missing(2, 0);
    auto [out, r1] = knn_impute(x, 1);
    EXPECT_EQ(out(2, 0), 3.5);
    EXPECT_FALSE(out.missing(2, 0));
    EXPECT_EQ(r1.imputed_cells, 1u);
    auto [avg, r2] = knn_impute(x, 2);
    EXPECT_EQ(avg(2, 0), (3.5 + 10.0) / 2.0);

    ExpressionMatrix all(3, 2);
    for (std::size_t s = 0; s < 3; ++s) all.set_missing(s, 0);
    EXPECT_THROW(knn_impute(all, 2), DataError);
    EXPECT_THROW(knn_impute(x, 0), ParameterError);

    ExpressionMatrix lonely(2, 2);
    lonely.set_missing(0, 0);
    lonely.set_missing(0, 1);
    EXPECT_THROW(knn_impute(lonely, 1), DataError);
}

TEST(Impute, ObservedCellsUntouched) {
    auto x = random_matrix(20, 15, 3);
    Rng rng(4);
    for (int t = 0; t < 30; ++t) x.set_missing(rng.below(20), rng.below(15));
    auto [out, rep] = knn_impute(x, 5);
    EXPECT_EQ(out.missing_count(), 0u);
    EXPECT_EQ(rep.imputed_cells, x.missing_count());
    for (std::size_t s = 0; s < 20; ++s)
        for (std::size_t v = 0; v < 15; ++v)
            if (!x.missing(s, v)) EXPECT_EQ(out(s, v), x(s, v));
}

TEST(Standardize, Examples) {
    ExpressionMatrix x(2, 1);
    x(0, 0) = 0;
    x(1, 0) = 2;
    auto z = standardize(x);
    EXPECT_NEAR(z(0, 0), -std::sqrt(2.0) / 2, 1e-15);
    EXPECT_NEAR(z(1, 0), std::sqrt(2.0) / 2, 1e-15);

    auto r = standardize(random_matrix(30, 4, 5));
    auto again = standardize(r);
    for (std::size_t s = 0; s < 30; ++s)
        for (std::size_t v = 0; v < 4; ++v) EXPECT_NEAR(again(s, v), r(s, v), 1e-12);

    ExpressionMatrix c(3, 2);
    c(0, 1) = 1;
    try {
        standardize(c);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("v1"), std::string::npos) << e.what();
    }
}

TEST(Similarity, PearsonAndSpearman) {
    ExpressionMatrix x(6, 3);
    for (std::size_t s = 0; s < 6; ++s) {
        const double v = static_cast<double>(s * s) - 3.0 * static_cast<double>(s) + 0.5 * (s % 2);
        x(s, 0) = v;
        x(s, 1) = 2 * v + 3;
        x(s, 2) = std::exp(v / 3.0);
    }
    auto p = similarity_matrix(x, Correlation::Pearson);
    EXPECT_NEAR(p(0, 1), 1.0, 1e-12);
    EXPECT_EQ(p(0, 0), 0.0);
    auto sp = similarity_matrix(x, Correlation::Spearman);
    EXPECT_NEAR(sp(0, 2), 1.0, 1e-12);

    auto r = random_matrix(12, 3, 6);
    auto w = similarity_matrix(r, Correlation::Pearson);
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            if (a != b) EXPECT_NEAR(w(a, b), std::abs(pearson_two_pass(r, a, b)), 1e-12);

    ExpressionMatrix flat(4, 2);
    flat(0, 0) = 1;
    EXPECT_THROW(similarity_matrix(flat, Correlation::Pearson), DataError);
    ExpressionMatrix holes = r;
    holes.set_missing(0, 0);
    EXPECT_THROW(similarity_matrix(holes, Correlation::Pearson), DataError);
}

TEST(Similarity, SignedKeepsPositivePart) {
    ExpressionMatrix x(4, 2);
    for (std::size_t s = 0; s < 4; ++s) {
        x(s, 0) = static_cast<double>(s);
        x(s, 1) = -static_cast<double>(s);
    }
    EXPECT_NEAR(similarity_matrix(x, Correlation::Pearson, true)(0, 1), 1.0, 1e-12);
    EXPECT_EQ(similarity_matrix(x, Correlation::Pearson, false)(0, 1), 0.0);
}

TEST(Similarity, SpearmanMonotoneInvariance) {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        auto x = random_matrix(15, 5, 100 + t);
        auto y = x;
        for (std::size_t v = 0; v < 5; ++v) {
            const double a = 0.1 + rng.uniform(), b = rng.normal();
            for (std::size_t s = 0; s < 15; ++s) y(s, v) = std::exp(a * x(s, v)) + b;
        }
        EXPECT_EQ(similarity_matrix(x, Correlation::Spearman).values(),
                  similarity_matrix(y, Correlation::Spearman).values());
    }
}

TEST(Similarity, ValidForRandomInputs) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto x = random_matrix(8, 30, seed);
        for (auto m : {Correlation::Pearson, Correlation::Spearman}) {
            auto w = similarity_matrix(x, m);
            EXPECT_NO_THROW(SimilarityMatrix(w.size(), w.values()));
        }
    }
}

TEST(Ranks, Ties) {
    const double v[] = {3, 1, 3, 2, 3};
    EXPECT_EQ(average_ranks(v, 5), (std::vector<double>{4, 1, 4, 2, 4}));
}

TEST(Pipeline, Deterministic) {
    auto x = random_matrix(20, 30, 9);
    Rng rng(1);
    for (int t = 0; t < 25; ++t) x.set_missing(rng.below(20), rng.below(30));
    auto run = [&] {
        auto [f, r1] = filter_variables(x, 0.2, 0.4);
        auto [i, r2] = knn_impute(f, 10);
        return format_similarity(similarity_matrix(i, Correlation::Spearman));
    };
    EXPECT_EQ(run(), run());
}
