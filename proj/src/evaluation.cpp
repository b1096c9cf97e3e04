#include "csd/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "csd/error.hpp"

namespace csd {

DissimilarityMatrix::DissimilarityMatrix(std::size_t p, std::vector<double> values)
    : p_(p), values_(std::move(values)) {
    if (values_.size() != p * p) throw DataError("dissimilarity values must have p*p entries");
    for (std::size_t i = 0; i < p; ++i) {
        if (values_[i * p + i] != 0.0) throw DataError("dissimilarity diagonal must be zero");
        for (std::size_t j = 0; j < p; ++j) {
            if (!(values_[i * p + j] >= 0.0))
                throw DataError("negative dissimilarity at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
            if (values_[i * p + j] != values_[j * p + i])
                throw DataError("dissimilarity not symmetric at (" + std::to_string(i + 1) + "," +
                                std::to_string(j + 1) + ")");
        }
    }
}

DissimilarityMatrix DissimilarityMatrix::from_similarity(const SimilarityMatrix& w) {
    const std::size_t p = w.size();
    std::vector<double> values(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            if (i != j) values[i * p + j] = 1.0 - w(i, j);
    return DissimilarityMatrix(p, std::move(values));
}

namespace {

void require_same_size(std::size_t p, const Partition& partition) {
    if (partition.size() != p)
        throw DataError("partition covers " + std::to_string(partition.size()) + " nodes, matrix has " +
                        std::to_string(p));
}

} // namespace

double dunn_index(const DissimilarityMatrix& d, const Partition& partition) {
    const std::size_t p = d.size();
    require_same_size(p, partition);
    if (partition.cluster_count() < 2) throw ParameterError("Dunn index needs at least two clusters");

    double min_between = std::numeric_limits<double>::infinity();
    double max_diameter = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        if (partition[i] == kUnclustered) continue;
        for (std::size_t j = i + 1; j < p; ++j) {
            if (partition[j] == kUnclustered) continue;
            const double dij = d(i, j);
            if (partition[i] == partition[j]) max_diameter = std::max(max_diameter, dij);
            else min_between = std::min(min_between, dij);
        }
    }
    if (max_diameter == 0.0)
        throw NumericalError("Dunn index undefined: every cluster has zero diameter");
    return min_between / max_diameter;
}

SilhouetteResult silhouette(const DissimilarityMatrix& d, const Partition& partition) {
    const std::size_t p = d.size();
    require_same_size(p, partition);
    const std::size_t k = partition.cluster_count();
    if (k < 2) throw ParameterError("silhouette needs at least two clusters");
    const auto sizes = partition.cluster_sizes();

    SilhouetteResult out;
    out.values.assign(p, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> sums(k);
    double total = 0.0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < p; ++i) {
        if (partition[i] == kUnclustered) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < p; ++j)
            if (j != i && partition[j] != kUnclustered) sums[static_cast<std::size_t>(partition[j] - 1)] += d(i, j);
        const auto own = static_cast<std::size_t>(partition[i] - 1);
        double s = 0.0;
        if (sizes[own] > 1) {
            const double a = sums[own] / static_cast<double>(sizes[own] - 1);
            double b = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c)
                if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
            const double denom = std::max(a, b);
            s = denom > 0.0 ? (b - a) / denom : 0.0;
        }
        out.values[i] = s;
        total += s;
        ++counted;
    }
    out.mean = total / static_cast<double>(counted);
    return out;
}

double figure_of_merit(const ExpressionMatrix& x, const Partition& partition) {
    require_same_size(x.variables(), partition);
    if (x.missing_count() > 0)
        throw DataError("figure of merit needs complete data; impute missing values first");
    const std::size_t k = partition.cluster_count();
    const auto sizes = partition.cluster_sizes();
    const std::size_t clustered = x.variables() - partition.unclustered_count();
    if (clustered == 0) throw ParameterError("figure of merit needs at least one clustered variable");

    double fom = 0.0;
    std::vector<double> means(k);
    for (std::size_t s = 0; s < x.samples(); ++s) {
        std::fill(means.begin(), means.end(), 0.0);
        for (std::size_t v = 0; v < x.variables(); ++v)
            if (partition[v] != kUnclustered) means[static_cast<std::size_t>(partition[v] - 1)] += x(s, v);
        for (std::size_t c = 0; c < k; ++c) means[c] /= static_cast<double>(sizes[c]);
        double sq = 0.0;
        for (std::size_t v = 0; v < x.variables(); ++v) {
            if (partition[v] == kUnclustered) continue;
            const double dev = x(s, v) - means[static_cast<std::size_t>(partition[v] - 1)];
            sq += dev * dev;
        }
        fom += std::sqrt(sq / static_cast<double>(clustered));
    }
    return fom;
}

double modularity(const SimilarityMatrix& w, const Partition& partition) {
    const std::size_t p = w.size();
    require_same_size(p, partition);
    const std::size_t k = partition.cluster_count();
    std::vector<double> internal(k, 0.0), degree(k, 0.0);
    double m = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        if (partition[i] == kUnclustered) continue;
        const auto ci = static_cast<std::size_t>(partition[i] - 1);
        for (std::size_t j = 0; j < p; ++j) {
            if (j == i || partition[j] == kUnclustered) continue;
            const double x = w(i, j);
            degree[ci] += x;
            if (j > i) {
                m += x;
                if (partition[j] == partition[i]) internal[ci] += x;
            }
        }
    }
    if (!(m > 0.0)) throw DataError("modularity undefined on a graph without edges");
    double q = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        const double share = degree[c] / (2.0 * m);
        q += internal[c] / m - share * share;
    }
    return q;
}

double adjusted_rand(const Partition& a, const Partition& b, UnclusteredMode mode) {
    if (a.size() != b.size())
        throw DataError("partitions cover different node sets (" + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()) + " nodes)");
    std::map<std::pair<Label, Label>, double> joint;
    std::map<Label, double> rows, cols;
    double n = 0.0;
    for (std::size_t v = 0; v < a.size(); ++v) {
        if (mode == UnclusteredMode::Drop && (a[v] == kUnclustered || b[v] == kUnclustered)) continue;
        joint[{a[v], b[v]}] += 1.0;
        rows[a[v]] += 1.0;
        cols[b[v]] += 1.0;
        n += 1.0;
    }
    if (n < 2.0) throw ParameterError("adjusted Rand index needs at least two compared nodes");

    auto pairs = [](double c) { return c * (c - 1.0) / 2.0; };
    double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
    for (const auto& [key, c] : joint) index += pairs(c);
    for (const auto& [key, c] : rows) sum_rows += pairs(c);
    for (const auto& [key, c] : cols) sum_cols += pairs(c);
    const double expected = sum_rows * sum_cols / pairs(n);
    const double max_index = 0.5 * (sum_rows + sum_cols);
    const double denom = max_index - expected;
    // Zero denominator only when both partitions are all-singletons or both are one block.
    if (denom == 0.0) return 1.0;
    return (index - expected) / denom;
}

} // namespace csd
