#pragma once

#include <cstddef>
#include <vector>

#include "csd/expression.hpp"
#include "csd/graph.hpp"
#include "csd/partition.hpp"

namespace csd {

/// Symmetric non-negative p x p matrix with a zero diagonal.
class DissimilarityMatrix {
public:
    DissimilarityMatrix() = default;
    /// Row-major; validated.
    DissimilarityMatrix(std::size_t p, std::vector<double> values);

    /// d(i,j) = 1 - w(i,j) off the diagonal.
    static DissimilarityMatrix from_similarity(const SimilarityMatrix& w);

    std::size_t size() const { return p_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * p_ + j]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::size_t p_ = 0;
    std::vector<double> values_;
};

// Internal indices ignore unclustered (label 0) nodes.

/// Smallest single-linkage distance between clusters over the largest cluster diameter.
double dunn_index(const DissimilarityMatrix& d, const Partition& partition);

struct SilhouetteResult {
    /// One value per node; NaN for unclustered nodes. Singleton clusters score 0.
    std::vector<double> values;
    double mean = 0.0;
};
SilhouetteResult silhouette(const DissimilarityMatrix& d, const Partition& partition);

/// Sum over samples of the root-mean-square deviation from within-cluster sample means.
double figure_of_merit(const ExpressionMatrix& x, const Partition& partition);

/// Weighted Newman-Girvan modularity.
double modularity(const SimilarityMatrix& w, const Partition& partition);

enum class UnclusteredMode {
    Drop,     ///< Nodes unclustered in either partition are left out.
    AsClass,  ///< Label 0 forms one more class.
};

/// Hubert-Arabie adjusted Rand index. Can be negative for worse-than-chance agreement.
double adjusted_rand(const Partition& a, const Partition& b, UnclusteredMode mode = UnclusteredMode::Drop);

} // namespace csd
