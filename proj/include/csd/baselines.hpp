#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "csd/evaluation.hpp"
#include "csd/graph.hpp"
#include "csd/partition.hpp"

namespace csd {

// ---------------------------------------------------------------------------------------
// Spectral clustering on the random-walk Laplacian

/// L_rw = D^{-1}(D - W) with d_i = sum_{j != i} w_ij. Throws DataError on a zero-degree node.
Eigen::MatrixXd normalized_laplacian(const SimilarityMatrix& w);

struct SpectralEmbedding {
    /// p x K; column k is the unit-norm eigenvector of L_rw for eigenvalues[k].
    Eigen::MatrixXd points;
    /// Ascending.
    std::vector<double> eigenvalues;
};

/// Eigenvectors of L_rw for the K smallest eigenvalues, obtained from the symmetric
/// normalization D^{-1/2} L D^{-1/2} and mapped back through D^{-1/2}. Each vector's first
/// coordinate with magnitude above 1e-12 is made positive.
SpectralEmbedding spectral_embed(const SimilarityMatrix& w, std::size_t k);

struct KMeansResult {
    Partition partition;
    /// Within-cluster sum of squares of the returned partition.
    double cost = 0.0;
    /// Cost after each assignment step of the winning restart; non-increasing.
    std::vector<double> cost_trace;
};

/// Best of `restarts` Lloyd runs, each seeded D^2-weighted (k-means++) from a stream derived
/// from (seed, restart index). A run stops when assignments are stable or after 100 passes.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::size_t restarts, std::uint64_t seed);

Partition spectral_clustering(const SimilarityMatrix& w, std::size_t k, std::size_t restarts, std::uint64_t seed);

struct DunnSelection {
    std::size_t k = 0;
    Partition partition;
    /// Dunn index for each K in [k_min, k_max].
    std::vector<double> dunn;
};

/// Spectral clustering for each K in [k_min, k_max], scored by the Dunn index with
/// d = 1 - w; the highest score wins, smallest K on ties.
DunnSelection select_k_by_dunn(const SimilarityMatrix& w, std::size_t k_min, std::size_t k_max,
                               std::size_t restarts, std::uint64_t seed);

// ---------------------------------------------------------------------------------------
// WGCNA-style pipeline

/// w_ij = s_ij^beta, beta >= 1.
SimilarityMatrix power_adjacency(const SimilarityMatrix& s, double beta);

struct ScaleFreeFit {
    double beta;
    /// R^2 of log10 p(k) on log10 k, signed: positive when the slope is negative.
    double signed_r_squared;
    double slope;
    double mean_connectivity;
};

struct SoftThreshold {
    double beta;
    std::vector<ScaleFreeFit> report;
};

/// Scale-free topology fit for each beta: connectivities k_i = sum_j s_ij^beta are binned
/// into `bins` equal-width bins over [min k, max k]; log10 of the fraction of nodes per
/// non-empty bin is regressed on log10 of the bin's mean connectivity. Returns the smallest
/// beta reaching `r_squared_cutoff`, else the beta with the largest signed R^2.
SoftThreshold pick_soft_threshold(const SimilarityMatrix& s, const std::vector<double>& beta_grid,
                                  double r_squared_cutoff = 0.8, std::size_t bins = 10);

struct TomResult {
    SimilarityMatrix tom;
    /// Entries whose denominator fell below 1e-12 and were set to 0.
    std::size_t guarded_entries = 0;
};

/// TOM_ij = (sum_{u != i,j} w_iu w_uj + w_ij) / (min(k_i, k_j) + 1 - w_ij).
TomResult tom_similarity(const SimilarityMatrix& w);

struct Merge {
    /// Negative values -1..-p are leaves; positive values refer to the merge of that step.
    int left;
    int right;
    double height;
};

struct Dendrogram {
    std::size_t leaves = 0;
    std::vector<Merge> merges;
    std::vector<std::size_t> order;
};

/// Agglomerative average linkage. Among equal distances the pair with the smallest
/// (lower slot, higher slot) wins; a merged cluster takes the lower slot.
Dendrogram average_linkage(const DissimilarityMatrix& d);

/// Clusters are the maximal subtrees whose merges sit at or below `height`. Clusters with
/// fewer than `min_size` members become unclustered (label 0). Clusters are numbered by
/// smallest member.
Partition cut_dendrogram(const Dendrogram& dendrogram, double height, std::size_t min_size);

std::string format_dendrogram(const Dendrogram& dendrogram);
std::string format_fit_report(const std::vector<ScaleFreeFit>& report);

struct WgcnaOptions {
    std::vector<double> beta_grid;
    double cut_height = 0.99;
    std::size_t min_size = 40;
    double r_squared_cutoff = 0.8;
    std::size_t bins = 10;
};

struct WgcnaResult {
    Partition partition;
    SoftThreshold soft_threshold;
    Dendrogram dendrogram;
    std::size_t guarded_entries = 0;
};

/// Power adjacency with a grid-selected beta, TOM, average linkage on 1 - TOM, static cut.
WgcnaResult wgcna_lite(const SimilarityMatrix& s, const WgcnaOptions& options);

/// Dendrogram of the pipeline up to the cut, for sweeping cut parameters.
WgcnaResult wgcna_tree(const SimilarityMatrix& s, const WgcnaOptions& options);

/// The default power grid: 1..10, then 12..20 in steps of 2.
std::vector<double> default_beta_grid();

} // namespace csd
