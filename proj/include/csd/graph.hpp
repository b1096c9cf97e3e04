#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace csd {

/// Dense symmetric p x p matrix of similarities in [0,1] with a zero diagonal.
///
/// Doubles as the weighted adjacency of a fully connected graph; a zero entry means no edge.
/// Construction validates symmetry (exact), the zero diagonal and the range, reporting the
/// first offending row/column.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    explicit SimilarityMatrix(std::size_t p, std::vector<std::string> labels = {});
    /// Row-major values; `values.size()` must be p*p.
    SimilarityMatrix(std::size_t p, std::vector<double> values, std::vector<std::string> labels = {});

    std::size_t size() const { return p_; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * p_ + j]; }
    /// Sets both (i,j) and (j,i).
    void set(std::size_t i, std::size_t j, double w);

    const double* row(std::size_t i) const { return values_.data() + i * p_; }
    const std::vector<double>& values() const { return values_; }

    const std::vector<std::string>& labels() const { return labels_; }
    /// Label of node i, or "n<index>" (1-based) when no labels were given.
    std::string label(std::size_t i) const;

    /// Principal submatrix on the given nodes, in the given order.
    SimilarityMatrix submatrix(const std::vector<std::size_t>& nodes) const;

private:
    std::size_t p_ = 0;
    std::vector<double> values_;
    std::vector<std::string> labels_;
};

struct Edge {
    std::size_t i;  // i < j
    std::size_t j;
    double weight;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edge removal order: lighter first, then lexicographic (i,j).
inline bool lighter(const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
}

/// Edge preference order for spanning trees and attachment: heavier first, then lexicographic (i,j).
inline bool heavier(const Edge& a, const Edge& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
}

/// Undirected graph on p nodes with strictly positive edge weights, edges kept sorted by (i,j).
class WeightedGraph {
public:
    WeightedGraph() = default;
    WeightedGraph(std::size_t p, std::vector<Edge> edges);

    std::size_t size() const { return p_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    struct Neighbor {
        std::size_t node;
        double weight;
    };
    /// Adjacency lists; neighbors ordered by node index.
    std::vector<std::vector<Neighbor>> adjacency() const;

private:
    std::size_t p_ = 0;
    std::vector<Edge> edges_;
};

/// A WeightedGraph that is connected and has exactly p-1 edges.
class SpanningTree {
public:
    SpanningTree() = default;
    /// Validates the tree shape; throws DataError otherwise.
    explicit SpanningTree(WeightedGraph graph);
    const WeightedGraph& graph() const { return graph_; }
    std::size_t size() const { return graph_.size(); }
    const std::vector<Edge>& edges() const { return graph_.edges(); }

private:
    WeightedGraph graph_;
};

/// Keeps edges with w_ij >= lambda (and w_ij > 0).
WeightedGraph threshold_graph(const SimilarityMatrix& w, double lambda);
/// Same indicator applied to an existing graph.
WeightedGraph threshold_graph(const WeightedGraph& g, double lambda);

/// Maximal connected node sets, each sorted, ordered by smallest member.
std::vector<std::vector<std::size_t>> connected_components(const WeightedGraph& g);
std::vector<std::size_t> component_of(const WeightedGraph& g, std::size_t node);

/// Number of components of the positive-weight graph of W.
std::size_t positive_component_count(const SimilarityMatrix& w);

/// Prim's algorithm on the dense matrix, O(p^2). Throws DataError naming the component count
/// when the positive-weight graph is disconnected.
SpanningTree maximum_spanning_tree(const SimilarityMatrix& w);

/// Similarity TSV: optional header row of labels, then p rows of p values.
SimilarityMatrix read_similarity(const std::filesystem::path& path);
std::string format_similarity(const SimilarityMatrix& w);

} // namespace csd
