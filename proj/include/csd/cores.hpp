#pragma once

#include <cstddef>
#include <vector>

#include "csd/graph.hpp"
#include "csd/partition.hpp"

namespace csd {

/// Disjoint node sets that survive ordered edge removal as n-core structures, plus the
/// nodes left outside every core.
struct CoreStructureFamily {
    /// Each core sorted; cores ordered by smallest member.
    std::vector<std::vector<std::size_t>> cores;
    /// Sorted.
    std::vector<std::size_t> outer;
    std::size_t min_core_size = 0;
    std::size_t node_count = 0;

    std::size_t core_count() const { return cores.size(); }
    std::size_t core_node_count() const;
    /// Per-node core label (1..K) with 0 for outer nodes.
    Partition core_labels() const;
    /// Per-node flag: true when the node belongs to a core.
    std::vector<bool> in_core() const;

    friend bool operator==(const CoreStructureFamily&, const CoreStructureFamily&) = default;
};

/// Ordered edge removal on the maximum spanning tree.
///
/// Edges are removed lightest first (ties lexicographic). A removal that leaves two sides
/// of at least n nodes replaces the recorded set holding them by the two sides; any other
/// removal discards the edges inside each side of at most n nodes. Recorded sets keep members
/// discarded after they were recorded; members of a replaced set lying outside both sides
/// become outer. Runs while more than n-1 edges remain. When p < n there are no cores.
CoreStructureFamily detect_cores(const SpanningTree& tree, std::size_t min_core_size);

/// Grows every core into a cluster by repeatedly taking the heaviest tree edge that joins an
/// unclustered node to a clustered one (ties lexicographic). Cluster k holds core k.
Partition complete_clusters(const CoreStructureFamily& cores, const SpanningTree& tree);

struct CsdResult {
    Partition partition;
    CoreStructureFamily cores;
};

CsdResult core_structure_clustering(const SimilarityMatrix& w, std::size_t min_core_size);
CsdResult core_structure_clustering(const SpanningTree& tree, std::size_t min_core_size);

struct SweepEntry {
    std::size_t min_core_size;
    CsdResult result;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    /// Adjusted Rand index between entry k-1 and entry k; size entries.size()-1.
    std::vector<double> consecutive_ari;
};

/// Runs the clustering for each strictly ascending n, sharing one spanning tree.
/// `jobs` > 1 evaluates the n values concurrently; output is identical either way.
SweepResult sweep(const SimilarityMatrix& w, const std::vector<std::size_t>& min_core_sizes, std::size_t jobs = 1);

} // namespace csd
