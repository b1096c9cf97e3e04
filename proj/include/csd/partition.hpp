#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace csd {

using Label = int;

/// Label reserved for nodes left out of every cluster.
inline constexpr Label kUnclustered = 0;

/// Assignment of every node to one cluster label in 1..K, or to kUnclustered.
///
/// Labels are compact: distinct positive input labels are renumbered 1..K preserving their
/// order, so every label in 1..K is non-empty.
class Partition {
public:
    Partition() = default;

    /// Negative labels are rejected; 0 marks unclustered nodes.
    static Partition from_labels(std::span<const Label> labels);

    /// Builds from clusters given as node lists over [0, p); nodes not listed are unclustered.
    static Partition from_clusters(std::size_t p, const std::vector<std::vector<std::size_t>>& clusters);

    std::size_t size() const { return labels_.size(); }
    std::size_t cluster_count() const { return cluster_count_; }
    Label operator[](std::size_t node) const { return labels_[node]; }
    const std::vector<Label>& labels() const { return labels_; }

    std::size_t unclustered_count() const;
    std::vector<std::size_t> cluster_sizes() const;
    /// Members of each cluster, index k holding label k+1.
    std::vector<std::vector<std::size_t>> clusters() const;

    /// Restricts to the given nodes, in the given order.
    Partition subset(std::span<const std::size_t> nodes) const;

    /// Relabels clusters in order of first appearance by node index; two partitions group
    /// nodes identically iff their canonical forms are equal.
    Partition canonical() const;

    /// Maps unclustered nodes to a cluster of their own (label K+1) when any exist.
    Partition with_unclustered_as_class() const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<Label> labels_;
    std::size_t cluster_count_ = 0;
};

} // namespace csd
