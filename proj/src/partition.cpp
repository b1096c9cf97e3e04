#include "csd/partition.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "csd/error.hpp"

namespace csd {

Partition Partition::from_labels(std::span<const Label> labels) {
    std::map<Label, Label> renumber;
    for (Label l : labels) {
        if (l < 0) throw ParameterError("partition labels must be non-negative, got " + std::to_string(l));
        if (l != kUnclustered) renumber.emplace(l, 0);
    }
    Label next = 1;
    for (auto& [from, to] : renumber) to = next++;

    Partition p;
    p.labels_.reserve(labels.size());
    for (Label l : labels) p.labels_.push_back(l == kUnclustered ? kUnclustered : renumber[l]);
    p.cluster_count_ = renumber.size();
    return p;
}

Partition Partition::from_clusters(std::size_t p, const std::vector<std::vector<std::size_t>>& clusters) {
    std::vector<Label> labels(p, kUnclustered);
    for (std::size_t k = 0; k < clusters.size(); ++k) {
        if (clusters[k].empty()) throw ParameterError("cluster " + std::to_string(k + 1) + " is empty");
        for (std::size_t node : clusters[k]) {
            if (node >= p) throw ParameterError("cluster member " + std::to_string(node) + " out of range");
            if (labels[node] != kUnclustered)
                throw ParameterError("node " + std::to_string(node) + " assigned to two clusters");
            labels[node] = static_cast<Label>(k + 1);
        }
    }
    return from_labels(labels);
}

std::size_t Partition::unclustered_count() const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), kUnclustered));
}

std::vector<std::size_t> Partition::cluster_sizes() const {
    std::vector<std::size_t> sizes(cluster_count_, 0);
    for (Label l : labels_)
        if (l != kUnclustered) ++sizes[static_cast<std::size_t>(l - 1)];
    return sizes;
}

std::vector<std::vector<std::size_t>> Partition::clusters() const {
    std::vector<std::vector<std::size_t>> out(cluster_count_);
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] != kUnclustered) out[static_cast<std::size_t>(labels_[i] - 1)].push_back(i);
    return out;
}

Partition Partition::subset(std::span<const std::size_t> nodes) const {
    std::vector<Label> labels;
    labels.reserve(nodes.size());
    for (std::size_t node : nodes) {
        if (node >= labels_.size()) throw ParameterError("subset node " + std::to_string(node) + " out of range");
        labels.push_back(labels_[node]);
    }
    return from_labels(labels);
}

Partition Partition::canonical() const {
    std::vector<Label> first(cluster_count_ + 1, 0);
    Label next = 1;
    std::vector<Label> labels(labels_.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        Label l = labels_[i];
        if (l == kUnclustered) continue;
        if (first[static_cast<std::size_t>(l)] == 0) first[static_cast<std::size_t>(l)] = next++;
        labels[i] = first[static_cast<std::size_t>(l)];
    }
    return from_labels(labels);
}

Partition Partition::with_unclustered_as_class() const {
    if (unclustered_count() == 0) return *this;
    std::vector<Label> labels = labels_;
    const Label extra = static_cast<Label>(cluster_count_ + 1);
    for (Label& l : labels)
        if (l == kUnclustered) l = extra;
    return from_labels(labels);
}

} // namespace csd
