#include "csd/cores.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>

#include "csd/error.hpp"
#include "csd/evaluation.hpp"
#include "csd/parallel.hpp"

namespace csd {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct TreeAdjacency {
    struct Arc {
        std::size_t node;
        std::size_t edge;
    };
    std::vector<std::vector<Arc>> arcs;

    explicit TreeAdjacency(const SpanningTree& tree) : arcs(tree.size()) {
        const auto& edges = tree.edges();
        for (std::size_t e = 0; e < edges.size(); ++e) {
            arcs[edges[e].i].push_back({edges[e].j, e});
            arcs[edges[e].j].push_back({edges[e].i, e});
        }
    }
};

} // namespace

std::size_t CoreStructureFamily::core_node_count() const {
    std::size_t total = 0;
    for (const auto& c : cores) total += c.size();
    return total;
}

Partition CoreStructureFamily::core_labels() const {
    std::vector<Label> labels(node_count, kUnclustered);
    for (std::size_t k = 0; k < cores.size(); ++k)
        for (std::size_t node : cores[k]) labels[node] = static_cast<Label>(k + 1);
    return Partition::from_labels(labels);
}

std::vector<bool> CoreStructureFamily::in_core() const {
    std::vector<bool> flags(node_count, false);
    for (const auto& c : cores)
        for (std::size_t node : c) flags[node] = true;
    return flags;
}

CoreStructureFamily detect_cores(const SpanningTree& tree, std::size_t min_core_size) {
    if (min_core_size < 1) throw ParameterError("minimum core size n must be at least 1");
    const std::size_t p = tree.size();
    const std::size_t n = min_core_size;

    CoreStructureFamily family;
    family.min_core_size = n;
    family.node_count = p;
    if (p < n) {
        family.outer.resize(p);
        std::iota(family.outer.begin(), family.outer.end(), std::size_t{0});
        return family;
    }

    const auto& edges = tree.edges();
    const TreeAdjacency adj(tree);
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lighter(edges[a], edges[b]); });

    std::vector<bool> active(edges.size(), true);
    std::size_t active_count = edges.size();

    // Recorded sets; `owner[v]` indexes the live set holding v, kNone once v is outer.
    std::vector<std::vector<std::size_t>> recorded;
    std::vector<bool> live;
    std::vector<std::size_t> owner(p, 0);
    recorded.emplace_back(p);
    std::iota(recorded[0].begin(), recorded[0].end(), std::size_t{0});
    live.push_back(true);

    std::vector<std::size_t> stamp(p, 0);
    std::size_t current_stamp = 0;
    std::vector<std::size_t> stack;

    auto component = [&](std::size_t start) {
        std::vector<std::size_t> members{start};
        ++current_stamp;
        stamp[start] = current_stamp;
        stack.assign(1, start);
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (const auto& arc : adj.arcs[u]) {
                if (!active[arc.edge] || stamp[arc.node] == current_stamp) continue;
                stamp[arc.node] = current_stamp;
                members.push_back(arc.node);
                stack.push_back(arc.node);
            }
        }
        return members;
    };

    auto prune = [&](const std::vector<std::size_t>& members) {
        for (std::size_t u : members)
            for (const auto& arc : adj.arcs[u])
                if (active[arc.edge]) {
                    active[arc.edge] = false;
                    --active_count;
                }
    };

    std::size_t cursor = 0;
    while (active_count > n - 1) {
        while (!active[order[cursor]]) ++cursor;
        const Edge& e = edges[order[cursor]];
        active[order[cursor]] = false;
        --active_count;

        std::vector<std::size_t> side_i = component(e.i);
        std::vector<std::size_t> side_j = component(e.j);

        if (side_i.size() >= n && side_j.size() >= n) {
            const std::size_t replaced = owner[e.i];
            ++current_stamp;
            for (std::size_t u : side_i) stamp[u] = current_stamp;
            for (std::size_t u : side_j) stamp[u] = current_stamp;
            for (std::size_t u : recorded[replaced])
                if (stamp[u] != current_stamp) owner[u] = kNone;
            live[replaced] = false;
            for (auto* side : {&side_i, &side_j}) {
                for (std::size_t u : *side) owner[u] = recorded.size();
                recorded.push_back(std::move(*side));
                live.push_back(true);
            }
        } else {
            if (side_i.size() <= n) prune(side_i);
            if (side_j.size() <= n) prune(side_j);
        }
    }

    for (std::size_t s = 0; s < recorded.size(); ++s) {
        if (!live[s]) continue;
        std::sort(recorded[s].begin(), recorded[s].end());
        family.cores.push_back(std::move(recorded[s]));
    }
    std::sort(family.cores.begin(), family.cores.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    for (std::size_t v = 0; v < p; ++v)
        if (owner[v] == kNone) family.outer.push_back(v);
    return family;
}

Partition complete_clusters(const CoreStructureFamily& cores, const SpanningTree& tree) {
    if (cores.cores.empty()) throw ParameterError("no cores detected; decrease n");
    const std::size_t p = tree.size();
    if (cores.node_count != p) throw ParameterError("core family and spanning tree disagree on node count");

    std::vector<Label> labels(p, kUnclustered);
    for (std::size_t k = 0; k < cores.cores.size(); ++k)
        for (std::size_t v : cores.cores[k]) labels[v] = static_cast<Label>(k + 1);

    const auto adj = tree.graph().adjacency();
    auto lower_priority = [](const Edge& a, const Edge& b) { return heavier(b, a); };
    std::priority_queue<Edge, std::vector<Edge>, decltype(lower_priority)> frontier(lower_priority);

    auto push_frontier = [&](std::size_t u) {
        for (const auto& nb : adj[u])
            if (labels[nb.node] == kUnclustered)
                frontier.push(Edge{std::min(u, nb.node), std::max(u, nb.node), nb.weight});
    };
    for (std::size_t v = 0; v < p; ++v)
        if (labels[v] != kUnclustered) push_frontier(v);

    while (!frontier.empty()) {
        Edge e = frontier.top();
        frontier.pop();
        const bool i_free = labels[e.i] == kUnclustered;
        const bool j_free = labels[e.j] == kUnclustered;
        if (i_free == j_free) continue;  // stale: both endpoints already clustered
        const std::size_t joining = i_free ? e.i : e.j;
        labels[joining] = labels[i_free ? e.j : e.i];
        push_frontier(joining);
    }
    return Partition::from_labels(labels);
}

CsdResult core_structure_clustering(const SpanningTree& tree, std::size_t min_core_size) {
    CoreStructureFamily cores = detect_cores(tree, min_core_size);
    Partition partition = complete_clusters(cores, tree);
    return {std::move(partition), std::move(cores)};
}

CsdResult core_structure_clustering(const SimilarityMatrix& w, std::size_t min_core_size) {
    if (min_core_size < 1) throw ParameterError("minimum core size n must be at least 1");
    return core_structure_clustering(maximum_spanning_tree(w), min_core_size);
}

SweepResult sweep(const SimilarityMatrix& w, const std::vector<std::size_t>& min_core_sizes, std::size_t jobs) {
    if (min_core_sizes.empty()) throw ParameterError("sweep needs at least one value of n");
    for (std::size_t k = 0; k < min_core_sizes.size(); ++k) {
        if (min_core_sizes[k] < 1) throw ParameterError("minimum core size n must be at least 1");
        if (k > 0 && min_core_sizes[k] <= min_core_sizes[k - 1])
            throw ParameterError("sweep values of n must be strictly ascending");
    }
    const SpanningTree tree = maximum_spanning_tree(w);

    SweepResult out;
    out.entries.resize(min_core_sizes.size());
    parallel_for(min_core_sizes.size(), jobs, [&](std::size_t k) {
        out.entries[k] = SweepEntry{min_core_sizes[k], core_structure_clustering(tree, min_core_sizes[k])};
    });
    for (std::size_t k = 1; k < out.entries.size(); ++k)
        out.consecutive_ari.push_back(
            adjusted_rand(out.entries[k - 1].result.partition, out.entries[k].result.partition));
    return out;
}

} // namespace csd
