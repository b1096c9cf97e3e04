#include "csd/graph.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "csd/error.hpp"
#include "csd/tsv.hpp"

namespace csd {

namespace {

void validate(std::size_t p, const std::vector<double>& v) {
    for (std::size_t i = 0; i < p; ++i) {
        if (v[i * p + i] != 0.0)
            throw DataError("similarity diagonal must be zero: entry (" + std::to_string(i + 1) + "," +
                            std::to_string(i + 1) + ") = " + tsv::format_double(v[i * p + i]));
        for (std::size_t j = 0; j < p; ++j) {
            double x = v[i * p + j];
            if (!(x >= 0.0 && x <= 1.0))
                throw DataError("similarity entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                ") = " + tsv::format_double(x) + " outside [0,1]");
            if (x != v[j * p + i])
                throw DataError("similarity matrix not symmetric at row " + std::to_string(i + 1) +
                                ", column " + std::to_string(j + 1));
        }
    }
}

} // namespace

SimilarityMatrix::SimilarityMatrix(std::size_t p, std::vector<std::string> labels)
    : p_(p), values_(p * p, 0.0), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != p) throw DataError("label count does not match matrix size");
}

SimilarityMatrix::SimilarityMatrix(std::size_t p, std::vector<double> values, std::vector<std::string> labels)
    : p_(p), values_(std::move(values)), labels_(std::move(labels)) {
    if (values_.size() != p * p) throw DataError("similarity values must have p*p entries");
    if (!labels_.empty() && labels_.size() != p) throw DataError("label count does not match matrix size");
    validate(p_, values_);
}

void SimilarityMatrix::set(std::size_t i, std::size_t j, double w) {
    if (i >= p_ || j >= p_) throw ParameterError("similarity index out of range");
    if (i == j) {
        if (w != 0.0) throw DataError("similarity diagonal must be zero");
        return;
    }
    if (!(w >= 0.0 && w <= 1.0)) throw DataError("similarity value " + tsv::format_double(w) + " outside [0,1]");
    values_[i * p_ + j] = w;
    values_[j * p_ + i] = w;
}

std::string SimilarityMatrix::label(std::size_t i) const {
    return labels_.empty() ? "n" + std::to_string(i + 1) : labels_[i];
}

SimilarityMatrix SimilarityMatrix::submatrix(const std::vector<std::size_t>& nodes) const {
    SimilarityMatrix out(nodes.size());
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = 0; b < nodes.size(); ++b) out.values_[a * nodes.size() + b] = (*this)(nodes[a], nodes[b]);
    if (!labels_.empty()) {
        out.labels_.reserve(nodes.size());
        for (std::size_t n : nodes) out.labels_.push_back(labels_[n]);
    }
    return out;
}

WeightedGraph::WeightedGraph(std::size_t p, std::vector<Edge> edges) : p_(p), edges_(std::move(edges)) {
    for (Edge& e : edges_) {
        if (e.i > e.j) std::swap(e.i, e.j);
        if (e.j >= p_) throw DataError("edge endpoint out of range");
        if (e.i == e.j) throw DataError("self-loop on node " + std::to_string(e.i + 1));
        if (!(e.weight > 0.0)) throw DataError("edge weights must be strictly positive");
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    for (std::size_t k = 1; k < edges_.size(); ++k)
        if (edges_[k].i == edges_[k - 1].i && edges_[k].j == edges_[k - 1].j)
            throw DataError("duplicate edge (" + std::to_string(edges_[k].i + 1) + "," +
                            std::to_string(edges_[k].j + 1) + ")");
}

std::vector<std::vector<WeightedGraph::Neighbor>> WeightedGraph::adjacency() const {
    std::vector<std::vector<Neighbor>> adj(p_);
    for (const Edge& e : edges_) {
        adj[e.i].push_back({e.j, e.weight});
        adj[e.j].push_back({e.i, e.weight});
    }
    for (auto& list : adj)
        std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    return adj;
}

SpanningTree::SpanningTree(WeightedGraph graph) : graph_(std::move(graph)) {
    const std::size_t p = graph_.size();
    if (p > 0 && graph_.edge_count() != p - 1)
        throw DataError("spanning tree on " + std::to_string(p) + " nodes needs " + std::to_string(p - 1) +
                        " edges, got " + std::to_string(graph_.edge_count()));
    if (p > 0 && connected_components(graph_).size() != 1) throw DataError("spanning tree is not connected");
}

WeightedGraph threshold_graph(const SimilarityMatrix& w, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ParameterError("threshold lambda must lie in [0,1]");
    std::vector<Edge> edges;
    const std::size_t p = w.size();
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
            double x = w(i, j);
            if (x > 0.0 && x >= lambda) edges.push_back({i, j, x});
        }
    return WeightedGraph(p, std::move(edges));
}

WeightedGraph threshold_graph(const WeightedGraph& g, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ParameterError("threshold lambda must lie in [0,1]");
    std::vector<Edge> edges;
    for (const Edge& e : g.edges())
        if (e.weight >= lambda) edges.push_back(e);
    return WeightedGraph(g.size(), std::move(edges));
}

namespace {

// Labels every node with the index of its component; components numbered by smallest member.
std::vector<std::size_t> component_ids(const WeightedGraph& g, std::size_t& count) {
    const std::size_t p = g.size();
    constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> id(p, unseen);
    auto adj = g.adjacency();
    std::vector<std::size_t> stack;
    count = 0;
    for (std::size_t s = 0; s < p; ++s) {
        if (id[s] != unseen) continue;
        id[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (const auto& nb : adj[u])
                if (id[nb.node] == unseen) {
                    id[nb.node] = count;
                    stack.push_back(nb.node);
                }
        }
        ++count;
    }
    return id;
}

} // namespace

std::vector<std::vector<std::size_t>> connected_components(const WeightedGraph& g) {
    std::size_t count = 0;
    auto id = component_ids(g, count);
    std::vector<std::vector<std::size_t>> out(count);
    for (std::size_t i = 0; i < g.size(); ++i) out[id[i]].push_back(i);
    return out;
}

std::vector<std::size_t> component_of(const WeightedGraph& g, std::size_t node) {
    if (node >= g.size())
        throw ParameterError("node " + std::to_string(node + 1) + " out of range 1.." + std::to_string(g.size()));
    std::size_t count = 0;
    auto id = component_ids(g, count);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (id[i] == id[node]) out.push_back(i);
    return out;
}

std::size_t positive_component_count(const SimilarityMatrix& w) {
    return connected_components(threshold_graph(w, 0.0)).size();
}

SpanningTree maximum_spanning_tree(const SimilarityMatrix& w) {
    const std::size_t p = w.size();
    if (p == 0) return SpanningTree(WeightedGraph(0, {}));

    // best[v]: heaviest edge (under the heavier() total order) from the tree to v.
    std::vector<Edge> best(p, Edge{0, 0, 0.0});
    std::vector<bool> in_tree(p, false);
    std::vector<Edge> edges;
    edges.reserve(p - 1);

    auto relax = [&](std::size_t u) {
        const double* row = w.row(u);
        for (std::size_t v = 0; v < p; ++v) {
            if (in_tree[v] || row[v] <= 0.0) continue;
            Edge cand{std::min(u, v), std::max(u, v), row[v]};
            if (best[v].weight == 0.0 || heavier(cand, best[v])) best[v] = cand;
        }
    };

    in_tree[0] = true;
    relax(0);
    for (std::size_t step = 1; step < p; ++step) {
        std::size_t next = p;
        for (std::size_t v = 0; v < p; ++v) {
            if (in_tree[v] || best[v].weight == 0.0) continue;
            if (next == p || heavier(best[v], best[next])) next = v;
        }
        if (next == p) {
            throw DataError("positive-weight graph is disconnected (" + std::to_string(positive_component_count(w)) +
                            " components); cluster the components separately");
        }
        in_tree[next] = true;
        edges.push_back(best[next]);
        relax(next);
    }
    return SpanningTree(WeightedGraph(p, std::move(edges)));
}

SimilarityMatrix read_similarity(const std::filesystem::path& path) {
    tsv::Table table = tsv::read(path);
    if (table.rows.empty()) throw DataError(path.string() + ": empty similarity file");

    std::vector<std::string> labels;
    std::size_t first = 0;
    const tsv::Row& head = table.rows.front();
    bool numeric_head = true;
    for (const auto& f : head)
        if (!tsv::parse_double(f)) numeric_head = false;
    if (!numeric_head) {
        labels = head;
        // A leading empty corner cell is tolerated when every data row starts with its label.
        if (!labels.empty() && labels.front().empty()) labels.erase(labels.begin());
        first = 1;
    }

    const std::size_t p = table.rows.size() - first;
    if (!labels.empty() && labels.size() != p)
        throw DataError(path.string() + ": header has " + std::to_string(labels.size()) + " labels but " +
                        std::to_string(p) + " data rows");
    std::vector<double> values(p * p);
    for (std::size_t r = 0; r < p; ++r) {
        const tsv::Row& row = table.rows[first + r];
        std::size_t offset = 0;
        if (row.size() == p + 1) offset = 1;  // row label column
        else if (row.size() != p)
            throw DataError(path.string() + ":" + std::to_string(table.line_numbers[first + r]) + ": expected " +
                            std::to_string(p) + " values, got " + std::to_string(row.size()));
        for (std::size_t c = 0; c < p; ++c) {
            auto v = tsv::parse_double(row[c + offset]);
            if (!v)
                throw DataError(path.string() + ":" + std::to_string(table.line_numbers[first + r]) +
                                ": non-numeric value '" + row[c + offset] + "'");
            values[r * p + c] = *v;
        }
    }
    try {
        return SimilarityMatrix(p, std::move(values), std::move(labels));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string format_similarity(const SimilarityMatrix& w) {
    std::ostringstream out;
    const std::size_t p = w.size();
    for (std::size_t i = 0; i < p; ++i) out << (i ? "\t" : "") << w.label(i);
    out << '\n';
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) out << (j ? "\t" : "") << tsv::format_double(w(i, j));
        out << '\n';
    }
    return out.str();
}

} // namespace csd
