#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "csd/baselines.hpp"
#include "csd/error.hpp"
#include "csd/tsv.hpp"

namespace csd {

SimilarityMatrix power_adjacency(const SimilarityMatrix& s, double beta) {
    if (!(beta >= 1.0)) throw ParameterError("soft-threshold power beta must be >= 1");
    std::vector<double> values = s.values();
    for (double& v : values) v = std::pow(v, beta);
    return SimilarityMatrix(s.size(), std::move(values), s.labels());
}

namespace {

ScaleFreeFit scale_free_fit(const SimilarityMatrix& s, double beta, std::size_t bins) {
    const std::size_t p = s.size();
    std::vector<double> k(p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        const double* row = s.row(i);
        for (std::size_t j = 0; j < p; ++j)
            if (row[j] > 0.0) k[i] += std::pow(row[j], beta);
    }
    const auto [lo_it, hi_it] = std::minmax_element(k.begin(), k.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo) || (hi - lo) <= 1e-12 * hi)
        throw DataError("connectivity is constant across nodes at beta = " + tsv::format_double(beta) +
                        "; scale-free fit is undefined");

    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<double> sum(bins, 0.0);
    std::vector<std::size_t> count(bins, 0);
    for (double ki : k) {
        auto b = static_cast<std::size_t>((ki - lo) / width);
        b = std::min(b, bins - 1);
        sum[b] += ki;
        ++count[b];
    }
    std::vector<double> x, y;
    for (std::size_t b = 0; b < bins; ++b) {
        if (count[b] == 0) continue;
        const double mean_k = sum[b] / static_cast<double>(count[b]);
        if (!(mean_k > 0.0)) continue;
        x.push_back(std::log10(mean_k));
        y.push_back(std::log10(static_cast<double>(count[b]) / static_cast<double>(p)));
    }
    if (x.size() < 2) throw DataError("too few populated connectivity bins for a scale-free fit");

    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        sxx += (x[t] - mx) * (x[t] - mx);
        syy += (y[t] - my) * (y[t] - my);
        sxy += (x[t] - mx) * (y[t] - my);
    }
    const double slope = sxy / sxx;
    const double r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 0.0;
    const double sign = slope < 0.0 ? 1.0 : (slope > 0.0 ? -1.0 : 0.0);
    return {beta, sign * r2, slope, std::accumulate(k.begin(), k.end(), 0.0) / static_cast<double>(p)};
}

} // namespace

SoftThreshold pick_soft_threshold(const SimilarityMatrix& s, const std::vector<double>& beta_grid,
                                  double r_squared_cutoff, std::size_t bins) {
    if (beta_grid.empty()) throw ParameterError("beta grid must not be empty");
    if (bins < 2) throw ParameterError("scale-free fit needs at least two bins");
    SoftThreshold out;
    for (double beta : beta_grid) {
        if (!(beta >= 1.0)) throw ParameterError("soft-threshold power beta must be >= 1");
        out.report.push_back(scale_free_fit(s, beta, bins));
    }
    const ScaleFreeFit* chosen = nullptr;
    for (const auto& fit : out.report)
        if (fit.signed_r_squared >= r_squared_cutoff && (!chosen || fit.beta < chosen->beta)) chosen = &fit;
    if (!chosen) {
        for (const auto& fit : out.report)
            if (!chosen || fit.signed_r_squared > chosen->signed_r_squared ||
                (fit.signed_r_squared == chosen->signed_r_squared && fit.beta < chosen->beta))
                chosen = &fit;
    }
    out.beta = chosen->beta;
    return out;
}

TomResult tom_similarity(const SimilarityMatrix& w) {
    const std::size_t p = w.size();
    const auto pp = static_cast<Eigen::Index>(p);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(w.values().data(), pp, pp);
    // With a zero diagonal, (A^2)_ij already excludes u = i and u = j.
    const Eigen::MatrixXd shared = a * a;
    const Eigen::VectorXd k = a.rowwise().sum();

    TomResult out;
    std::vector<double> values(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            const double wij = w(i, j);
            const double denom = std::min(k[ii], k[jj]) + 1.0 - wij;
            double t = 0.0;
            if (denom < 1e-12) ++out.guarded_entries;
            else t = std::clamp((shared(ii, jj) + wij) / denom, 0.0, 1.0);
            values[i * p + j] = t;
            values[j * p + i] = t;
        }
    }
    out.tom = SimilarityMatrix(p, std::move(values), w.labels());
    return out;
}

Dendrogram average_linkage(const DissimilarityMatrix& d) {
    const std::size_t p = d.size();
    Dendrogram out;
    out.leaves = p;
    if (p == 0) return out;

    std::vector<double> dist = d.values();
    std::vector<std::size_t> size(p, 1);
    std::vector<bool> active(p, true);
    std::vector<int> cluster_id(p);
    for (std::size_t i = 0; i < p; ++i) cluster_id[i] = -static_cast<int>(i + 1);

    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> nn(p, p);
    std::vector<double> nn_dist(p, inf);
    auto refresh = [&](std::size_t i) {
        nn[i] = p;
        nn_dist[i] = inf;
        for (std::size_t j = 0; j < p; ++j) {
            if (j == i || !active[j]) continue;
            if (dist[i * p + j] < nn_dist[i]) {
                nn_dist[i] = dist[i * p + j];
                nn[i] = j;
            }
        }
    };
    for (std::size_t i = 0; i < p; ++i) refresh(i);

    out.merges.reserve(p - 1);
    for (std::size_t step = 1; step < p; ++step) {
        // Lexicographic minimum of (distance, lower slot, higher slot).
        std::size_t a = p, b = p;
        double best = inf;
        for (std::size_t i = 0; i < p; ++i) {
            if (!active[i] || nn[i] == p) continue;
            const std::size_t lo = std::min(i, nn[i]), hi = std::max(i, nn[i]);
            if (a == p || nn_dist[i] < best || (nn_dist[i] == best && (lo < a || (lo == a && hi < b)))) {
                best = nn_dist[i];
                a = lo;
                b = hi;
            }
        }

        out.merges.push_back({cluster_id[a], cluster_id[b], best});
        const double na = static_cast<double>(size[a]), nb = static_cast<double>(size[b]);
        active[b] = false;
        for (std::size_t k = 0; k < p; ++k) {
            if (!active[k] || k == a) continue;
            const double merged = (na * dist[a * p + k] + nb * dist[b * p + k]) / (na + nb);
            dist[a * p + k] = merged;
            dist[k * p + a] = merged;
        }
        size[a] += size[b];
        cluster_id[a] = static_cast<int>(step);

        for (std::size_t k = 0; k < p; ++k) {
            if (!active[k]) continue;
            if (k == a || nn[k] == a || nn[k] == b) {
                refresh(k);
            } else if (dist[k * p + a] < nn_dist[k] || (dist[k * p + a] == nn_dist[k] && a < nn[k])) {
                nn_dist[k] = dist[k * p + a];
                nn[k] = a;
            }
        }
    }

    // Leaf order by depth-first traversal, left subtree first.
    std::vector<int> stack{static_cast<int>(p - 1)};
    if (p == 1) stack = {-1};
    while (!stack.empty()) {
        int node = stack.back();
        stack.pop_back();
        if (node < 0) {
            out.order.push_back(static_cast<std::size_t>(-node - 1));
        } else {
            const Merge& m = out.merges[static_cast<std::size_t>(node - 1)];
            stack.push_back(m.right);
            stack.push_back(m.left);
        }
    }
    return out;
}

Partition cut_dendrogram(const Dendrogram& dendrogram, double height, std::size_t min_size) {
    if (!(height >= 0.0)) throw ParameterError("cut height must be non-negative");
    if (min_size < 1) throw ParameterError("minimum cluster size must be at least 1");
    const std::size_t p = dendrogram.leaves;

    std::vector<std::size_t> parent(p);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    // Representative leaf of every merge step.
    std::vector<std::size_t> rep(dendrogram.merges.size() + 1, 0);
    auto leaf_of = [&](int id) { return id < 0 ? static_cast<std::size_t>(-id - 1) : rep[static_cast<std::size_t>(id)]; };
    for (std::size_t s = 0; s < dendrogram.merges.size(); ++s) {
        const Merge& m = dendrogram.merges[s];
        const std::size_t l = leaf_of(m.left), r = leaf_of(m.right);
        rep[s + 1] = l;
        if (m.height <= height) parent[find(r)] = find(l);
    }

    std::vector<std::size_t> count(p, 0);
    for (std::size_t i = 0; i < p; ++i) ++count[find(i)];
    std::vector<Label> labels(p, kUnclustered);
    std::vector<Label> label_of_root(p, kUnclustered);
    Label next = 1;
    for (std::size_t i = 0; i < p; ++i) {
        const std::size_t root = find(i);
        if (count[root] < min_size) continue;
        if (label_of_root[root] == kUnclustered) label_of_root[root] = next++;
        labels[i] = label_of_root[root];
    }
    return Partition::from_labels(labels);
}

std::string format_dendrogram(const Dendrogram& dendrogram) {
    std::ostringstream out;
    out << "step\tleft\tright\theight\n";
    for (std::size_t s = 0; s < dendrogram.merges.size(); ++s) {
        const Merge& m = dendrogram.merges[s];
        out << s + 1 << '\t' << m.left << '\t' << m.right << '\t' << tsv::format_double(m.height) << '\n';
    }
    return out.str();
}

std::string format_fit_report(const std::vector<ScaleFreeFit>& report) {
    std::ostringstream out;
    out << "beta\tr_squared\tslope\tmean_connectivity\n";
    for (const auto& fit : report)
        out << tsv::format_double(fit.beta) << '\t' << tsv::format_double(fit.signed_r_squared) << '\t'
            << tsv::format_double(fit.slope) << '\t' << tsv::format_double(fit.mean_connectivity) << '\n';
    return out.str();
}

WgcnaResult wgcna_tree(const SimilarityMatrix& s, const WgcnaOptions& options) {
    WgcnaResult out;
    out.soft_threshold = pick_soft_threshold(s, options.beta_grid, options.r_squared_cutoff, options.bins);
    TomResult tom = tom_similarity(power_adjacency(s, out.soft_threshold.beta));
    out.guarded_entries = tom.guarded_entries;
    out.dendrogram = average_linkage(DissimilarityMatrix::from_similarity(tom.tom));
    return out;
}

WgcnaResult wgcna_lite(const SimilarityMatrix& s, const WgcnaOptions& options) {
    WgcnaResult out = wgcna_tree(s, options);
    out.partition = cut_dendrogram(out.dendrogram, options.cut_height, options.min_size);
    return out;
}

std::vector<double> default_beta_grid() {
    std::vector<double> grid;
    for (int b = 1; b <= 10; ++b) grid.push_back(b);
    for (int b = 12; b <= 20; b += 2) grid.push_back(b);
    return grid;
}

} // namespace csd
