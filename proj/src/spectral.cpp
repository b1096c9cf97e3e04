#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "csd/baselines.hpp"
#include "csd/error.hpp"
#include "csd/rng.hpp"
#include "csd/tsv.hpp"

namespace csd {

namespace {

Eigen::VectorXd degrees(const SimilarityMatrix& w) {
    const std::size_t p = w.size();
    Eigen::VectorXd d(static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < p; ++i) {
        const double* row = w.row(i);
        double sum = 0.0;
        for (std::size_t j = 0; j < p; ++j) sum += row[j];
        if (!(sum > 0.0)) throw DataError("node " + w.label(i) + " has zero degree");
        d[static_cast<Eigen::Index>(i)] = sum;
    }
    return d;
}

Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> as_eigen(
    const SimilarityMatrix& w) {
    const auto p = static_cast<Eigen::Index>(w.size());
    return {w.values().data(), p, p};
}

} // namespace

Eigen::MatrixXd normalized_laplacian(const SimilarityMatrix& w) {
    const Eigen::VectorXd d = degrees(w);
    const auto p = static_cast<Eigen::Index>(w.size());
    Eigen::MatrixXd l = -(d.cwiseInverse().asDiagonal() * as_eigen(w));
    l.diagonal().setOnes();
    (void)p;
    return l;
}

SpectralEmbedding spectral_embed(const SimilarityMatrix& w, std::size_t k) {
    const std::size_t p = w.size();
    if (k < 1 || k > p) throw ParameterError("embedding dimension K must lie in 1.." + std::to_string(p));
    const Eigen::VectorXd d = degrees(w);
    const Eigen::VectorXd inv_sqrt = d.cwiseSqrt().cwiseInverse();

    Eigen::MatrixXd sym = -(inv_sqrt.asDiagonal() * as_eigen(w) * inv_sqrt.asDiagonal());
    sym.diagonal().array() += 1.0;
    // Exact symmetry for the self-adjoint solver.
    sym = 0.5 * (sym + sym.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed to converge");

    const auto kk = static_cast<Eigen::Index>(k);
    SpectralEmbedding out;
    out.points = inv_sqrt.asDiagonal() * solver.eigenvectors().leftCols(kk);
    out.eigenvalues.resize(k);

    const Eigen::MatrixXd l_rw = normalized_laplacian(w);
    for (Eigen::Index c = 0; c < kk; ++c) {
        auto col = out.points.col(c);
        col.normalize();
        for (Eigen::Index r = 0; r < col.size(); ++r) {
            if (std::abs(col[r]) > 1e-12) {
                if (col[r] < 0.0) col = -col;
                break;
            }
        }
        const double lambda = solver.eigenvalues()[c];
        out.eigenvalues[static_cast<std::size_t>(c)] = lambda;
        const double residual = (l_rw * col - lambda * col).norm();
        if (residual > 1e-8)
            throw NumericalError("eigenpair " + std::to_string(c + 1) + " residual " + tsv::format_double(residual) +
                                 " exceeds 1e-8");
    }
    return out;
}

namespace {

struct LloydRun {
    std::vector<Label> assignment;
    double cost;
    std::vector<double> trace;
};

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index row, const Eigen::MatrixXd& centers,
                        Eigen::Index center) {
    return (points.row(row) - centers.row(center)).squaredNorm();
}

LloydRun lloyd(const Eigen::MatrixXd& points, std::size_t k, Rng& rng) {
    const Eigen::Index n = points.rows();
    const auto kk = static_cast<Eigen::Index>(k);
    Eigen::MatrixXd centers(kk, points.cols());

    // D^2-weighted seeding.
    std::vector<double> nearest(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    Eigen::Index first = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    centers.row(0) = points.row(first);
    for (Eigen::Index c = 1; c < kk; ++c) {
        double total = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            auto& best = nearest[static_cast<std::size_t>(r)];
            best = std::min(best, squared_distance(points, r, centers, c - 1));
            total += best;
        }
        Eigen::Index pick = n - 1;
        double target = rng.uniform() * total;
        for (Eigen::Index r = 0; r < n; ++r) {
            target -= nearest[static_cast<std::size_t>(r)];
            if (target < 0.0 && nearest[static_cast<std::size_t>(r)] > 0.0) {
                pick = r;
                break;
            }
        }
        while (nearest[static_cast<std::size_t>(pick)] == 0.0) --pick;
        centers.row(c) = points.row(pick);
    }

    LloydRun run{std::vector<Label>(static_cast<std::size_t>(n), -1), 0.0, {}};
    std::vector<double> dist(static_cast<std::size_t>(n));
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        double cost = 0.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            Eigen::Index best = 0;
            double best_d = squared_distance(points, r, centers, 0);
            for (Eigen::Index c = 1; c < kk; ++c) {
                const double dc = squared_distance(points, r, centers, c);
                if (dc < best_d) {
                    best_d = dc;
                    best = c;
                }
            }
            auto& slot = run.assignment[static_cast<std::size_t>(r)];
            if (slot != static_cast<Label>(best)) {
                slot = static_cast<Label>(best);
                changed = true;
            }
            dist[static_cast<std::size_t>(r)] = best_d;
            cost += best_d;
        }

        // Refill empty clusters with the points farthest from their centers.
        std::vector<std::size_t> counts(k, 0);
        for (Label a : run.assignment) ++counts[static_cast<std::size_t>(a)];
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t far = 0;
            for (std::size_t r = 0; r < dist.size(); ++r)
                if (counts[static_cast<std::size_t>(run.assignment[r])] > 1 && dist[r] > dist[far]) far = r;
            cost -= dist[far];
            dist[far] = 0.0;
            --counts[static_cast<std::size_t>(run.assignment[far])];
            run.assignment[far] = static_cast<Label>(c);
            counts[c] = 1;
            changed = true;
        }
        run.trace.push_back(cost);
        run.cost = cost;
        if (!changed) break;

        centers.setZero();
        for (Eigen::Index r = 0; r < n; ++r) centers.row(run.assignment[static_cast<std::size_t>(r)]) += points.row(r);
        for (std::size_t c = 0; c < k; ++c) centers.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
    }
    return run;
}

double within_cluster_cost(const Eigen::MatrixXd& points, const std::vector<Label>& assignment, std::size_t k) {
    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), points.cols());
    std::vector<double> counts(k, 0.0);
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
        centers.row(assignment[static_cast<std::size_t>(r)]) += points.row(r);
        counts[static_cast<std::size_t>(assignment[static_cast<std::size_t>(r)])] += 1.0;
    }
    for (std::size_t c = 0; c < k; ++c) centers.row(static_cast<Eigen::Index>(c)) /= counts[c];
    double cost = 0.0;
    for (Eigen::Index r = 0; r < points.rows(); ++r)
        cost += squared_distance(points, r, centers, assignment[static_cast<std::size_t>(r)]);
    return cost;
}

std::size_t distinct_rows(const Eigen::MatrixXd& points) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(points.rows()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    auto less = [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index c = 0; c < points.cols(); ++c)
            if (points(a, c) != points(b, c)) return points(a, c) < points(b, c);
        return false;
    };
    std::sort(idx.begin(), idx.end(), less);
    std::size_t count = idx.empty() ? 0 : 1;
    for (std::size_t i = 1; i < idx.size(); ++i)
        if (less(idx[i - 1], idx[i])) ++count;
    return count;
}

} // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, std::size_t restarts, std::uint64_t seed) {
    if (restarts < 1) throw ParameterError("k-means needs at least one restart");
    if (k < 1) throw ParameterError("k-means needs K >= 1");
    const std::size_t distinct = distinct_rows(points);
    if (k > distinct)
        throw ParameterError("K = " + std::to_string(k) + " exceeds the " + std::to_string(distinct) +
                             " distinct points");

    LloydRun best;
    best.cost = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng rng(derive_seed(seed, {r}));
        LloydRun run = lloyd(points, k, rng);
        if (run.cost < best.cost) best = std::move(run);
    }
    const double cost = within_cluster_cost(points, best.assignment, k);
    for (Label& a : best.assignment) a += 1;
    return {Partition::from_labels(best.assignment).canonical(), cost, std::move(best.trace)};
}

Partition spectral_clustering(const SimilarityMatrix& w, std::size_t k, std::size_t restarts, std::uint64_t seed) {
    if (k < 2) throw ParameterError("spectral clustering needs K >= 2");
    return kmeans(spectral_embed(w, k).points, k, restarts, seed).partition;
}

DunnSelection select_k_by_dunn(const SimilarityMatrix& w, std::size_t k_min, std::size_t k_max,
                               std::size_t restarts, std::uint64_t seed) {
    const std::size_t p = w.size();
    if (k_min < 2 || k_min > k_max || k_max + 1 > p)
        throw ParameterError("K range must satisfy 2 <= k_min <= k_max <= p-1");
    const SpectralEmbedding embedding = spectral_embed(w, k_max);
    const DissimilarityMatrix d = DissimilarityMatrix::from_similarity(w);

    DunnSelection out;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = k_min; k <= k_max; ++k) {
        Partition part =
            kmeans(embedding.points.leftCols(static_cast<Eigen::Index>(k)), k, restarts, seed).partition;
        double score = -std::numeric_limits<double>::infinity();
        try {
            score = dunn_index(d, part);
        } catch (const NumericalError&) {
            // Every cluster collapsed to zero diameter: not a usable candidate.
        }
        out.dunn.push_back(score);
        if (score > best || out.partition.size() == 0) {
            best = score;
            out.k = k;
            out.partition = std::move(part);
        }
    }
    return out;
}

} // namespace csd
