#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csd/simgen.hpp"

namespace csd::cli {

struct BenchOptions {
    ScenarioConfig base;  ///< samples, communities and size choices; scenario and seed are set per run
    std::uint64_t seed = 0;
    std::size_t replicates = 100;
    std::size_t min_core_size = 10;
    std::size_t spectral_k = 5;
    std::size_t dunn_k_min = 2;
    std::size_t dunn_k_max = 10;
    std::size_t restarts = 50;
    /// Applies to every scenario when set; otherwise 0.99, and 0.999 for S4.
    std::optional<double> cut_height;
    std::size_t wgcna_min_size = 40;
    std::vector<double> beta_grid;

    bool run_csd = true;
    bool run_spectral = true;
    bool run_dunn = true;
    bool run_wgcna = true;

    double cut_height_for(Scenario s) const;
};

/// Scores of one replicate; NaN marks a box that was not computed or whose algorithm failed.
struct ReplicateScores {
    std::size_t replicate = 0;
    double csd = 0;             ///< (a) CSD partition
    double csd_cores = 0;       ///< (b) core labels, outer genes as one class
    double spectral = 0;        ///< (c) spectral with known K
    double spectral_dunn = 0;   ///< (d) spectral with K chosen by Dunn
    double wgcna = 0;           ///< (e) WGCNA-lite, unclustered genes as one class
    double csd_outer = 0;       ///< (f) outer genes against irrelevant genes, all genes
    double wgcna_grey = 0;      ///< (g) unclustered genes against irrelevant genes, all genes
    double irrelevant_outside_cores = 0;
    double csd_clusters = 0;
    double dunn_k = 0;
    double wgcna_beta = 0;
    double wgcna_clusters = 0;
    std::string status = "ok";
};

/// Runs every replicate of one scenario; replicates are spread over `jobs` threads and
/// results are returned in replicate order.
std::vector<ReplicateScores> bench_scenario(Scenario scenario, const BenchOptions& options, std::size_t jobs);

/// One replicate, seeded from (options.seed, scenario, replicate).
ReplicateScores bench_replicate(Scenario scenario, const BenchOptions& options, std::size_t replicate);

std::string format_bench_table(const std::vector<ReplicateScores>& rows);

struct BoxSummary {
    std::string box;
    std::size_t n = 0;
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};
/// Five-number summaries (linear-interpolation quantiles) of each score column, NaN ignored.
std::vector<BoxSummary> summarize(const std::vector<ReplicateScores>& rows);
std::string format_summary(const std::vector<std::pair<Scenario, std::vector<BoxSummary>>>& table);

/// Linear-interpolation quantile of the non-NaN values; NaN when there are none.
double quantile(std::vector<double> values, double q);

} // namespace csd::cli
