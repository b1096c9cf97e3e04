#include "bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "csd/baselines.hpp"
#include "csd/cores.hpp"
#include "csd/dataio.hpp"
#include "csd/evaluation.hpp"
#include "csd/parallel.hpp"
#include "csd/tsv.hpp"

namespace csd::cli {

namespace {

constexpr double kNa = std::numeric_limits<double>::quiet_NaN();

std::uint64_t scenario_index(Scenario s) { return static_cast<std::uint64_t>(s); }

struct Column {
    const char* name;
    double ReplicateScores::*field;
};

const Column kScoreColumns[] = {
    {"a_csd", &ReplicateScores::csd},
    {"b_csd_cores", &ReplicateScores::csd_cores},
    {"c_spectral_known_k", &ReplicateScores::spectral},
    {"d_spectral_dunn", &ReplicateScores::spectral_dunn},
    {"e_wgcna", &ReplicateScores::wgcna},
    {"f_csd_outer_vs_irrelevant", &ReplicateScores::csd_outer},
    {"g_wgcna_unclustered_vs_irrelevant", &ReplicateScores::wgcna_grey},
    {"irrelevant_outside_cores", &ReplicateScores::irrelevant_outside_cores},
};

const Column kExtraColumns[] = {
    {"csd_clusters", &ReplicateScores::csd_clusters},
    {"dunn_k", &ReplicateScores::dunn_k},
    {"wgcna_beta", &ReplicateScores::wgcna_beta},
    {"wgcna_clusters", &ReplicateScores::wgcna_clusters},
};

void fail(ReplicateScores& s, const std::string& what, const std::exception& e) {
    std::string msg = what + ": " + e.what();
    std::replace(msg.begin(), msg.end(), '\t', ' ');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    s.status = s.status == "ok" ? msg : s.status + "; " + msg;
}

} // namespace

double BenchOptions::cut_height_for(Scenario s) const {
    if (cut_height) return *cut_height;
    return s == Scenario::S4 ? 0.999 : 0.99;
}

ReplicateScores bench_replicate(Scenario scenario, const BenchOptions& options, std::size_t replicate) {
    ReplicateScores s;
    s.replicate = replicate;
    for (const auto& c : kScoreColumns) s.*c.field = kNa;
    for (const auto& c : kExtraColumns) s.*c.field = kNa;

    ScenarioConfig cfg = options.base;
    cfg.scenario = scenario;
    cfg.seed = derive_seed(options.seed, {scenario_index(scenario)});
    cfg.replicates = 1;
    const LabeledDataset data = generate_scenario(cfg, replicate);
    const SimilarityMatrix w = similarity_matrix(data.x, Correlation::Pearson);
    const Partition truth = data.truth();

    std::vector<std::size_t> relevant;
    for (std::size_t v = 0; v < data.labels.size(); ++v)
        if (data.labels[v] != kUnclustered) relevant.push_back(v);
    const bool has_irrelevant = relevant.size() < data.labels.size();
    const Partition truth_relevant = truth.subset(relevant);
    auto on_relevant = [&](const Partition& p, UnclusteredMode mode = UnclusteredMode::Drop) {
        return adjusted_rand(p.subset(relevant), truth_relevant, mode);
    };

    if (options.run_csd) try {
            const CsdResult r = core_structure_clustering(w, options.min_core_size);
            s.csd = on_relevant(r.partition);
            const Partition cores = r.cores.core_labels().with_unclustered_as_class();
            s.csd_cores = on_relevant(cores);
            s.csd_clusters = static_cast<double>(r.partition.cluster_count());
            if (has_irrelevant) {
                s.csd_outer = adjusted_rand(r.cores.core_labels(), truth, UnclusteredMode::AsClass);
                const auto in_core = r.cores.in_core();
                std::size_t outside = 0, irrelevant = 0;
                for (std::size_t v = 0; v < data.labels.size(); ++v)
                    if (data.labels[v] == kUnclustered) {
                        ++irrelevant;
                        outside += !in_core[v];
                    }
                s.irrelevant_outside_cores = static_cast<double>(outside) / static_cast<double>(irrelevant);
            }
        } catch (const std::exception& e) {
            fail(s, "csd", e);
        }

    const std::uint64_t base_seed = derive_seed(options.seed, {scenario_index(scenario), replicate});
    if (options.run_spectral) try {
            s.spectral = on_relevant(spectral_clustering(w, options.spectral_k, options.restarts, derive_seed(base_seed, {1})));
        } catch (const std::exception& e) {
            fail(s, "spectral", e);
        }
    if (options.run_dunn) try {
            const DunnSelection d = select_k_by_dunn(w, options.dunn_k_min, options.dunn_k_max, options.restarts,
                                                     derive_seed(base_seed, {2}));
            s.spectral_dunn = on_relevant(d.partition);
            s.dunn_k = static_cast<double>(d.k);
        } catch (const std::exception& e) {
            fail(s, "spectral_dunn", e);
        }
    if (options.run_wgcna) try {
            WgcnaOptions opt;
            opt.beta_grid = options.beta_grid.empty() ? default_beta_grid() : options.beta_grid;
            opt.cut_height = options.cut_height_for(scenario);
            opt.min_size = options.wgcna_min_size;
            const WgcnaResult r = wgcna_lite(w, opt);
            s.wgcna = on_relevant(r.partition, UnclusteredMode::AsClass);
            s.wgcna_beta = r.soft_threshold.beta;
            s.wgcna_clusters = static_cast<double>(r.partition.cluster_count());
            if (has_irrelevant) s.wgcna_grey = adjusted_rand(r.partition, truth, UnclusteredMode::AsClass);
        } catch (const std::exception& e) {
            fail(s, "wgcna", e);
        }
    return s;
}

std::vector<ReplicateScores> bench_scenario(Scenario scenario, const BenchOptions& options, std::size_t jobs) {
    std::vector<ReplicateScores> rows(options.replicates);
    parallel_for(options.replicates, jobs, [&](std::size_t r) {
        try {
            rows[r] = bench_replicate(scenario, options, r);
        } catch (const std::exception& e) {
            ReplicateScores failed;
            failed.replicate = r;
            for (const auto& c : kScoreColumns) failed.*c.field = kNa;
            for (const auto& c : kExtraColumns) failed.*c.field = kNa;
            fail(failed, "dataset", e);
            rows[r] = failed;
        }
    });
    return rows;
}

std::string format_bench_table(const std::vector<ReplicateScores>& rows) {
    std::ostringstream out;
    out << "replicate";
    for (const auto& c : kScoreColumns) out << '\t' << c.name;
    for (const auto& c : kExtraColumns) out << '\t' << c.name;
    out << "\tstatus\n";
    for (const auto& r : rows) {
        out << r.replicate;
        for (const auto& c : kScoreColumns) out << '\t' << tsv::format_double(r.*c.field);
        for (const auto& c : kExtraColumns) out << '\t' << tsv::format_double(r.*c.field);
        out << '\t' << r.status << '\n';
    }
    return out.str();
}

double quantile(std::vector<double> values, double q) {
    values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }), values.end());
    if (values.empty()) return kNa;
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<BoxSummary> summarize(const std::vector<ReplicateScores>& rows) {
    std::vector<BoxSummary> out;
    for (const auto& c : kScoreColumns) {
        std::vector<double> v;
        for (const auto& r : rows) v.push_back(r.*c.field);
        BoxSummary b;
        b.box = c.name;
        b.n = static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](double x) { return !std::isnan(x); }));
        b.min = quantile(v, 0.0);
        b.q1 = quantile(v, 0.25);
        b.median = quantile(v, 0.5);
        b.q3 = quantile(v, 0.75);
        b.max = quantile(v, 1.0);
        out.push_back(b);
    }
    return out;
}

std::string format_summary(const std::vector<std::pair<Scenario, std::vector<BoxSummary>>>& table) {
    std::ostringstream out;
    out << "scenario\tbox\tn\tmin\tq1\tmedian\tq3\tmax\n";
    for (const auto& [scenario, boxes] : table)
        for (const auto& b : boxes)
            out << scenario_name(scenario) << '\t' << b.box << '\t' << b.n << '\t' << tsv::format_double(b.min) << '\t'
                << tsv::format_double(b.q1) << '\t' << tsv::format_double(b.median) << '\t'
                << tsv::format_double(b.q3) << '\t' << tsv::format_double(b.max) << '\n';
    return out.str();
}

} // namespace csd::cli
