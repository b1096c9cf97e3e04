#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "bench.hpp"
#include "csd/baselines.hpp"
#include "csd/cores.hpp"
#include "csd/dataio.hpp"
#include "csd/enrichment.hpp"
#include "csd/error.hpp"
#include "csd/evaluation.hpp"
#include "csd/simgen.hpp"
#include "csd/tsv.hpp"
#include "formats.hpp"
#include "manifest.hpp"

namespace csd::cli {

namespace {

/// Misuse of the command line detected after parsing; exits with status 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t default_jobs() {
    if (const char* env = std::getenv("CSD_JOBS")) {
        auto v = tsv::parse_int(env);
        if (v && *v >= 1) return static_cast<std::size_t>(*v);
    }
    return 1;
}

std::vector<std::size_t> range_flag(const std::string& flag, const std::string& text) {
    try {
        return parse_range(text);
    } catch (const ParameterError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

std::vector<double> list_flag(const std::string& flag, const std::string& text) {
    try {
        return parse_double_list(text);
    } catch (const ParameterError& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

std::string format_value(double v) { return tsv::format_double(v); }

class Summary {
public:
    template <typename T>
    void add(const std::string& key, const T& value) {
        std::ostringstream s;
        s << value;
        lines_ << key << '\t' << s.str() << '\n';
    }
    void add(const std::string& key, double value) { lines_ << key << '\t' << format_value(value) << '\n'; }
    std::string str() const { return lines_.str(); }

private:
    std::ostringstream lines_;
};

std::string padded(std::size_t v, std::size_t width) {
    std::string s = std::to_string(v);
    return std::string(s.size() < width ? width - s.size() : 0, '0') + s;
}

const std::map<std::string, Correlation> kCorrelations{{"pearson", Correlation::Pearson},
                                                       {"spearman", Correlation::Spearman}};

struct SimilarityInput {
    SimilarityMatrix w;
    std::vector<std::string> ids;
};

SimilarityInput load_similarity(const std::string& input, const std::string& method, RunRecorder& rec) {
    rec.input(input);
    SimilarityInput out;
    if (method == "precomputed") {
        out.w = read_similarity(input);
    } else {
        const ExpressionMatrix x = load_expression(input);
        out.w = similarity_matrix(x, kCorrelations.at(method));
    }
    for (std::size_t i = 0; i < out.w.size(); ++i) out.ids.push_back(out.w.label(i));
    rec.stage("load");
    return out;
}

// ---------------------------------------------------------------------------------------

struct SimulateArgs {
    std::string scenario;
    std::uint64_t seed = 0;
    std::size_t replicates = 1;
    std::size_t samples = 100;
    std::size_t communities = 5;
    std::string sizes = "50,100";
    bool similarity = false;
    std::string out;
};

void cmd_simulate(const SimulateArgs& a, std::size_t jobs, RunRecorder& rec) {
    ScenarioConfig cfg;
    cfg.scenario = parse_scenario(a.scenario);
    cfg.seed = a.seed;
    cfg.replicates = a.replicates;
    cfg.samples = a.samples;
    cfg.communities = a.communities;
    cfg.size_choices.clear();
    for (double s : list_flag("--sizes", a.sizes)) {
        if (s < 2 || s != std::floor(s)) throw UsageError("--sizes: community sizes must be integers >= 2");
        cfg.size_choices.push_back(static_cast<std::size_t>(s));
    }
    try {
        cfg.validate();
    } catch (const ParameterError& e) {
        throw UsageError(e.what());
    }
    rec.seed("seed", a.seed);
    rec.parameter("scenario", scenario_name(cfg.scenario));

    const auto suite = replicate_suite(cfg, jobs);
    rec.stage("generate");

    std::ostringstream table;
    table << "replicate\tvariables\trelevant\tcommunity_sizes\tcorrelation_ranges\tleader_correlation\tnoise_sd\n";
    const std::size_t width = std::max<std::size_t>(3, std::to_string(cfg.replicates).size());
    for (std::size_t r = 0; r < suite.size(); ++r) {
        const auto& d = suite[r];
        const std::string stem = "replicate_" + padded(r + 1, width);
        rec.write(stem + "_expression.tsv", format_expression(d.x));
        rec.write(stem + "_labels.tsv", format_labels(d));
        if (a.similarity) rec.write(stem + "_similarity.tsv", format_similarity(similarity_matrix(d.x, Correlation::Pearson)));
        std::string sizes, ranges;
        for (auto s : d.truth().cluster_sizes()) sizes += (sizes.empty() ? "" : ",") + std::to_string(s);
        for (auto range : d.ranges)
            ranges += (ranges.empty() ? "" : ",") + format_value(range.r_min) + ":" + format_value(range.r_max);
        table << r + 1 << '\t' << d.x.variables() << '\t' << d.relevant_count() << '\t' << sizes << '\t' << ranges
              << '\t' << format_value(d.leader_correlation) << '\t' << format_value(d.noise_sd) << '\n';
    }
    rec.write("replicates.tsv", table.str());
    rec.stage("write");
}

// ---------------------------------------------------------------------------------------

struct PreprocessArgs {
    std::string input;
    double max_missing = 0.2;
    double min_sd = 0.4;
    std::size_t knn_k = 10;
    bool standardize = false;
    std::string similarity = "none";
    std::string out;
};

void cmd_preprocess(const PreprocessArgs& a, RunRecorder& rec) {
    rec.input(a.input);
    const ExpressionMatrix raw = load_expression(a.input);
    rec.stage("load");
    auto [filtered, report] = filter_variables(raw, a.max_missing, a.min_sd);
    rec.stage("filter");
    auto [imputed, impute_report] = knn_impute(filtered, a.knn_k);
    report.imputed_cells = impute_report.imputed_cells;
    report.knn_k = a.knn_k;
    rec.stage("impute");
    ExpressionMatrix x = a.standardize ? csd::standardize(imputed) : std::move(imputed);
    rec.write("expression.tsv", format_expression(x));
    rec.write("report.txt", report.format() + "standardized\t" + (a.standardize ? "1" : "0") + "\n");
    if (a.similarity != "none") {
        rec.write("similarity.tsv", format_similarity(similarity_matrix(x, kCorrelations.at(a.similarity))));
        rec.stage("similarity");
    }
    rec.stage("write");
}

// ---------------------------------------------------------------------------------------

struct ClusterArgs {
    std::string algo;
    std::string input;
    std::string similarity = "precomputed";
    std::optional<std::size_t> min_core_size;
    std::optional<std::size_t> k;
    std::optional<std::string> k_range;
    std::size_t restarts = 50;
    std::uint64_t seed = 0;
    std::optional<std::string> beta_grid;
    double cut_height = 0.99;
    std::size_t min_size = 40;
    double r2_cutoff = 0.8;
    std::size_t bins = 10;
    std::string out;
};

WgcnaOptions wgcna_options(const ClusterArgs& a) {
    WgcnaOptions opt;
    opt.beta_grid = a.beta_grid ? list_flag("--beta-grid", *a.beta_grid) : default_beta_grid();
    opt.cut_height = a.cut_height;
    opt.min_size = a.min_size;
    opt.r_squared_cutoff = a.r2_cutoff;
    opt.bins = a.bins;
    return opt;
}

void cmd_cluster(const ClusterArgs& a, RunRecorder& rec) {
    if (a.algo == "csd" && !a.min_core_size) throw UsageError("--algo csd requires --min-core-size");
    if (a.algo == "spectral" && !a.k && !a.k_range) throw UsageError("--algo spectral requires --k or --k-range");
    if (a.algo == "spectral" && a.k && a.k_range) throw UsageError("--k and --k-range are mutually exclusive");
    std::vector<std::size_t> k_range;
    if (a.algo == "spectral" && a.k_range) k_range = range_flag("--k-range", *a.k_range);
    WgcnaOptions wopt;
    if (a.algo == "wgcna") wopt = wgcna_options(a);

    const SimilarityInput in = load_similarity(a.input, a.similarity, rec);
    Summary summary;
    summary.add("algorithm", a.algo);
    summary.add("nodes", in.w.size());
    rec.parameter("algorithm", a.algo);

    if (a.algo == "csd") {
        const CsdResult r = core_structure_clustering(in.w, *a.min_core_size);
        rec.stage("cluster");
        const auto in_core = r.cores.in_core();
        rec.write("partition.tsv", format_partition(in.ids, r.partition, &in_core));
        rec.write("cores.tsv", format_cores(in.ids, r.cores));
        summary.add("min_core_size", *a.min_core_size);
        summary.add("clusters", r.partition.cluster_count());
        summary.add("cores", r.cores.core_count());
        summary.add("core_nodes", r.cores.core_node_count());
        summary.add("outer_nodes", r.cores.outer.size());
    } else if (a.algo == "spectral") {
        rec.seed("seed", a.seed);
        Partition part;
        if (a.k) {
            part = spectral_clustering(in.w, *a.k, a.restarts, a.seed);
            summary.add("k", *a.k);
        } else {
            const DunnSelection s = select_k_by_dunn(in.w, k_range.front(), k_range.back(), a.restarts, a.seed);
            part = s.partition;
            std::ostringstream dunn;
            dunn << "k\tdunn\n";
            for (std::size_t i = 0; i < s.dunn.size(); ++i) dunn << k_range.front() + i << '\t' << format_value(s.dunn[i]) << '\n';
            rec.write("dunn.tsv", dunn.str());
            summary.add("k", s.k);
            summary.add("k_selected_by", std::string("dunn"));
        }
        rec.stage("cluster");
        rec.write("partition.tsv", format_partition(in.ids, part));
        summary.add("restarts", a.restarts);
        summary.add("seed", a.seed);
        summary.add("clusters", part.cluster_count());
    } else {
        const WgcnaResult r = wgcna_lite(in.w, wopt);
        rec.stage("cluster");
        rec.write("partition.tsv", format_partition(in.ids, r.partition));
        rec.write("fit_report.tsv", format_fit_report(r.soft_threshold.report));
        rec.write("dendrogram.tsv", format_dendrogram(r.dendrogram));
        summary.add("beta", r.soft_threshold.beta);
        summary.add("cut_height", wopt.cut_height);
        summary.add("min_size", wopt.min_size);
        summary.add("clusters", r.partition.cluster_count());
        summary.add("unclustered", r.partition.unclustered_count());
        summary.add("guarded_tom_entries", r.guarded_entries);
    }
    rec.write("summary.txt", summary.str());
    rec.stage("write");
}

// ---------------------------------------------------------------------------------------

struct SweepArgs : ClusterArgs {
    std::optional<std::string> n_range;
    std::optional<std::string> min_size_range;
};

void cmd_sweep(const SweepArgs& a, std::size_t jobs, RunRecorder& rec) {
    std::vector<std::size_t> values;
    if (a.algo == "csd") {
        if (!a.n_range) throw UsageError("--algo csd requires --n-range");
        values = range_flag("--n-range", *a.n_range);
    } else if (a.algo == "spectral") {
        if (!a.k_range) throw UsageError("--algo spectral requires --k-range");
        values = range_flag("--k-range", *a.k_range);
    } else {
        if (!a.min_size_range) throw UsageError("--algo wgcna requires --min-size-range");
        values = range_flag("--min-size-range", *a.min_size_range);
    }
    const WgcnaOptions wopt = a.algo == "wgcna" ? wgcna_options(a) : WgcnaOptions{};

    const SimilarityInput in = load_similarity(a.input, a.similarity, rec);
    rec.parameter("algorithm", a.algo);

    std::vector<Partition> parts;
    std::vector<std::vector<std::string>> extra;  // per value: extra series columns
    std::vector<std::string> extra_names;
    std::vector<double> ari;
    UnclusteredMode mode = UnclusteredMode::Drop;

    if (a.algo == "csd") {
        const SweepResult s = sweep(in.w, values, jobs);
        extra_names = {"cores", "core_nodes", "outer_nodes"};
        for (const auto& e : s.entries) {
            parts.push_back(e.result.partition);
            extra.push_back({std::to_string(e.result.cores.core_count()), std::to_string(e.result.cores.core_node_count()),
                             std::to_string(e.result.cores.outer.size())});
        }
        ari = s.consecutive_ari;
    } else if (a.algo == "spectral") {
        rec.seed("seed", a.seed);
        for (std::size_t k : values) {
            parts.push_back(spectral_clustering(in.w, k, a.restarts, a.seed));
            extra.emplace_back();
        }
    } else {
        const WgcnaResult tree = wgcna_tree(in.w, wopt);
        extra_names = {"unclustered"};
        for (std::size_t m : values) {
            parts.push_back(cut_dendrogram(tree.dendrogram, wopt.cut_height, m));
            extra.push_back({std::to_string(parts.back().unclustered_count())});
        }
        mode = UnclusteredMode::AsClass;
        rec.note("consecutive ARI treats unclustered nodes as one class");
    }
    if (ari.empty())
        for (std::size_t i = 1; i < parts.size(); ++i) ari.push_back(adjusted_rand(parts[i - 1], parts[i], mode));
    rec.stage("sweep");

    const std::string param = a.algo == "csd" ? "min_core_size" : a.algo == "spectral" ? "k" : "min_size";
    std::ostringstream series;
    series << param << "\tclusters";
    for (const auto& n : extra_names) series << '\t' << n;
    series << "\tconsecutive_ari\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        series << values[i] << '\t' << parts[i].cluster_count();
        for (const auto& v : extra[i]) series << '\t' << v;
        series << '\t' << (i == 0 ? std::string() : format_value(ari[i - 1])) << '\n';
    }
    rec.write("series.tsv", series.str());

    std::ostringstream table;
    table << "node_label";
    for (std::size_t v : values) table << '\t' << param << '=' << v;
    table << '\n';
    for (std::size_t node = 0; node < in.ids.size(); ++node) {
        table << in.ids[node];
        for (const auto& p : parts) table << '\t' << p[node];
        table << '\n';
    }
    rec.write("partitions.tsv", table.str());
    rec.stage("write");
}

// ---------------------------------------------------------------------------------------

struct EvaluateArgs {
    std::string partition;
    std::optional<std::string> truth;
    std::optional<std::string> similarity;
    std::optional<std::string> expression;
    std::string unclustered = "drop";
    std::string out;
};

/// Position in `ids` of each of `wanted`, erroring on the first absent id.
std::vector<std::size_t> align(const std::vector<std::string>& wanted, const std::vector<std::string>& ids,
                               const std::string& what) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
    std::vector<std::size_t> out;
    for (const auto& id : wanted) {
        auto it = index.find(id);
        if (it == index.end()) throw DataError("partition node '" + id + "' is missing from the " + what);
        out.push_back(it->second);
    }
    return out;
}

void cmd_evaluate(const EvaluateArgs& a, RunRecorder& rec) {
    if (!a.truth && !a.similarity && !a.expression)
        throw UsageError("no metric can be computed: adjusted Rand needs --truth; Dunn, silhouette and modularity "
                         "need --similarity; FOM needs --expression");
    rec.input(a.partition);
    const LabeledNodes nodes = read_labeled(a.partition);
    const Partition part = nodes.partition();
    const UnclusteredMode mode = a.unclustered == "class" ? UnclusteredMode::AsClass : UnclusteredMode::Drop;

    Summary summary;
    summary.add("nodes", part.size());
    summary.add("clusters", part.cluster_count());
    summary.add("unclustered", part.unclustered_count());
    std::vector<std::pair<std::string, double>> metrics;
    auto guarded = [&](const std::string& name, auto&& compute) {
        try {
            metrics.emplace_back(name, compute());
        } catch (const ParameterError& e) {
            metrics.emplace_back(name, std::nan(""));
            summary.add(name + "_note", std::string(e.what()));
        } catch (const NumericalError& e) {
            metrics.emplace_back(name, std::nan(""));
            summary.add(name + "_note", std::string(e.what()));
        }
    };

    if (a.truth) {
        rec.input(*a.truth);
        const LabeledNodes truth = read_labeled(*a.truth);
        std::unordered_map<std::string, Label> by_id;
        for (std::size_t i = 0; i < truth.ids.size(); ++i) by_id.emplace(truth.ids[i], truth.labels[i]);
        std::vector<Label> aligned;
        std::size_t missing = 0;
        for (const auto& id : nodes.ids) {
            auto it = by_id.find(id);
            aligned.push_back(it == by_id.end() ? kUnclustered : it->second);
            missing += it == by_id.end();
        }
        summary.add("truth_missing_nodes", missing);
        summary.add("ari_unclustered_mode", a.unclustered);
        metrics.emplace_back("adjusted_rand", adjusted_rand(part, Partition::from_labels(aligned), mode));
    }
    if (a.similarity) {
        rec.input(*a.similarity);
        const SimilarityMatrix raw = read_similarity(*a.similarity);
        if (raw.size() != part.size())
            throw DataError("similarity has " + std::to_string(raw.size()) + " nodes, partition has " +
                            std::to_string(part.size()));
        const SimilarityMatrix w = raw.labels().empty() ? raw : raw.submatrix(align(nodes.ids, raw.labels(), "similarity"));
        const DissimilarityMatrix d = DissimilarityMatrix::from_similarity(w);
        guarded("dunn", [&] { return dunn_index(d, part); });
        std::optional<SilhouetteResult> sil;
        guarded("silhouette", [&] {
            sil = silhouette(d, part);
            return sil->mean;
        });
        guarded("modularity", [&] { return modularity(w, part); });
        if (sil) {
            std::ostringstream per_node;
            per_node << "node_label\tcluster_id\tsilhouette\n";
            for (std::size_t i = 0; i < part.size(); ++i)
                per_node << nodes.ids[i] << '\t' << part[i] << '\t' << format_value(sil->values[i]) << '\n';
            rec.write("silhouette.tsv", per_node.str());
        }
    }
    if (a.expression) {
        rec.input(*a.expression);
        const ExpressionMatrix x = load_expression(*a.expression);
        const ExpressionMatrix aligned = x.select_variables(align(nodes.ids, x.variable_ids(), "expression data"));
        metrics.emplace_back("fom", figure_of_merit(aligned, part));
    }
    rec.stage("evaluate");

    std::ostringstream table;
    table << "metric\tvalue\n";
    for (const auto& [name, value] : metrics) {
        table << name << '\t' << format_value(value) << '\n';
        summary.add(name, value);
    }
    rec.write("metrics.tsv", table.str());
    rec.write("summary.txt", summary.str());
    rec.stage("write");
}

// ---------------------------------------------------------------------------------------

struct EnrichArgs {
    std::string partition;
    std::string annotations;
    double alpha = 0.05;
    std::size_t top = 3;
    std::string out;
};

void cmd_enrich(const EnrichArgs& a, RunRecorder& rec) {
    rec.input(a.partition);
    rec.input(a.annotations);
    const LabeledNodes nodes = read_labeled(a.partition);
    const AnnotationSet all = read_annotations(a.annotations);
    const std::set<std::string> ids(nodes.ids.begin(), nodes.ids.end());
    const AnnotationSet annotations = all.restricted_to(ids);
    std::size_t annotated = 0;
    for (const auto& id : nodes.ids) annotated += all.universe.count(id);
    if (annotated == 0) throw DataError("no partition node appears in the annotation file");
    rec.note("enrichment universe: the partition's node ids");

    const auto rows = hypergeometric_enrichment(nodes.partition(), nodes.ids, annotations, a.alpha);
    rec.stage("enrich");

    auto header = [] {
        return std::string("cluster_id\trank\tterm_id\tterm_name\toverlap\tcluster_size\tterm_size\tuniverse_size\t"
                           "p_value\tadjusted_p_value\tsignificant\n");
    };
    auto line = [&](const EnrichmentRow& r) {
        std::ostringstream s;
        auto name = annotations.term_names.find(r.term);
        s << r.cluster << '\t' << r.rank << '\t' << r.term << '\t'
          << (name == annotations.term_names.end() ? "" : name->second) << '\t' << r.overlap << '\t' << r.cluster_size
          << '\t' << r.term_size << '\t' << r.universe_size << '\t' << format_value(r.p_value) << '\t'
          << format_value(r.adjusted_p_value) << '\t' << (r.significant ? 1 : 0) << '\n';
        return s.str();
    };
    std::string full = header(), top = header();
    std::map<Label, std::size_t> shown;
    std::size_t significant = 0;
    for (const auto& r : rows) {
        full += line(r);
        if (!r.significant) continue;
        ++significant;
        if (shown[r.cluster]++ < a.top) top += line(r);
    }
    rec.write("enrichment.tsv", full);
    rec.write("top_terms.tsv", top);
    Summary summary;
    summary.add("clusters", nodes.partition().cluster_count());
    summary.add("tests", rows.size());
    summary.add("significant", significant);
    summary.add("alpha", a.alpha);
    summary.add("universe_size", annotations.universe.size());
    summary.add("unannotated_nodes", nodes.ids.size() - annotated);
    rec.write("summary.txt", summary.str());
    rec.stage("write");
}

// ---------------------------------------------------------------------------------------

struct BenchArgs {
    std::string scenarios = "S1,S2,S3,S4,S5,S6";
    std::size_t replicates = 100;
    std::uint64_t seed = 0;
    std::size_t samples = 100;
    std::size_t communities = 5;
    std::string sizes = "50,100";
    std::size_t min_core_size = 10;
    std::size_t k = 5;
    std::string dunn_range = "2:10";
    std::size_t restarts = 50;
    std::optional<double> cut_height;
    std::size_t wgcna_min_size = 40;
    std::optional<std::string> beta_grid;
    std::vector<std::string> skip;
    std::string out;
};

void cmd_bench(const BenchArgs& a, std::size_t jobs, RunRecorder& rec, std::ostream& log) {
    std::vector<Scenario> scenarios;
    std::size_t start = 0;
    while (start <= a.scenarios.size()) {
        const std::size_t comma = a.scenarios.find(',', start);
        const std::string name = a.scenarios.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            scenarios.push_back(parse_scenario(name));
        } catch (const ParameterError& e) {
            throw UsageError(std::string("--scenarios: ") + e.what());
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }

    BenchOptions opt;
    opt.base.samples = a.samples;
    opt.base.communities = a.communities;
    opt.base.size_choices.clear();
    for (double s : list_flag("--sizes", a.sizes)) {
        if (s < 2 || s != std::floor(s)) throw UsageError("--sizes: community sizes must be integers >= 2");
        opt.base.size_choices.push_back(static_cast<std::size_t>(s));
    }
    opt.seed = a.seed;
    opt.replicates = a.replicates;
    opt.min_core_size = a.min_core_size;
    opt.spectral_k = a.k;
    const auto dunn = range_flag("--dunn-range", a.dunn_range);
    opt.dunn_k_min = dunn.front();
    opt.dunn_k_max = dunn.back();
    opt.restarts = a.restarts;
    opt.cut_height = a.cut_height;
    opt.wgcna_min_size = a.wgcna_min_size;
    if (a.beta_grid) opt.beta_grid = list_flag("--beta-grid", *a.beta_grid);
    for (const auto& s : a.skip) {
        if (s == "csd") opt.run_csd = false;
        else if (s == "spectral") opt.run_spectral = false;
        else if (s == "dunn") opt.run_dunn = false;
        else if (s == "wgcna") opt.run_wgcna = false;
        else throw UsageError("--skip: unknown algorithm '" + s + "' (csd, spectral, dunn, wgcna)");
    }

    rec.seed("seed", a.seed);
    for (Scenario s : scenarios) {
        rec.seed("dataset_stream_" + scenario_name(s), derive_seed(a.seed, {static_cast<std::uint64_t>(s)}));
        rec.parameter("wgcna_cut_height_" + scenario_name(s), format_value(opt.cut_height_for(s)));
    }
    if (!a.cut_height) rec.note("WGCNA cut height 0.99 for every scenario except S4, which uses 0.999");

    std::vector<std::pair<Scenario, std::vector<BoxSummary>>> summary;
    for (Scenario s : scenarios) {
        const auto rows = bench_scenario(s, opt, jobs);
        rec.write("bench_" + scenario_name(s) + ".tsv", format_bench_table(rows));
        rec.stage(scenario_name(s));
        std::size_t failed = 0;
        for (const auto& r : rows) failed += r.status != "ok";
        if (failed) rec.note(scenario_name(s) + ": " + std::to_string(failed) + " replicate(s) with failures");
        summary.emplace_back(s, summarize(rows));
        rec.write("summary.tsv", format_summary(summary));
        log << scenario_name(s) << ": " << rows.size() << " replicates done" << (failed ? ", with failures" : "") << '\n';
    }
}

// ---------------------------------------------------------------------------------------

void add_out(CLI::App* cmd, std::string& out) {
    cmd->add_option("--out", out, "Output directory")->required();
}

void add_similarity_source(CLI::App* cmd, ClusterArgs& a) {
    cmd->add_option("--input", a.input, "Similarity TSV, or expression TSV with --similarity pearson|spearman")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--similarity", a.similarity, "How to read --input")
        ->check(CLI::IsMember({"precomputed", "pearson", "spearman"}));
}

void add_algorithm_flags(CLI::App* cmd, ClusterArgs& a) {
    cmd->add_option("--algo", a.algo, "csd, spectral or wgcna")->required()->check(CLI::IsMember({"csd", "spectral", "wgcna"}));
    cmd->add_option("--restarts", a.restarts, "k-means restarts (spectral)")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", a.seed, "Random seed (spectral)");
    cmd->add_option("--beta-grid", a.beta_grid, "Comma-separated soft-threshold powers (wgcna)");
    cmd->add_option("--cut-height", a.cut_height, "Dendrogram cut height (wgcna)")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--r2-cutoff", a.r2_cutoff, "Scale-free fit R^2 cutoff (wgcna)")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--bins", a.bins, "Connectivity bins for the scale-free fit (wgcna)")->check(CLI::Range(2, 1000));
}

std::vector<std::string> command_line(const std::vector<std::string>& args) {
    std::vector<std::string> out{"csdtool"};
    out.insert(out.end(), args.begin(), args.end());
    return out;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Core structure detection clustering of co-expression networks, with baselines and benchmarks",
                 "csdtool"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::size_t jobs = default_jobs();
    app.add_option("--jobs", jobs, "Worker threads (default: CSD_JOBS or 1)")->check(CLI::PositiveNumber);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Generate labeled synthetic expression data");
    simulate->add_option("--scenario", sim.scenario, "S1..S6")->required()->check(CLI::Validator(
        [](std::string& s) {
            try {
                parse_scenario(s);
            } catch (const ParameterError& e) {
                return std::string(e.what());
            }
            return std::string();
        },
        "SCENARIO"));
    simulate->add_option("--seed", sim.seed, "Master seed");
    simulate->add_option("--replicates", sim.replicates, "Number of datasets")->check(CLI::PositiveNumber);
    simulate->add_option("--samples", sim.samples, "Samples per profile")->check(CLI::Range(2, 1000000));
    simulate->add_option("--communities", sim.communities, "Communities per dataset")->check(CLI::PositiveNumber);
    simulate->add_option("--sizes", sim.sizes, "Comma-separated community size choices");
    simulate->add_flag("--write-similarity", sim.similarity, "Also write absolute Pearson similarity matrices");
    add_out(simulate, sim.out);

    PreprocessArgs pre;
    auto* preprocess = app.add_subcommand("preprocess", "Filter, impute and optionally standardize expression data");
    preprocess->add_option("--input", pre.input, "Expression TSV")->required()->check(CLI::ExistingFile);
    preprocess->add_option("--max-missing", pre.max_missing, "Largest kept missing fraction")->check(CLI::Range(0.0, 1.0));
    preprocess->add_option("--min-sd", pre.min_sd, "Smallest kept standard deviation")->check(CLI::NonNegativeNumber);
    preprocess->add_option("--knn-k", pre.knn_k, "Neighbors for KNN imputation")->check(CLI::PositiveNumber);
    preprocess->add_flag("--standardize", pre.standardize, "Scale every variable to zero mean and unit sd");
    preprocess->add_option("--similarity", pre.similarity, "Also write a similarity matrix")
        ->check(CLI::IsMember({"none", "pearson", "spearman"}));
    add_out(preprocess, pre.out);

    ClusterArgs cl;
    auto* cluster = app.add_subcommand("cluster", "Cluster one network");
    add_algorithm_flags(cluster, cl);
    add_similarity_source(cluster, cl);
    cluster->add_option("--min-core-size", cl.min_core_size, "Minimum core size n (csd)")->check(CLI::PositiveNumber);
    cluster->add_option("--k", cl.k, "Number of clusters (spectral)")->check(CLI::Range(2, 1000000));
    cluster->add_option("--k-range", cl.k_range, "A:B, choose K by the Dunn index (spectral)");
    cluster->add_option("--min-size", cl.min_size, "Smallest module (wgcna)")->check(CLI::PositiveNumber);
    add_out(cluster, cl.out);

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run one algorithm over a parameter range");
    add_algorithm_flags(sweep_cmd, sw);
    add_similarity_source(sweep_cmd, sw);
    sweep_cmd->add_option("--n-range", sw.n_range, "A:B[:STEP] minimum core sizes (csd)");
    sweep_cmd->add_option("--k-range", sw.k_range, "A:B[:STEP] cluster counts (spectral)");
    sweep_cmd->add_option("--min-size-range", sw.min_size_range, "A:B[:STEP] module sizes (wgcna)");
    add_out(sweep_cmd, sw.out);

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "Validity indices of a partition");
    evaluate->add_option("--partition", ev.partition, "Partition TSV")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--truth", ev.truth, "Reference labels TSV")->check(CLI::ExistingFile);
    evaluate->add_option("--similarity", ev.similarity, "Similarity TSV")->check(CLI::ExistingFile);
    evaluate->add_option("--expression", ev.expression, "Expression TSV")->check(CLI::ExistingFile);
    evaluate->add_option("--unclustered", ev.unclustered, "drop or class: label 0 handling in the adjusted Rand index")
        ->check(CLI::IsMember({"drop", "class"}));
    add_out(evaluate, ev.out);

    EnrichArgs en;
    auto* enrich = app.add_subcommand("enrich", "Hypergeometric term enrichment per cluster");
    enrich->add_option("--partition", en.partition, "Partition TSV")->required()->check(CLI::ExistingFile);
    enrich->add_option("--annotations", en.annotations, "variable_id, term_id, [term_name] TSV")
        ->required()
        ->check(CLI::ExistingFile);
    enrich->add_option("--alpha", en.alpha, "Bonferroni significance level")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0));
    enrich->add_option("--top", en.top, "Significant terms listed per cluster")->check(CLI::PositiveNumber);
    add_out(enrich, en.out);

    BenchArgs be;
    auto* bench = app.add_subcommand("bench", "Simulation study over the six scenarios");
    bench->add_option("--scenarios", be.scenarios, "Comma-separated scenarios");
    bench->add_option("--replicates", be.replicates, "Datasets per scenario")->check(CLI::PositiveNumber);
    bench->add_option("--seed", be.seed, "Master seed");
    bench->add_option("--samples", be.samples, "Samples per profile")->check(CLI::Range(2, 1000000));
    bench->add_option("--communities", be.communities, "Communities per dataset")->check(CLI::PositiveNumber);
    bench->add_option("--sizes", be.sizes, "Comma-separated community size choices");
    bench->add_option("--min-core-size", be.min_core_size, "CSD minimum core size")->check(CLI::PositiveNumber);
    bench->add_option("--k", be.k, "Known cluster count for spectral clustering")->check(CLI::Range(2, 1000000));
    bench->add_option("--dunn-range", be.dunn_range, "K range searched with the Dunn index");
    bench->add_option("--restarts", be.restarts, "k-means restarts")->check(CLI::PositiveNumber);
    bench->add_option("--wgcna-cut-height", be.cut_height, "Cut height for every scenario (default 0.99, S4 0.999)")
        ->check(CLI::Range(0.0, 1.0));
    bench->add_option("--wgcna-min-size", be.wgcna_min_size, "WGCNA minimum module size")->check(CLI::PositiveNumber);
    bench->add_option("--beta-grid", be.beta_grid, "Comma-separated soft-threshold powers");
    bench->add_option("--skip", be.skip, "Algorithms to leave out: csd, spectral, dunn, wgcna")->delimiter(',');
    add_out(bench, be.out);

    std::vector<std::string> argv_storage = command_line(args);
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*simulate) {
            RunRecorder rec(sim.out, argv_storage);
            cmd_simulate(sim, jobs, rec);
            rec.finish();
        } else if (*preprocess) {
            RunRecorder rec(pre.out, argv_storage);
            cmd_preprocess(pre, rec);
            rec.finish();
        } else if (*cluster) {
            RunRecorder rec(cl.out, argv_storage);
            cmd_cluster(cl, rec);
            rec.finish();
        } else if (*sweep_cmd) {
            RunRecorder rec(sw.out, argv_storage);
            cmd_sweep(sw, jobs, rec);
            rec.finish();
        } else if (*evaluate) {
            RunRecorder rec(ev.out, argv_storage);
            cmd_evaluate(ev, rec);
            rec.finish();
        } else if (*enrich) {
            RunRecorder rec(en.out, argv_storage);
            cmd_enrich(en, rec);
            rec.finish();
        } else if (*bench) {
            RunRecorder rec(be.out, argv_storage);
            try {
                cmd_bench(be, jobs, rec, out);
            } catch (...) {
                rec.note("run aborted; tables written so far are kept");
                rec.finish();
                throw;
            }
            rec.finish();
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace csd::cli
