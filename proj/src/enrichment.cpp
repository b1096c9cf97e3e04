#include "csd/enrichment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "csd/error.hpp"
#include "csd/tsv.hpp"

namespace csd {

void AnnotationSet::validate() const {
    for (const auto& [term, ids] : terms)
        for (const auto& id : ids)
            if (!universe.contains(id))
                throw DataError("term " + term + " annotates '" + id + "', which is not in the universe");
}

AnnotationSet AnnotationSet::restricted_to(const std::set<std::string>& ids) const {
    AnnotationSet out;
    out.universe = ids;
    for (const auto& [term, members] : terms) {
        std::set<std::string> kept;
        for (const auto& id : members)
            if (ids.contains(id)) kept.insert(id);
        if (!kept.empty()) out.terms.emplace(term, std::move(kept));
    }
    for (const auto& [term, name] : term_names)
        if (out.terms.contains(term)) out.term_names.emplace(term, name);
    return out;
}

AnnotationSet read_annotations(const std::filesystem::path& path) {
    tsv::Table table = tsv::read(path);
    AnnotationSet out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (r == 0 && row.size() >= 2 && row[0] == "variable_id" && row[1] == "term_id") continue;
        if (row.size() < 2 || row.size() > 3 || row[0].empty() || row[1].empty())
            throw DataError(path.string() + ":" + std::to_string(table.line_numbers[r]) +
                            ": expected variable_id, term_id[, term_name]");
        out.universe.insert(row[0]);
        out.terms[row[1]].insert(row[0]);
        if (row.size() == 3 && !row[2].empty()) out.term_names[row[1]] = row[2];
    }
    if (out.terms.empty()) throw DataError(path.string() + ": no annotations");
    return out;
}

namespace {

double log_choose(std::size_t n, std::size_t k) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

} // namespace

double hypergeometric_log_upper_tail(std::size_t k, std::size_t population, std::size_t successes,
                                     std::size_t draws) {
    if (successes > population || draws > population)
        throw ParameterError("hypergeometric parameters exceed the population");
    const std::size_t failures = population - successes;
    const std::size_t lo = draws > failures ? draws - failures : 0;
    const std::size_t hi = std::min(draws, successes);
    if (k <= lo) return 0.0;
    if (k > hi) return -std::numeric_limits<double>::infinity();

    const double log_total = log_choose(population, draws);
    std::vector<double> terms;
    terms.reserve(hi - k + 1);
    for (std::size_t x = k; x <= hi; ++x)
        terms.push_back(log_choose(successes, x) + log_choose(failures, draws - x) - log_total);
    const double peak = *std::max_element(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) sum += std::exp(t - peak);
    return std::min(0.0, peak + std::log(sum));
}

double hypergeometric_upper_tail(std::size_t k, std::size_t population, std::size_t successes, std::size_t draws) {
    return std::exp(hypergeometric_log_upper_tail(k, population, successes, draws));
}

std::vector<EnrichmentRow> hypergeometric_enrichment(const Partition& partition,
                                                     const std::vector<std::string>& node_ids,
                                                     const AnnotationSet& annotations, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0,1]");
    if (annotations.universe.empty()) throw DataError("annotation universe is empty");
    if (node_ids.size() != partition.size()) throw DataError("node id count does not match the partition");
    annotations.validate();
    if (partition.cluster_count() == 0) throw DataError("partition has no clusters to test");

    std::unordered_map<std::string, std::size_t> node_of;
    for (std::size_t v = 0; v < node_ids.size(); ++v) {
        if (!annotations.universe.contains(node_ids[v]))
            throw DataError("partition node '" + node_ids[v] + "' is not in the annotation universe");
        node_of.emplace(node_ids[v], v);
    }

    const std::size_t universe = annotations.universe.size();
    const auto sizes = partition.cluster_sizes();
    const std::size_t k = partition.cluster_count();

    std::vector<EnrichmentRow> rows;
    for (const auto& [term, members] : annotations.terms) {
        if (members.empty()) continue;
        std::vector<std::size_t> overlap(k, 0);
        for (const auto& id : members) {
            auto it = node_of.find(id);
            if (it != node_of.end() && partition[it->second] != kUnclustered)
                ++overlap[static_cast<std::size_t>(partition[it->second] - 1)];
        }
        for (std::size_t c = 0; c < k; ++c) {
            EnrichmentRow row{};
            row.cluster = static_cast<Label>(c + 1);
            row.term = term;
            row.overlap = overlap[c];
            row.cluster_size = sizes[c];
            row.term_size = members.size();
            row.universe_size = universe;
            row.p_value = hypergeometric_upper_tail(overlap[c], universe, members.size(), sizes[c]);
            rows.push_back(std::move(row));
        }
    }

    const double tests = static_cast<double>(rows.size());
    for (auto& row : rows) {
        row.adjusted_p_value = std::min(1.0, row.p_value * tests);
        row.significant = row.adjusted_p_value <= alpha;
    }
    std::sort(rows.begin(), rows.end(), [](const EnrichmentRow& a, const EnrichmentRow& b) {
        if (a.cluster != b.cluster) return a.cluster < b.cluster;
        if (a.p_value != b.p_value) return a.p_value < b.p_value;
        return a.term < b.term;
    });
    std::size_t rank = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        rank = (r > 0 && rows[r].cluster == rows[r - 1].cluster) ? rank + 1 : 1;
        rows[r].rank = rank;
    }
    return rows;
}

} // namespace csd
