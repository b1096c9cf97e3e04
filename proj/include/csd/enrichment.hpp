#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "csd/partition.hpp"

namespace csd {

/// Term annotations over a universe of variable ids.
struct AnnotationSet {
    std::set<std::string> universe;
    std::map<std::string, std::set<std::string>> terms;
    std::map<std::string, std::string> term_names;

    /// Throws DataError when an annotated id is outside the universe.
    void validate() const;
    /// Keeps only annotations of ids in `ids` and makes `ids` the universe.
    AnnotationSet restricted_to(const std::set<std::string>& ids) const;
};

/// Reads `variable_id  term_id  [term_name]` rows; the universe is every id seen.
/// A first row whose first two fields are "variable_id" and "term_id" is taken as a header.
AnnotationSet read_annotations(const std::filesystem::path& path);

struct EnrichmentRow {
    Label cluster;
    std::string term;
    std::size_t overlap;
    std::size_t cluster_size;
    std::size_t term_size;
    std::size_t universe_size;
    double p_value;
    double adjusted_p_value;  ///< Bonferroni over every (cluster, term) test performed.
    bool significant;         ///< adjusted_p_value <= alpha
    std::size_t rank;         ///< 1-based rank within the cluster by p-value.
};

/// log P[X >= k] for X ~ Hypergeometric(population, successes, draws).
double hypergeometric_log_upper_tail(std::size_t k, std::size_t population, std::size_t successes,
                                     std::size_t draws);
double hypergeometric_upper_tail(std::size_t k, std::size_t population, std::size_t successes, std::size_t draws);

/// One-sided over-representation test of every term with at least one annotated id in each
/// cluster. `node_ids[v]` names node v. Rows are grouped by cluster and sorted by p-value
/// (ties by term id) so the most enriched terms of each cluster come first.
std::vector<EnrichmentRow> hypergeometric_enrichment(const Partition& partition,
                                                     const std::vector<std::string>& node_ids,
                                                     const AnnotationSet& annotations, double alpha);

} // namespace csd
