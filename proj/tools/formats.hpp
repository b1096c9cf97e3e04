#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "csd/cores.hpp"
#include "csd/partition.hpp"

namespace csd::cli {

/// `node_label cluster_id [in_core]`, one row per node in index order.
std::string format_partition(const std::vector<std::string>& ids, const Partition& partition,
                             const std::vector<bool>* in_core = nullptr);

/// `node_label core_id`, core_id empty for outer nodes.
std::string format_cores(const std::vector<std::string>& ids, const CoreStructureFamily& cores);

struct LabeledNodes {
    std::vector<std::string> ids;
    std::vector<Label> labels;
    /// Present when the file has an in_core column.
    std::optional<std::vector<bool>> in_core;

    Partition partition() const { return Partition::from_labels(labels); }
};

/// Reads a two-or-more column TSV of (id, non-negative integer label); a non-numeric label in
/// the first row marks a header. Reads partition files and simulation label files alike.
LabeledNodes read_labeled(const std::filesystem::path& path);

/// Inclusive integer range "A:B" or "A:B:STEP"; A <= B and STEP >= 1, else ParameterError.
std::vector<std::size_t> parse_range(const std::string& text);

std::vector<double> parse_double_list(const std::string& text);

} // namespace csd::cli
