#include "formats.hpp"

#include <sstream>
#include <unordered_set>

#include "csd/error.hpp"
#include "csd/tsv.hpp"

namespace csd::cli {

std::string format_partition(const std::vector<std::string>& ids, const Partition& partition,
                             const std::vector<bool>* in_core) {
    std::ostringstream out;
    out << "node_label\tcluster_id" << (in_core ? "\tin_core" : "") << '\n';
    for (std::size_t v = 0; v < partition.size(); ++v) {
        out << ids[v] << '\t' << partition[v];
        if (in_core) out << '\t' << ((*in_core)[v] ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

std::string format_cores(const std::vector<std::string>& ids, const CoreStructureFamily& cores) {
    const Partition labels = cores.core_labels();
    std::ostringstream out;
    out << "node_label\tcore_id\n";
    for (std::size_t v = 0; v < labels.size(); ++v) {
        out << ids[v] << '\t';
        if (labels[v] != kUnclustered) out << labels[v];
        out << '\n';
    }
    return out.str();
}

LabeledNodes read_labeled(const std::filesystem::path& path) {
    const tsv::Table table = tsv::read(path);
    if (table.rows.empty()) throw DataError(path.string() + ": empty label file");
    LabeledNodes out;
    std::size_t first = 0;
    int core_column = -1;
    if (table.rows[0].size() >= 2 && !tsv::parse_int(table.rows[0][1])) {
        first = 1;
        for (std::size_t c = 0; c < table.rows[0].size(); ++c)
            if (table.rows[0][c] == "in_core") core_column = static_cast<int>(c);
    }
    if (core_column >= 0) out.in_core.emplace();
    std::unordered_set<std::string> seen;
    for (std::size_t r = first; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path.string() + ":" + std::to_string(table.line_numbers[r]);
        if (row.size() < 2) throw DataError(where + ": expected an id and a label");
        auto label = tsv::parse_int(row[1]);
        if (!label || *label < 0) throw DataError(where + ": label must be a non-negative integer, got '" + row[1] + "'");
        if (!seen.insert(row[0]).second) throw DataError(where + ": duplicate id '" + row[0] + "'");
        out.ids.push_back(row[0]);
        out.labels.push_back(static_cast<Label>(*label));
        if (core_column >= 0) {
            if (row.size() <= static_cast<std::size_t>(core_column)) throw DataError(where + ": missing in_core value");
            const std::string& flag = row[static_cast<std::size_t>(core_column)];
            if (flag != "0" && flag != "1") throw DataError(where + ": in_core must be 0 or 1");
            out.in_core->push_back(flag == "1");
        }
    }
    if (out.ids.empty()) throw DataError(path.string() + ": no labeled rows");
    return out;
}

std::vector<std::size_t> parse_range(const std::string& text) {
    std::vector<long long> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        const std::string piece = text.substr(start, colon == std::string::npos ? std::string::npos : colon - start);
        auto v = tsv::parse_int(piece);
        if (!v) throw ParameterError("range '" + text + "' must look like A:B or A:B:STEP");
        parts.push_back(*v);
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    if (parts.size() < 2 || parts.size() > 3) throw ParameterError("range '" + text + "' must look like A:B or A:B:STEP");
    const long long a = parts[0], b = parts[1], step = parts.size() == 3 ? parts[2] : 1;
    if (a < 1) throw ParameterError("range '" + text + "' must start at 1 or above");
    if (b < a) throw ParameterError("range '" + text + "' is descending");
    if (step < 1) throw ParameterError("range step must be at least 1");
    std::vector<std::size_t> out;
    for (long long v = a; v <= b; v += step) out.push_back(static_cast<std::size_t>(v));
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        auto v = tsv::parse_double(piece);
        if (!v) throw ParameterError("'" + piece + "' in list '" + text + "' is not a number");
        out.push_back(*v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace csd::cli
