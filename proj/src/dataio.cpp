#include "csd/dataio.hpp"

#include <algorithm>
#include <fstream>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <Eigen/Dense>

#include "csd/error.hpp"
#include "csd/tsv.hpp"

namespace csd {

ExpressionMatrix parse_expression(std::string_view text, const std::string& source) {
    tsv::Table table = tsv::parse(text);
    if (table.rows.empty()) throw DataError(source + ": empty expression file");
    const tsv::Row& header = table.rows.front();
    if (header.size() < 2) throw DataError(source + ": header needs a corner cell and at least one variable id");

    std::vector<std::string> variable_ids(header.begin() + 1, header.end());
    std::unordered_set<std::string> seen;
    for (const auto& id : variable_ids) {
        if (id.empty()) throw DataError(source + ":" + std::to_string(table.line_numbers[0]) + ": empty variable id");
        if (!seen.insert(id).second)
            throw DataError(source + ":" + std::to_string(table.line_numbers[0]) + ": duplicate variable id '" + id + "'");
    }

    std::vector<std::string> sample_ids;
    seen.clear();
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string line = source + ":" + std::to_string(table.line_numbers[r]);
        if (row.size() != header.size())
            throw DataError(line + ": expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(row.size()));
        if (!seen.insert(row[0]).second) throw DataError(line + ": duplicate sample id '" + row[0] + "'");
        sample_ids.push_back(row[0]);
    }
    if (sample_ids.empty()) throw DataError(source + ": no sample rows");

    ExpressionMatrix x(sample_ids, variable_ids);
    for (std::size_t r = 1; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        for (std::size_t c = 1; c < row.size(); ++c) {
            const std::string& field = row[c];
            if (field.empty() || field == "NA") {
                x.set_missing(r - 1, c - 1);
                continue;
            }
            auto v = tsv::parse_double(field);
            if (!v || !std::isfinite(*v))
                throw DataError(source + ":" + std::to_string(table.line_numbers[r]) + ": non-numeric value '" + field +
                                "' for variable '" + variable_ids[c - 1] + "'");
            x(r - 1, c - 1) = *v;
        }
    }
    return x;
}

ExpressionMatrix load_expression(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_expression(buffer.str(), path.string());
}

std::string format_expression(const ExpressionMatrix& x) {
    std::ostringstream out;
    out << "sample";
    for (const auto& id : x.variable_ids()) out << '\t' << id;
    out << '\n';
    for (std::size_t s = 0; s < x.samples(); ++s) {
        out << x.sample_ids()[s];
        for (std::size_t v = 0; v < x.variables(); ++v) {
            out << '\t';
            if (!x.missing(s, v)) out << tsv::format_double(x(s, v));
        }
        out << '\n';
    }
    return out.str();
}

std::string PreprocessReport::format() const {
    std::ostringstream out;
    out << "max_missing_fraction\t" << tsv::format_double(max_missing_fraction) << '\n';
    out << "min_sd\t" << tsv::format_double(min_sd) << '\n';
    out << "knn_k\t" << knn_k << '\n';
    out << "input_variables\t" << input_variables << '\n';
    out << "output_variables\t" << output_variables << '\n';
    out << "removed_missing_count\t" << removed_missing.size() << '\n';
    out << "removed_low_sd_count\t" << removed_low_sd.size() << '\n';
    out << "imputed_cells\t" << imputed_cells << '\n';
    for (const auto& r : removed_missing) out << "removed_missing\t" << r.id << '\t' << tsv::format_double(r.value) << '\n';
    for (const auto& r : removed_low_sd) out << "removed_low_sd\t" << r.id << '\t' << tsv::format_double(r.value) << '\n';
    return out.str();
}

namespace {

// Sample standard deviation over observed cells; 0 with fewer than two observations.
double observed_sd(const ExpressionMatrix& x, std::size_t v) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t s = 0; s < x.samples(); ++s)
        if (!x.missing(s, v)) {
            sum += x(s, v);
            ++n;
        }
    if (n < 2) return 0.0;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t s = 0; s < x.samples(); ++s)
        if (!x.missing(s, v)) ss += (x(s, v) - mean) * (x(s, v) - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

} // namespace

std::pair<ExpressionMatrix, PreprocessReport> filter_variables(const ExpressionMatrix& x, double max_missing_fraction,
                                                               double min_sd) {
    if (!(max_missing_fraction >= 0.0 && max_missing_fraction <= 1.0))
        throw ParameterError("maximum missing fraction must lie in [0,1]");
    if (!(min_sd >= 0.0)) throw ParameterError("minimum standard deviation must be non-negative");

    PreprocessReport report;
    report.max_missing_fraction = max_missing_fraction;
    report.min_sd = min_sd;
    report.input_variables = x.variables();

    std::vector<std::size_t> keep;
    const double n = static_cast<double>(x.samples());
    for (std::size_t v = 0; v < x.variables(); ++v) {
        const double frac = static_cast<double>(x.missing_count(v)) / n;
        if (frac > max_missing_fraction) {
            report.removed_missing.push_back({x.variable_ids()[v], frac});
            continue;
        }
        const double sd = observed_sd(x, v);
        if (sd < min_sd) {
            report.removed_low_sd.push_back({x.variable_ids()[v], sd});
            continue;
        }
        keep.push_back(v);
    }
    if (keep.empty()) throw DataError("every variable was removed by the filters");
    report.output_variables = keep.size();
    return {x.select_variables(keep), std::move(report)};
}

std::pair<ExpressionMatrix, PreprocessReport> knn_impute(const ExpressionMatrix& x, std::size_t k) {
    if (k < 1) throw ParameterError("KNN imputation needs k >= 1");
    PreprocessReport report;
    report.knn_k = k;
    report.input_variables = report.output_variables = x.variables();

    ExpressionMatrix out = x;
    const std::size_t n = x.samples(), p = x.variables();
    std::vector<std::pair<double, std::size_t>> candidates;
    std::vector<double> distance(p);
    std::vector<bool> comparable(p);

    for (std::size_t g = 0; g < p; ++g) {
        if (x.missing_count(g) == 0) continue;
        if (x.missing_count(g) == n)
            throw DataError("variable '" + x.variable_ids()[g] + "' is missing at every sample; cannot impute");
        for (std::size_t h = 0; h < p; ++h) {
            comparable[h] = false;
            if (h == g) continue;
            double ss = 0.0;
            std::size_t shared = 0;
            for (std::size_t s = 0; s < n; ++s)
                if (!x.missing(s, g) && !x.missing(s, h)) {
                    const double d = x(s, g) - x(s, h);
                    ss += d * d;
                    ++shared;
                }
            if (shared == 0) continue;
            comparable[h] = true;
            distance[h] = std::sqrt(ss / static_cast<double>(shared));
        }
        for (std::size_t s = 0; s < n; ++s) {
            if (!x.missing(s, g)) continue;
            candidates.clear();
            for (std::size_t h = 0; h < p; ++h)
                if (comparable[h] && !x.missing(s, h)) candidates.emplace_back(distance[h], h);
            if (candidates.empty())
                throw DataError("no neighbor of variable '" + x.variable_ids()[g] + "' is observed at sample '" +
                                x.sample_ids()[s] + "'; cannot impute");
            const std::size_t take = std::min(k, candidates.size());
            std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take),
                              candidates.end());
            double sum = 0.0;
            for (std::size_t t = 0; t < take; ++t) sum += x(s, candidates[t].second);
            out.set_missing(s, g, false);
            out(s, g) = sum / static_cast<double>(take);
            ++report.imputed_cells;
        }
    }
    return {std::move(out), std::move(report)};
}

ExpressionMatrix standardize(const ExpressionMatrix& x) {
    if (x.missing_count() > 0) throw DataError("standardize needs complete data; impute missing values first");
    if (x.samples() < 2) throw DataError("standardize needs at least two samples");
    ExpressionMatrix out = x;
    const std::size_t n = x.samples();
    for (std::size_t v = 0; v < x.variables(); ++v) {
        double* col = out.column(v);
        const double mean = std::accumulate(col, col + n, 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t s = 0; s < n; ++s) ss += (col[s] - mean) * (col[s] - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (!(sd > 0.0)) throw DataError("variable '" + x.variable_ids()[v] + "' has zero standard deviation");
        for (std::size_t s = 0; s < n; ++s) col[s] = (col[s] - mean) / sd;
    }
    return out;
}

std::vector<double> average_ranks(const double* values, std::size_t n) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

SimilarityMatrix similarity_matrix(const ExpressionMatrix& x, Correlation method, bool absolute) {
    if (x.missing_count() > 0) throw DataError("similarity needs complete data; impute missing values first");
    const std::size_t n = x.samples(), p = x.variables();
    if (n < 2) throw DataError("similarity needs at least two samples");

    // Columns centered and scaled to unit norm, so the Gram matrix holds the correlations.
    Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t v = 0; v < p; ++v) {
        std::vector<double> col(x.column(v), x.column(v) + n);
        if (method == Correlation::Spearman) col = average_ranks(col.data(), n);
        const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(n);
        double ss = 0.0;
        for (double& c : col) {
            c -= mean;
            ss += c * c;
        }
        if (!(ss > 0.0)) throw DataError("variable '" + x.variable_ids()[v] + "' has zero variance");
        const double norm = std::sqrt(ss);
        for (std::size_t s = 0; s < n; ++s) z(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(v)) = col[s] / norm;
    }
    const Eigen::MatrixXd corr = z.transpose() * z;

    std::vector<double> values(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
            double r = corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            r = absolute ? std::abs(r) : std::max(r, 0.0);
            r = std::min(r, 1.0);
            values[i * p + j] = r;
            values[j * p + i] = r;
        }
    return SimilarityMatrix(p, std::move(values), x.variable_ids());
}

} // namespace csd
