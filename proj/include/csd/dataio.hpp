#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "csd/expression.hpp"
#include "csd/graph.hpp"

namespace csd {

/// TSV with a header of variable ids (after a corner cell) and one row per sample starting
/// with its id. Empty cells and "NA" are missing.
ExpressionMatrix load_expression(const std::filesystem::path& path);
ExpressionMatrix parse_expression(std::string_view text, const std::string& source = "<memory>");
std::string format_expression(const ExpressionMatrix& x);

struct PreprocessReport {
    struct Removed {
        std::string id;
        double value;  ///< missing fraction or standard deviation
    };
    std::vector<Removed> removed_missing;
    std::vector<Removed> removed_low_sd;
    std::size_t imputed_cells = 0;
    double max_missing_fraction = 0.0;
    double min_sd = 0.0;
    std::size_t knn_k = 0;
    std::size_t input_variables = 0;
    std::size_t output_variables = 0;

    /// `key<TAB>value` lines.
    std::string format() const;
};

/// Drops variables whose missing fraction exceeds `max_missing_fraction`, then those whose
/// sample standard deviation over observed cells is below `min_sd`.
std::pair<ExpressionMatrix, PreprocessReport> filter_variables(const ExpressionMatrix& x,
                                                               double max_missing_fraction = 0.2,
                                                               double min_sd = 0.4);

/// Fills each missing cell (i, g) with the mean value at sample i of the k variables observed
/// at i that are closest to g. Distance is the Euclidean distance over samples observed in both
/// variables, normalized by the number of such samples. Ties go to the lower variable index.
std::pair<ExpressionMatrix, PreprocessReport> knn_impute(const ExpressionMatrix& x, std::size_t k = 10);

/// Zero mean and unit sample standard deviation (divisor N-1) per variable.
ExpressionMatrix standardize(const ExpressionMatrix& x);

enum class Correlation { Pearson, Spearman };

/// Pairwise correlation between variables with a zero diagonal: its absolute value when
/// `absolute`, otherwise its positive part (negative correlations become 0).
/// Spearman is Pearson on average ranks.
SimilarityMatrix similarity_matrix(const ExpressionMatrix& x, Correlation method, bool absolute = true);

/// Average ranks (1-based) of the values.
std::vector<double> average_ranks(const double* values, std::size_t n);

} // namespace csd
