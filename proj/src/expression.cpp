#include "csd/expression.hpp"

#include <algorithm>

#include "csd/error.hpp"

namespace csd {

namespace {

std::vector<std::string> numbered(const char* prefix, std::size_t count) {
    std::vector<std::string> ids;
    ids.reserve(count);
    for (std::size_t i = 0; i < count; ++i) ids.push_back(prefix + std::to_string(i + 1));
    return ids;
}

} // namespace

ExpressionMatrix::ExpressionMatrix(std::size_t samples, std::size_t variables)
    : ExpressionMatrix(numbered("s", samples), numbered("v", variables)) {}

ExpressionMatrix::ExpressionMatrix(std::vector<std::string> sample_ids, std::vector<std::string> variable_ids)
    : n_(sample_ids.size()),
      p_(variable_ids.size()),
      values_(n_ * p_, 0.0),
      mask_(n_ * p_, 0),
      sample_ids_(std::move(sample_ids)),
      variable_ids_(std::move(variable_ids)) {}

void ExpressionMatrix::set_missing(std::size_t sample, std::size_t variable, bool m) {
    mask_[variable * n_ + sample] = m ? 1 : 0;
    if (m) values_[variable * n_ + sample] = 0.0;
}

std::size_t ExpressionMatrix::missing_count() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

std::size_t ExpressionMatrix::missing_count(std::size_t variable) const {
    auto begin = mask_.begin() + static_cast<std::ptrdiff_t>(variable * n_);
    return static_cast<std::size_t>(std::count(begin, begin + static_cast<std::ptrdiff_t>(n_), 1));
}

void ExpressionMatrix::set_variable_ids(std::vector<std::string> ids) {
    if (ids.size() != p_) throw DataError("variable id count does not match matrix");
    variable_ids_ = std::move(ids);
}

void ExpressionMatrix::set_sample_ids(std::vector<std::string> ids) {
    if (ids.size() != n_) throw DataError("sample id count does not match matrix");
    sample_ids_ = std::move(ids);
}

ExpressionMatrix ExpressionMatrix::select_variables(const std::vector<std::size_t>& variables) const {
    std::vector<std::string> ids;
    ids.reserve(variables.size());
    for (std::size_t v : variables) ids.push_back(variable_ids_.at(v));
    ExpressionMatrix out(sample_ids_, std::move(ids));
    for (std::size_t k = 0; k < variables.size(); ++k) {
        std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>(variables[k] * n_), n_,
                    out.values_.begin() + static_cast<std::ptrdiff_t>(k * n_));
        std::copy_n(mask_.begin() + static_cast<std::ptrdiff_t>(variables[k] * n_), n_,
                    out.mask_.begin() + static_cast<std::ptrdiff_t>(k * n_));
    }
    return out;
}

void ExpressionMatrix::append_variables(const ExpressionMatrix& other) {
    if (other.n_ != n_) throw DataError("cannot append variables with a different sample count");
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
    mask_.insert(mask_.end(), other.mask_.begin(), other.mask_.end());
    variable_ids_.insert(variable_ids_.end(), other.variable_ids_.begin(), other.variable_ids_.end());
    p_ += other.p_;
}

} // namespace csd
