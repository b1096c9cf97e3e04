#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace csd {

/// N samples x p variables, column-major by variable, with a missing-value mask.
class ExpressionMatrix {
public:
    ExpressionMatrix() = default;
    ExpressionMatrix(std::size_t samples, std::size_t variables);
    ExpressionMatrix(std::vector<std::string> sample_ids, std::vector<std::string> variable_ids);

    std::size_t samples() const { return n_; }
    std::size_t variables() const { return p_; }

    double operator()(std::size_t sample, std::size_t variable) const { return values_[variable * n_ + sample]; }
    double& operator()(std::size_t sample, std::size_t variable) { return values_[variable * n_ + sample]; }

    bool missing(std::size_t sample, std::size_t variable) const { return mask_[variable * n_ + sample] != 0; }
    void set_missing(std::size_t sample, std::size_t variable, bool m = true);
    std::size_t missing_count() const;
    std::size_t missing_count(std::size_t variable) const;

    /// Contiguous profile of one variable across samples (masked cells hold 0).
    const double* column(std::size_t variable) const { return values_.data() + variable * n_; }
    double* column(std::size_t variable) { return values_.data() + variable * n_; }

    const std::vector<std::string>& sample_ids() const { return sample_ids_; }
    const std::vector<std::string>& variable_ids() const { return variable_ids_; }
    void set_variable_ids(std::vector<std::string> ids);
    void set_sample_ids(std::vector<std::string> ids);

    /// Keeps the given variables, in order.
    ExpressionMatrix select_variables(const std::vector<std::size_t>& variables) const;

    /// Appends the columns of `other`, which must have the same sample count.
    void append_variables(const ExpressionMatrix& other);

    friend bool operator==(const ExpressionMatrix&, const ExpressionMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::size_t p_ = 0;
    std::vector<double> values_;
    std::vector<unsigned char> mask_;
    std::vector<std::string> sample_ids_;
    std::vector<std::string> variable_ids_;
};

} // namespace csd
