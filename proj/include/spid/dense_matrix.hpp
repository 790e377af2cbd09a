#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "spid/error.hpp"

namespace spid {

/// Column-major dense matrix of 64-bit reals. The universal carrier for
/// snapshot matrices, sketches, skeletons and coefficient matrices.
/// Matrices are never empty: rows >= 1 and cols >= 1.
class DenseMatrix {
public:
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(checked_size(rows, cols), 0.0) {}

    DenseMatrix(std::size_t rows, std::size_t cols, double fill)
        : rows_(rows), cols_(cols), data_(checked_size(rows, cols), fill) {}

    // Row-major nested list, for literals in tests and small examples.
    DenseMatrix(std::initializer_list<std::initializer_list<double>> init);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix from_column(const std::vector<double>& column);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t entry_count() const noexcept { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }

    double* col(std::size_t j) { return data_.data() + j * rows_; }
    const double* col(std::size_t j) const { return data_.data() + j * rows_; }
    std::span<const double> col_span(std::size_t j) const { return {col(j), rows_}; }
    std::span<double> col_span(std::size_t j) { return {col(j), rows_}; }

    bool same_shape(const DenseMatrix& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    bool all_finite() const noexcept;

private:
    static std::size_t checked_size(std::size_t rows, std::size_t cols) {
        if (rows == 0 || cols == 0)
            raise("EmptyMatrix", "matrix dimensions must be at least 1x1");
        return rows * cols;
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);

/// Columns of `a` at `indices`, in the order given.
DenseMatrix select_columns(const DenseMatrix& a, const std::vector<std::size_t>& indices);

/// Rows of `a` at `indices`, in the order given.
DenseMatrix select_rows(const DenseMatrix& a, const std::vector<std::size_t>& indices);

DenseMatrix hconcat(const std::vector<const DenseMatrix*>& parts);

double frobenius_norm(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);
bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

} // namespace spid
