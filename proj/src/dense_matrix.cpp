#include "spid/dense_matrix.hpp"

#include <cmath>

namespace spid {

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> init)
    : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0),
      data_(checked_size(init.size(), init.size() ? init.begin()->size() : 0), 0.0) {
    std::size_t i = 0;
    for (const auto& row : init) {
        if (row.size() != cols_)
            raise("RaggedInitializer", "all rows must have the same length");
        std::size_t j = 0;
        for (double v : row) (*this)(i, j++) = v;
        ++i;
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_column(const std::vector<double>& column) {
    DenseMatrix m(column.size(), 1);
    for (std::size_t i = 0; i < column.size(); ++i) m(i, 0) = column[i];
    return m;
}

bool DenseMatrix::all_finite() const noexcept {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        raise("DimensionMismatch", "matmul inner dimensions disagree");
    DenseMatrix c(a.rows(), b.cols());
    // j-k-i order keeps the inner loop running down contiguous columns.
    for (std::size_t j = 0; j < b.cols(); ++j) {
        double* cj = c.col(j);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double bkj = b(k, j);
            if (bkj == 0.0) continue;
            const double* ak = a.col(k);
            for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ak[i] * bkj;
        }
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b))
        raise("DimensionMismatch", "subtract requires equal shapes");
    DenseMatrix d(a.rows(), a.cols());
    for (std::size_t idx = 0; idx < a.entry_count(); ++idx)
        d.data()[idx] = a.data()[idx] - b.data()[idx];
    return d;
}

DenseMatrix select_columns(const DenseMatrix& a, const std::vector<std::size_t>& indices) {
    if (indices.empty()) raise("EmptySelection", "no columns selected");
    DenseMatrix s(a.rows(), indices.size());
    for (std::size_t j = 0; j < indices.size(); ++j) {
        if (indices[j] >= a.cols()) raise("IndexOutOfRange", "column index out of range");
        const double* src = a.col(indices[j]);
        double* dst = s.col(j);
        for (std::size_t i = 0; i < a.rows(); ++i) dst[i] = src[i];
    }
    return s;
}

DenseMatrix select_rows(const DenseMatrix& a, const std::vector<std::size_t>& indices) {
    if (indices.empty()) raise("EmptySelection", "no rows selected");
    DenseMatrix s(indices.size(), a.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= a.rows()) raise("IndexOutOfRange", "row index out of range");
        for (std::size_t j = 0; j < a.cols(); ++j) s(i, j) = a(indices[i], j);
    }
    return s;
}

DenseMatrix hconcat(const std::vector<const DenseMatrix*>& parts) {
    if (parts.empty()) raise("EmptySelection", "nothing to concatenate");
    const std::size_t rows = parts.front()->rows();
    std::size_t cols = 0;
    for (const DenseMatrix* p : parts) {
        if (p->rows() != rows)
            raise("DimensionMismatch", "hconcat requires equal row counts");
        cols += p->cols();
    }
    DenseMatrix out(rows, cols);
    std::size_t at = 0;
    for (const DenseMatrix* p : parts)
        for (std::size_t j = 0; j < p->cols(); ++j, ++at) {
            const double* src = p->col(j);
            double* dst = out.col(at);
            for (std::size_t i = 0; i < rows; ++i) dst[i] = src[i];
        }
    return out;
}

double frobenius_norm(const DenseMatrix& a) {
    double sum = 0.0;
    for (std::size_t idx = 0; idx < a.entry_count(); ++idx) {
        const double v = a.data()[idx];
        sum += v * v;
    }
    return std::sqrt(sum);
}

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (std::size_t idx = 0; idx < a.entry_count(); ++idx)
        m = std::max(m, std::abs(a.data()[idx]));
    return m;
}

bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) return false;
    for (std::size_t idx = 0; idx < a.entry_count(); ++idx)
        if (a.data()[idx] != b.data()[idx]) return false;
    return true;
}

double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

} // namespace spid
