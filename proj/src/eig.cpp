#include "spid/eig.hpp"

#include <algorithm>
#include <cmath>

namespace spid {

namespace {

// Symmetrized copy, or an error if the input is not square / not symmetric
// within 1e-10 relative.
DenseMatrix symmetrized(const DenseMatrix& s) {
    if (s.rows() != s.cols())
        raise("NotSquare", "eigensolver requires a square matrix");
    const std::size_t n = s.rows();
    double scale = max_abs(s);
    double asym = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < j; ++i)
            asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
    if (scale > 0.0 && asym > 1e-10 * scale)
        raise("NotSymmetric", "matrix asymmetry exceeds 1e-10 relative");

    DenseMatrix out(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) out(i, j) = 0.5 * (s(i, j) + s(j, i));
    return out;
}

double off_diagonal_fro(const DenseMatrix& a) {
    double sum = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            if (i != j) sum += a(i, j) * a(i, j);
    return std::sqrt(sum);
}

// Cyclic Jacobi; diagonalizes in place until the off-diagonal Frobenius norm
// drops below 1e-12 of the matrix norm.
void jacobi_diagonalize(DenseMatrix& a) {
    const std::size_t n = a.rows();
    const double target = 1e-12 * frobenius_norm(a);
    const int max_sweeps = 64;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_fro(a) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
            }
        }
    }
}

} // namespace

double sym_eig_max(const DenseMatrix& s) {
    DenseMatrix a = symmetrized(s);
    if (frobenius_norm(a) == 0.0) return 0.0;
    jacobi_diagonalize(a);
    double best = a(0, 0);
    for (std::size_t i = 1; i < a.rows(); ++i) best = std::max(best, a(i, i));
    return best;
}

std::vector<double> sym_eig_all(const DenseMatrix& s) {
    DenseMatrix a = symmetrized(s);
    std::vector<double> eigs(a.rows(), 0.0);
    if (frobenius_norm(a) > 0.0) {
        jacobi_diagonalize(a);
        for (std::size_t i = 0; i < a.rows(); ++i) eigs[i] = a(i, i);
    }
    std::sort(eigs.begin(), eigs.end(), std::greater<double>());
    return eigs;
}

MatrixNorms norms(const DenseMatrix& a) {
    MatrixNorms out;
    out.frobenius = frobenius_norm(a);
    if (out.frobenius == 0.0) return out;

    // Gram matrix on the smaller side keeps the Jacobi solve desk-scale.
    const bool use_cols = a.cols() <= a.rows();
    const std::size_t g = use_cols ? a.cols() : a.rows();
    DenseMatrix gram(g, g);
    if (use_cols) {
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = i; j < g; ++j) {
                const double v = dot(a.col_span(i), a.col_span(j));
                gram(i, j) = v;
                gram(j, i) = v;
            }
    } else {
        for (std::size_t jj = 0; jj < a.cols(); ++jj) {
            const double* c = a.col(jj);
            for (std::size_t i = 0; i < g; ++i)
                for (std::size_t j = i; j < g; ++j) gram(i, j) += c[i] * c[j];
        }
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = i + 1; j < g; ++j) gram(j, i) = gram(i, j);
    }
    out.spectral = std::sqrt(std::max(0.0, sym_eig_max(gram)));
    return out;
}

std::vector<double> singular_values(const DenseMatrix& a) {
    const bool use_cols = a.cols() <= a.rows();
    const std::size_t g = use_cols ? a.cols() : a.rows();
    DenseMatrix gram(g, g);
    if (use_cols) {
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = i; j < g; ++j) {
                const double v = dot(a.col_span(i), a.col_span(j));
                gram(i, j) = v;
                gram(j, i) = v;
            }
    } else {
        DenseMatrix at = transpose(a);
        for (std::size_t i = 0; i < g; ++i)
            for (std::size_t j = i; j < g; ++j) {
                const double v = dot(at.col_span(i), at.col_span(j));
                gram(i, j) = v;
                gram(j, i) = v;
            }
    }
    std::vector<double> eigs = sym_eig_all(gram);
    for (double& e : eigs) e = std::sqrt(std::max(0.0, e));
    return eigs;
}

} // namespace spid
