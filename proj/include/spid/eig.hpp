#pragma once

#include <vector>

#include "spid/dense_matrix.hpp"

namespace spid {

struct MatrixNorms {
    double frobenius = 0.0;
    double spectral = 0.0;
};

/// Largest eigenvalue of a symmetric matrix via cyclic Jacobi rotations.
/// Relative asymmetry up to 1e-10 is tolerated and symmetrized away; intended
/// for desk-scale matrices (dimension up to a few hundred).
double sym_eig_max(const DenseMatrix& s);

/// All eigenvalues, descending. Same Jacobi sweep as sym_eig_max.
std::vector<double> sym_eig_all(const DenseMatrix& s);

/// Frobenius norm by summation; spectral norm as sqrt of the largest
/// eigenvalue of the smaller Gram matrix.
MatrixNorms norms(const DenseMatrix& a);

/// Singular values of `a`, descending, from the Gram-matrix eigenvalues.
std::vector<double> singular_values(const DenseMatrix& a);

} // namespace spid
