#pragma once

#include <cstddef>
#include <vector>

#include "spid/dense_matrix.hpp"

namespace spid {

/// CF = (original entries) / (stored entries). For a plain rank-k ID the
/// stored count is k(m+n); for the single-pass variant with a recipe-stored
/// interpolation operator it is k(m_c+n).
double compression_factor(std::size_t m, std::size_t n, std::size_t stored_entries);

/// ||exact - approx||_F / ||exact||_F.
double rel_frob_error(const DenseMatrix& exact, const DenseMatrix& approx);

struct QualityReport {
    double cf = 0.0;
    double rel_frob_error = 0.0;
    std::vector<std::size_t> block_ranks;
    std::size_t stored_entries = 0;
};

} // namespace spid
