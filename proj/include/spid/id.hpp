#pragma once

#include "spid/interp.hpp"
#include "spid/qr.hpp"

namespace spid {

/// A column interpolative decomposition A ~ skeleton * coeffs. The skeleton
/// holds source columns at `skeleton_indices` (in pivot-selection order) and
/// coeffs restricted to those columns is exactly the identity. For the
/// single-pass variant the skeleton rows live on the coarse grid.
struct IdFactors {
    std::vector<std::size_t> skeleton_indices;
    DenseMatrix coeffs;   // k x n
    DenseMatrix skeleton; // m_s x k
    std::size_t source_cols = 0;
    std::size_t achieved_rank = 0;
    double qr_residual_fro = 0.0; // trailing-block norm left by the pivoted QR
};

struct SpidFactors {
    IdFactors base;        // computed on the sketch; skeleton is B(:, I_B)
    InterpOperator interp; // M
};

IdFactors column_id(const DenseMatrix& a, const RankRule& rule);

/// Rank at most k; degrades to the numerical rank instead of raising
/// RankUnreachable when the data rank falls short.
IdFactors column_id_at_most(const DenseMatrix& a, std::size_t k);

/// Two-pass variant: indices and coefficients from the sketch B = a(J, :],
/// skeleton columns re-read from the full matrix.
IdFactors sub_id(const DenseMatrix& a, const SubsampleSpec& spec, const RankRule& rule);

/// Single-pass variant: every column is subsampled on ingestion and the
/// skeleton stays on the coarse grid; the interpolation operator lifts it
/// back at reconstruction time.
SpidFactors spid(const DenseMatrix& a, const SubsampleSpec& spec, const RankRule& rule);
SpidFactors spid(const DenseMatrix& a, const SubsampleSpec& spec, const RankRule& rule,
                 InterpOperator interp);

DenseMatrix reconstruct(const IdFactors& factors);
DenseMatrix reconstruct(const SpidFactors& factors);

} // namespace spid
