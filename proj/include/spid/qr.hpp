#pragma once

#include <cstddef>
#include <vector>

#include "spid/dense_matrix.hpp"

namespace spid {

/// Stopping rule for the greedy pivoted QR: either a fixed target rank or a
/// residual tolerance relative to the largest initial column 2-norm.
class RankRule {
public:
    enum class Mode { FixedRank, Tolerance };

    static RankRule fixed(std::size_t k) {
        if (k < 1) raise("BadRankRule", "fixed rank must be >= 1");
        return RankRule(Mode::FixedRank, k, 0.0);
    }

    static RankRule tolerance(double tol) {
        if (!(tol > 0.0 && tol < 1.0))
            raise("BadRankRule", "tolerance must lie in (0, 1)");
        return RankRule(Mode::Tolerance, 0, tol);
    }

    Mode mode() const noexcept { return mode_; }
    std::size_t k() const noexcept { return k_; }
    double tol() const noexcept { return tol_; }

private:
    RankRule(Mode m, std::size_t k, double tol) : mode_(m), k_(k), tol_(tol) {}

    Mode mode_;
    std::size_t k_;
    double tol_;
};

/// Output of the column-pivoted QR. `q` is m x rank with orthonormal columns,
/// `r_mat` is rank x n upper-trapezoidal against the pivoted column order, and
/// `pivots` is the full permutation: pivots[j] is the original column sitting
/// at permuted position j. The first `rank` pivots are the skeleton indices in
/// selection order. `residual_fro` is the Frobenius norm of the trailing
/// residual block left when the factorization stopped.
struct QrFactorization {
    DenseMatrix q;
    DenseMatrix r_mat;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
    double residual_fro = 0.0;
};

/// Greedy column-pivoted modified Gram-Schmidt QR with one re-orthogonalization
/// pass per step. Pivot selection takes the unprocessed column of largest
/// residual 2-norm; ties go to the lowest original column index.
QrFactorization pivoted_mgs_qr(const DenseMatrix& a, const RankRule& rule);

/// Like the FixedRank mode but stops quietly at the numerical rank when the
/// residual collapses before k steps, instead of raising RankUnreachable.
/// Used by the chunked compressor, where a chunk's rank may fall below the
/// configured stage-1 rank.
QrFactorization pivoted_mgs_qr_at_most(const DenseMatrix& a, std::size_t k);

/// Back-substitution solve of r11 * X = rhs with r11 square upper-triangular.
DenseMatrix solve_upper_triangular(const DenseMatrix& r11, const DenseMatrix& rhs);

} // namespace spid
