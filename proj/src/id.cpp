#include "spid/id.hpp"

namespace spid {

namespace {

// Coefficients [ I_k | R11^+ R12 ] Z^T assembled directly into source-column
// order: skeleton columns get unit vectors, the rest the triangular solve.
DenseMatrix build_coeffs(const QrFactorization& qr, std::size_t n) {
    const std::size_t k = qr.rank;
    DenseMatrix coeffs(k, n);
    for (std::size_t j = 0; j < k; ++j) coeffs(j, qr.pivots[j]) = 1.0;

    if (k < n) {
        DenseMatrix r11(k, k);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i <= j; ++i) r11(i, j) = qr.r_mat(i, j);
        DenseMatrix r12(k, n - k);
        for (std::size_t j = k; j < n; ++j)
            for (std::size_t i = 0; i < k; ++i) r12(i, j - k) = qr.r_mat(i, j);
        const DenseMatrix x = solve_upper_triangular(r11, r12);
        for (std::size_t j = k; j < n; ++j)
            for (std::size_t i = 0; i < k; ++i) coeffs(i, qr.pivots[j]) = x(i, j - k);
    }
    if (!coeffs.all_finite())
        raise("NonFiniteCoeffs", "coefficient matrix contains NaN or infinity");
    return coeffs;
}

IdFactors id_from_qr(const DenseMatrix& source, const QrFactorization& qr) {
    IdFactors f{std::vector<std::size_t>(qr.pivots.begin(), qr.pivots.begin() + qr.rank),
                build_coeffs(qr, source.cols()),
                select_columns(source, {qr.pivots.begin(), qr.pivots.begin() + qr.rank}),
                source.cols(), qr.rank, qr.residual_fro};
    return f;
}

} // namespace

IdFactors column_id(const DenseMatrix& a, const RankRule& rule) {
    if (!a.all_finite())
        raise("NonFiniteInput", "input matrix contains NaN or infinity");
    const QrFactorization qr = pivoted_mgs_qr(a, rule);
    return id_from_qr(a, qr);
}

IdFactors column_id_at_most(const DenseMatrix& a, std::size_t k) {
    if (!a.all_finite())
        raise("NonFiniteInput", "input matrix contains NaN or infinity");
    const QrFactorization qr = pivoted_mgs_qr_at_most(a, k);
    return id_from_qr(a, qr);
}

IdFactors sub_id(const DenseMatrix& a, const SubsampleSpec& spec, const RankRule& rule) {
    const DenseMatrix sketch = subsample(a, spec);
    IdFactors f = column_id(sketch, rule);
    // second pass: skeleton columns come from the full fine-grid matrix
    f.skeleton = select_columns(a, f.skeleton_indices);
    return f;
}

SpidFactors spid(const DenseMatrix& a, const SubsampleSpec& spec, const RankRule& rule) {
    return spid(a, spec, rule, build_interpolator(spec));
}

SpidFactors spid(const DenseMatrix& a, const SubsampleSpec& spec, const RankRule& rule,
                 InterpOperator interp) {
    if (!a.all_finite())
        raise("NonFiniteInput", "input matrix contains NaN or infinity");
    if (a.rows() != spec.geom.point_count())
        raise("GeometryMismatch", "matrix row count does not match grid point count");

    // Column-at-a-time subsampling; the fine data is read once and only the
    // coarse sketch is kept.
    const std::vector<std::size_t> rows = spec.row_indices();
    if (interp.fine_rows() != a.rows() || interp.coarse_cols() != rows.size())
        raise("DimensionMismatch", "interpolation operator does not match subsample spec");
    DenseMatrix sketch(rows.size(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        subsample_column(a.col_span(j), rows, sketch.col_span(j));

    return SpidFactors{column_id(sketch, rule), std::move(interp)};
}

DenseMatrix reconstruct(const IdFactors& factors) {
    if (factors.skeleton.cols() != factors.coeffs.rows() ||
        factors.coeffs.cols() != factors.source_cols)
        raise("DimensionMismatch", "inconsistent factor dimensions");
    return matmul(factors.skeleton, factors.coeffs);
}

DenseMatrix reconstruct(const SpidFactors& factors) {
    if (factors.base.skeleton.rows() != factors.interp.coarse_cols())
        raise("DimensionMismatch", "skeleton rows do not match interpolation operator");
    return matmul(factors.interp.apply(factors.base.skeleton), factors.base.coeffs);
}

} // namespace spid
