#pragma once

#include <string>
#include <string_view>

#include "spid/grid.hpp"

namespace spid {

/// Sparse interpolation operator M lifting coarse-grid columns back to the
/// fine grid. Rows are fine points; each holds the convex weights of its
/// enclosing coarse cell (a single unit weight on coarse points themselves).
/// Stored in CSR form regardless of how it was built.
class InterpOperator {
public:
    enum class Form { StridedMultilinear, ExplicitSparse };

    static InterpOperator from_spec(const SubsampleSpec& spec);
    static InterpOperator from_triplets(
        const std::vector<std::tuple<std::size_t, std::size_t, double>>& triplets,
        std::size_t fine_rows, std::size_t coarse_cols);

    /// `row col weight` per line, 0-based.
    static InterpOperator parse_triplet_text(std::string_view text, std::size_t fine_rows,
                                             std::size_t coarse_cols);
    std::string triplet_text() const;

    Form form() const noexcept { return form_; }
    std::size_t fine_rows() const noexcept { return fine_rows_; }
    std::size_t coarse_cols() const noexcept { return coarse_cols_; }
    std::size_t stencil_size() const noexcept { return stencil_size_; }

    DenseMatrix apply(const DenseMatrix& coarse) const;
    void apply_column(std::span<const double> coarse, std::span<double> fine) const;

    /// Dense m x m_c form, for operator-norm computations.
    DenseMatrix materialize() const;

private:
    InterpOperator() = default;
    void validate_rows() const;

    Form form_ = Form::StridedMultilinear;
    std::size_t fine_rows_ = 0;
    std::size_t coarse_cols_ = 0;
    std::size_t stencil_size_ = 0;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> col_idx_;
    std::vector<double> weights_;
};

InterpOperator build_interpolator(const SubsampleSpec& spec);
DenseMatrix apply_interpolator(const InterpOperator& op, const DenseMatrix& coarse);

} // namespace spid
