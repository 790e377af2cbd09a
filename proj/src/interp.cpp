#include "spid/interp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace spid {

namespace {

struct AxisWeight {
    std::size_t pos;
    double w;
};

// Linear weights of fine index f against the ascending coarse index list of
// one axis. Yields one entry on coarse points, two inside a cell.
std::vector<AxisWeight> axis_weights(std::size_t f, const std::vector<std::size_t>& coarse,
                                     std::size_t dim, bool periodic) {
    auto it = std::lower_bound(coarse.begin(), coarse.end(), f);
    if (it != coarse.end() && *it == f)
        return {{static_cast<std::size_t>(it - coarse.begin()), 1.0}};

    if (it == coarse.end()) {
        // f lies past the last coarse point
        if (!periodic)
            raise("ExtrapolationRequired",
                  "fine point beyond the last coarse point on a non-periodic axis");
        const std::size_t last = coarse.size() - 1;
        const double cell = static_cast<double>(dim - coarse[last] + coarse[0]);
        const double w = static_cast<double>(f - coarse[last]) / cell;
        return {{last, 1.0 - w}, {0, w}};
    }

    const std::size_t hi = static_cast<std::size_t>(it - coarse.begin());
    const std::size_t lo = hi - 1; // hi >= 1 since coarse[0] == 0 <= f
    const double w = static_cast<double>(f - coarse[lo]) /
                     static_cast<double>(coarse[hi] - coarse[lo]);
    return {{lo, 1.0 - w}, {hi, w}};
}

} // namespace

InterpOperator InterpOperator::from_spec(const SubsampleSpec& spec) {
    if (spec.geom.kind != GridGeom::Kind::Structured)
        raise("UnstructuredNoInterp",
              "no interpolation scheme for unstructured grids; supply an explicit operator");

    const auto axes = spec.axis_coarse_indices();
    const auto& dims = spec.geom.dims;
    const std::size_t naxes = dims.size();

    std::vector<std::size_t> coarse_counts(naxes);
    for (std::size_t ax = 0; ax < naxes; ++ax) coarse_counts[ax] = axes[ax].size();

    InterpOperator op;
    op.form_ = Form::StridedMultilinear;
    op.fine_rows_ = spec.geom.point_count();
    op.coarse_cols_ = 1;
    for (std::size_t c : coarse_counts) op.coarse_cols_ *= c;
    op.stencil_size_ = std::size_t{1} << naxes;
    op.row_ptr_.reserve(op.fine_rows_ + 1);
    op.row_ptr_.push_back(0);

    const std::size_t d0 = dims[0];
    const std::size_t d1 = naxes > 1 ? dims[1] : 1;
    const std::size_t d2 = naxes > 2 ? dims[2] : 1;

    for (std::size_t i2 = 0; i2 < d2; ++i2) {
        const auto w2 = naxes > 2 ? axis_weights(i2, axes[2], dims[2], spec.geom.periodic[2])
                                  : std::vector<AxisWeight>{{0, 1.0}};
        for (std::size_t i1 = 0; i1 < d1; ++i1) {
            const auto w1 = naxes > 1 ? axis_weights(i1, axes[1], dims[1], spec.geom.periodic[1])
                                      : std::vector<AxisWeight>{{0, 1.0}};
            for (std::size_t i0 = 0; i0 < d0; ++i0) {
                const auto w0 = axis_weights(i0, axes[0], dims[0], spec.geom.periodic[0]);

                // Tensor-product weights; duplicate columns can appear when a
                // periodic wrap folds onto a single coarse point, so merge.
                std::map<std::size_t, double> row;
                for (const auto& a2 : w2)
                    for (const auto& a1 : w1)
                        for (const auto& a0 : w0) {
                            std::size_t col = a0.pos;
                            if (naxes > 1) col += coarse_counts[0] * a1.pos;
                            if (naxes > 2) col += coarse_counts[0] * coarse_counts[1] * a2.pos;
                            row[col] += a0.w * a1.w * a2.w;
                        }
                for (const auto& [col, w] : row) {
                    op.col_idx_.push_back(col);
                    op.weights_.push_back(w);
                }
                op.row_ptr_.push_back(op.col_idx_.size());
            }
        }
    }
    op.validate_rows();
    return op;
}

InterpOperator InterpOperator::from_triplets(
    const std::vector<std::tuple<std::size_t, std::size_t, double>>& triplets,
    std::size_t fine_rows, std::size_t coarse_cols) {
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(fine_rows);
    for (const auto& [r, c, w] : triplets) {
        if (r >= fine_rows || c >= coarse_cols)
            raise("BadInterpOperator", "triplet index out of range");
        rows[r].emplace_back(c, w);
    }
    InterpOperator op;
    op.form_ = Form::ExplicitSparse;
    op.fine_rows_ = fine_rows;
    op.coarse_cols_ = coarse_cols;
    op.row_ptr_.push_back(0);
    for (auto& row : rows) {
        std::sort(row.begin(), row.end());
        for (const auto& [c, w] : row) {
            op.col_idx_.push_back(c);
            op.weights_.push_back(w);
        }
        op.row_ptr_.push_back(op.col_idx_.size());
        op.stencil_size_ = std::max(op.stencil_size_, row.size());
    }
    op.validate_rows();
    return op;
}

InterpOperator InterpOperator::parse_triplet_text(std::string_view text, std::size_t fine_rows,
                                                  std::size_t coarse_cols) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;
    std::istringstream stream{std::string(text)};
    std::string line;
    while (std::getline(stream, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        std::size_t r = 0, c = 0;
        double w = 0.0;
        if (!(fields >> r >> c >> w))
            raise("BadInterpOperator", "malformed triplet line: " + line);
        triplets.emplace_back(r, c, w);
    }
    return from_triplets(triplets, fine_rows, coarse_cols);
}

std::string InterpOperator::triplet_text() const {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t r = 0; r < fine_rows_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            out << r << ' ' << col_idx_[k] << ' ' << weights_[k] << '\n';
    return out.str();
}

void InterpOperator::validate_rows() const {
    for (std::size_t r = 0; r < fine_rows_; ++r) {
        double sum = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (weights_[k] < 0.0)
                raise("BadInterpOperator", "negative interpolation weight");
            sum += weights_[k];
        }
        if (std::abs(sum - 1.0) > 1e-12)
            raise("BadInterpOperator", "row weights must sum to 1");
    }
}

DenseMatrix InterpOperator::apply(const DenseMatrix& coarse) const {
    if (coarse.rows() != coarse_cols_)
        raise("DimensionMismatch", "coarse row count does not match operator");
    DenseMatrix fine(fine_rows_, coarse.cols());
    for (std::size_t j = 0; j < coarse.cols(); ++j)
        apply_column(coarse.col_span(j), fine.col_span(j));
    return fine;
}

void InterpOperator::apply_column(std::span<const double> coarse, std::span<double> fine) const {
    if (coarse.size() != coarse_cols_ || fine.size() != fine_rows_)
        raise("DimensionMismatch", "column sizes do not match operator");
    for (std::size_t r = 0; r < fine_rows_; ++r) {
        double v = 0.0;
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            v += weights_[k] * coarse[col_idx_[k]];
        fine[r] = v;
    }
}

DenseMatrix InterpOperator::materialize() const {
    DenseMatrix m(fine_rows_, coarse_cols_);
    for (std::size_t r = 0; r < fine_rows_; ++r)
        for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
            m(r, col_idx_[k]) = weights_[k];
    return m;
}

InterpOperator build_interpolator(const SubsampleSpec& spec) {
    return InterpOperator::from_spec(spec);
}

DenseMatrix apply_interpolator(const InterpOperator& op, const DenseMatrix& coarse) {
    return op.apply(coarse);
}

} // namespace spid
