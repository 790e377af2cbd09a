#pragma once

#include <cstddef>
#include <vector>

#include "spid/dense_matrix.hpp"

namespace spid {

/// Geometry of the spatial domain a snapshot column lives on. Structured
/// grids flatten point (i0, i1, i2) to index i0 + d0*(i1 + d1*i2), axis 0
/// fastest. Unstructured grids are a bare point list in arbitrary order.
struct GridGeom {
    enum class Kind { Structured, Unstructured };

    Kind kind = Kind::Structured;
    std::vector<std::size_t> dims;  // per-axis counts, 1 to 3 axes
    std::vector<bool> periodic;     // per-axis wrap flags (structured only)
    std::vector<double> coords;     // unstructured: point-major coordinates
    std::size_t coord_dim = 0;
    std::size_t count = 0;          // unstructured point count

    static GridGeom structured(std::vector<std::size_t> dims, std::vector<bool> periodic = {});
    /// Sub-box of a structured grid; unlike full grids, a block axis may hold
    /// a single point.
    static GridGeom structured_block(std::vector<std::size_t> dims, std::vector<bool> periodic);
    static GridGeom unstructured(std::vector<double> coords, std::size_t coord_dim);
    /// Unstructured grid known only by its point count (as in archives,
    /// where coordinates are not needed to reconstruct).
    static GridGeom unstructured_counted(std::size_t points);

    std::size_t point_count() const;
    std::size_t axis_count() const { return dims.size(); }
};

/// Selection of coarse rows J (the sketch B = A(J, :)). Structured grids use
/// per-axis strides; unstructured grids carry an explicit index list.
struct SubsampleSpec {
    GridGeom geom;
    std::vector<std::size_t> strides;       // structured, per axis, >= 1
    std::vector<std::size_t> explicit_rows; // unstructured J, strictly increasing
    bool include_boundary = true;

    static SubsampleSpec strided(GridGeom geom, std::vector<std::size_t> strides,
                                 bool include_boundary = true);
    static SubsampleSpec explicit_list(GridGeom geom, std::vector<std::size_t> rows);

    /// Coarse indices per axis, ascending (structured only).
    std::vector<std::vector<std::size_t>> axis_coarse_indices() const;

    /// Flattened coarse row set J, strictly increasing.
    std::vector<std::size_t> row_indices() const;

    std::size_t coarse_count() const { return row_indices().size(); }
    bool selects_all_rows() const;
};

/// B = a(J, :).
DenseMatrix subsample(const DenseMatrix& a, const SubsampleSpec& spec);

/// Streaming form: scatter one fine column into a coarse column.
void subsample_column(std::span<const double> fine, const std::vector<std::size_t>& rows,
                      std::span<double> coarse);

} // namespace spid
