#include "spid/grid.hpp"

#include <algorithm>

namespace spid {

GridGeom GridGeom::structured(std::vector<std::size_t> dims, std::vector<bool> periodic) {
    if (dims.empty() || dims.size() > 3)
        raise("BadGridGeom", "structured grids have 1 to 3 axes");
    for (std::size_t d : dims)
        if (d < 2) raise("BadGridGeom", "each structured axis needs at least 2 points");
    if (periodic.empty()) periodic.assign(dims.size(), false);
    if (periodic.size() != dims.size())
        raise("BadGridGeom", "periodic flag count must match axis count");
    GridGeom g;
    g.kind = Kind::Structured;
    g.dims = std::move(dims);
    g.periodic = std::move(periodic);
    return g;
}

GridGeom GridGeom::structured_block(std::vector<std::size_t> dims, std::vector<bool> periodic) {
    if (dims.empty() || dims.size() > 3)
        raise("BadGridGeom", "structured grids have 1 to 3 axes");
    for (std::size_t d : dims)
        if (d < 1) raise("BadGridGeom", "block axis needs at least 1 point");
    if (periodic.size() != dims.size())
        raise("BadGridGeom", "periodic flag count must match axis count");
    GridGeom g;
    g.kind = Kind::Structured;
    g.dims = std::move(dims);
    g.periodic = std::move(periodic);
    return g;
}

GridGeom GridGeom::unstructured(std::vector<double> coords, std::size_t coord_dim) {
    if (coord_dim == 0 || coords.empty() || coords.size() % coord_dim != 0)
        raise("BadGridGeom", "unstructured coordinates must be a whole number of points");
    GridGeom g;
    g.kind = Kind::Unstructured;
    g.count = coords.size() / coord_dim;
    g.coords = std::move(coords);
    g.coord_dim = coord_dim;
    return g;
}

GridGeom GridGeom::unstructured_counted(std::size_t points) {
    if (points < 1) raise("BadGridGeom", "need at least one point");
    GridGeom g;
    g.kind = Kind::Unstructured;
    g.count = points;
    return g;
}

std::size_t GridGeom::point_count() const {
    if (kind == Kind::Unstructured) return count;
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    return total;
}

SubsampleSpec SubsampleSpec::strided(GridGeom geom, std::vector<std::size_t> strides,
                                     bool include_boundary) {
    if (geom.kind != GridGeom::Kind::Structured)
        raise("BadSubsampleSpec", "strided subsampling needs a structured grid");
    if (strides.size() != geom.axis_count())
        raise("BadSubsampleSpec", "stride count must match axis count");
    for (std::size_t s : strides)
        if (s < 1) raise("BadSubsampleSpec", "strides must be >= 1");
    SubsampleSpec spec;
    spec.geom = std::move(geom);
    spec.strides = std::move(strides);
    spec.include_boundary = include_boundary;
    return spec;
}

SubsampleSpec SubsampleSpec::explicit_list(GridGeom geom, std::vector<std::size_t> rows) {
    if (rows.empty()) raise("EmptySketch", "explicit row list selects zero rows");
    const std::size_t m = geom.point_count();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= m) raise("BadSubsampleSpec", "row index out of range");
        if (i > 0 && rows[i] <= rows[i - 1])
            raise("BadSubsampleSpec", "row list must be strictly increasing");
    }
    SubsampleSpec spec;
    spec.geom = std::move(geom);
    spec.explicit_rows = std::move(rows);
    return spec;
}

std::vector<std::vector<std::size_t>> SubsampleSpec::axis_coarse_indices() const {
    if (geom.kind != GridGeom::Kind::Structured)
        raise("BadSubsampleSpec", "axis indices only exist on structured grids");
    std::vector<std::vector<std::size_t>> axes;
    for (std::size_t ax = 0; ax < geom.dims.size(); ++ax) {
        const std::size_t dim = geom.dims[ax];
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < dim; i += strides[ax]) idx.push_back(i);
        // Periodic axes wrap the trailing cell back to index 0 instead of
        // pinning the boundary point.
        if (include_boundary && !geom.periodic[ax] && idx.back() != dim - 1)
            idx.push_back(dim - 1);
        axes.push_back(std::move(idx));
    }
    return axes;
}

std::vector<std::size_t> SubsampleSpec::row_indices() const {
    if (geom.kind == GridGeom::Kind::Unstructured) {
        if (explicit_rows.empty()) raise("EmptySketch", "no rows selected");
        return explicit_rows;
    }
    const auto axes = axis_coarse_indices();
    const auto& dims = geom.dims;

    std::vector<std::size_t> rows;
    const std::size_t n0 = axes[0].size();
    const std::size_t n1 = axes.size() > 1 ? axes[1].size() : 1;
    const std::size_t n2 = axes.size() > 2 ? axes[2].size() : 1;
    rows.reserve(n0 * n1 * n2);
    for (std::size_t i2 = 0; i2 < n2; ++i2)
        for (std::size_t i1 = 0; i1 < n1; ++i1)
            for (std::size_t i0 = 0; i0 < n0; ++i0) {
                std::size_t flat = axes[0][i0];
                if (axes.size() > 1) flat += dims[0] * axes[1][i1];
                if (axes.size() > 2) flat += dims[0] * dims[1] * axes[2][i2];
                rows.push_back(flat);
            }
    return rows;
}

bool SubsampleSpec::selects_all_rows() const {
    return row_indices().size() == geom.point_count();
}

DenseMatrix subsample(const DenseMatrix& a, const SubsampleSpec& spec) {
    if (a.rows() != spec.geom.point_count())
        raise("GeometryMismatch", "matrix row count does not match grid point count");
    return select_rows(a, spec.row_indices());
}

void subsample_column(std::span<const double> fine, const std::vector<std::size_t>& rows,
                      std::span<double> coarse) {
    if (coarse.size() != rows.size())
        raise("DimensionMismatch", "coarse buffer size must match row selection");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= fine.size()) raise("GeometryMismatch", "row index outside fine column");
        coarse[i] = fine[rows[i]];
    }
}

} // namespace spid
