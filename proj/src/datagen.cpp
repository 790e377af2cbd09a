#include "spid/datagen.hpp"

#include <cmath>
#include <numbers>

#include "spid/rng.hpp"

namespace spid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Physical coordinates of grid point `idx`. Structured axes span [0, 2pi)
// uniformly; unstructured grids carry their own coordinates.
void point_coords(const GridGeom& grid, std::size_t idx, double* xyz) {
    if (grid.kind == GridGeom::Kind::Unstructured) {
        for (std::size_t d = 0; d < grid.coord_dim; ++d)
            xyz[d] = grid.coords[idx * grid.coord_dim + d];
        return;
    }
    std::size_t rem = idx;
    for (std::size_t ax = 0; ax < grid.dims.size(); ++ax) {
        const std::size_t i = rem % grid.dims[ax];
        rem /= grid.dims[ax];
        xyz[ax] = kTwoPi * static_cast<double>(i) / static_cast<double>(grid.dims[ax]);
    }
}

} // namespace

TaylorGreenQoi parse_qoi(const std::string& name) {
    if (name == "u1") return TaylorGreenQoi::U1;
    if (name == "u2") return TaylorGreenQoi::U2;
    if (name == "p") return TaylorGreenQoi::P;
    raise("BadQoi", "unknown quantity of interest: " + name);
}

std::string qoi_name(TaylorGreenQoi qoi) {
    switch (qoi) {
    case TaylorGreenQoi::U1: return "u1";
    case TaylorGreenQoi::U2: return "u2";
    default: return "p";
    }
}

std::vector<double> taylor_green_snapshot(const TaylorGreenParams& params, double t) {
    const std::size_t m = params.grid.point_count();
    std::vector<double> column(m);
    const double decay2 = std::exp(-2.0 * params.nu * t);
    const double decay4 = std::exp(-4.0 * params.nu * t);
    double x[3] = {0.0, 0.0, 0.0};
    for (std::size_t idx = 0; idx < m; ++idx) {
        point_coords(params.grid, idx, x);
        switch (params.qoi) {
        case TaylorGreenQoi::U1:
            column[idx] = std::sin(x[0]) * std::cos(x[1]) * decay2;
            break;
        case TaylorGreenQoi::U2:
            column[idx] = -std::cos(x[0]) * std::sin(x[1]) * decay2;
            break;
        case TaylorGreenQoi::P:
            column[idx] =
                0.25 * params.rho * (std::cos(2.0 * x[0]) + std::sin(2.0 * x[1])) * decay4;
            break;
        }
    }
    return column;
}

DenseMatrix taylor_green_matrix(const TaylorGreenParams& params) {
    const std::size_t m = params.grid.point_count();
    DenseMatrix a(m, params.steps);
    for (std::size_t j = 0; j < params.steps; ++j) {
        const auto column = taylor_green_snapshot(params, params.dt * static_cast<double>(j));
        double* dst = a.col(j);
        for (std::size_t i = 0; i < m; ++i) dst[i] = column[i];
    }
    return a;
}

std::vector<double> smooth_field3d_snapshot(const SmoothField3dParams& params, double t) {
    if (params.grid.kind != GridGeom::Kind::Structured || params.grid.dims.size() != 3)
        raise("BadGridGeom", "smooth 3d field needs a 3-axis structured grid");
    const std::size_t m = params.grid.point_count();
    std::vector<double> column(m);
    const double decay = std::exp(-2.0 * params.nu * t);
    const double inv_l = 1.0 / params.length_scale;
    double x[3];
    for (std::size_t idx = 0; idx < m; ++idx) {
        point_coords(params.grid, idx, x);
        column[idx] = params.amplitude * std::sin(x[0] * inv_l) * std::cos(x[1] * inv_l) *
                      std::cos(x[2] * inv_l) * decay;
    }
    return column;
}

DenseMatrix smooth_field3d_matrix(const SmoothField3dParams& params) {
    const std::size_t m = params.grid.point_count();
    DenseMatrix a(m, params.steps);
    for (std::size_t j = 0; j < params.steps; ++j) {
        const auto column = smooth_field3d_snapshot(params, params.dt * static_cast<double>(j));
        double* dst = a.col(j);
        for (std::size_t i = 0; i < m; ++i) dst[i] = column[i];
    }
    return a;
}

DenseMatrix gen_exact_rank(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed) {
    if (r > std::min(m, n))
        raise("BadRank", "target rank exceeds min(rows, cols)");
    DenseMatrix a(m, n);
    if (r == 0) return a;

    SplitMix64 rng(seed);
    DenseMatrix left(m, r);
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < m; ++i) left(i, j) = rng.next_sym();
    DenseMatrix right(r, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < r; ++i) right(i, j) = rng.next_sym();
    return matmul(left, right);
}

DenseMatrix gen_locally_low_rank(const std::vector<std::pair<std::size_t, std::size_t>>& blocks,
                                 std::size_t n, std::uint64_t seed) {
    if (blocks.empty()) raise("EmptySelection", "need at least one row block");
    std::size_t total_rows = 0;
    for (const auto& [rows, rank] : blocks) {
        if (rank > std::min(rows, n)) raise("BadRank", "block rank exceeds block size");
        total_rows += rows;
    }

    DenseMatrix a(total_rows, n);
    std::size_t row0 = 0;
    std::uint64_t block_seed = seed;
    for (const auto& [rows, rank] : blocks) {
        // distinct derived seed per block keeps blocks independent
        const DenseMatrix blk = gen_exact_rank(rows, n, rank, block_seed++);
        if (rank > 0)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t i = 0; i < rows; ++i) a(row0 + i, j) = blk(i, j);
        row0 += rows;
    }
    return a;
}

GridGeom gen_unstructured_grid(std::size_t m, std::uint64_t seed,
                               const std::vector<std::pair<double, double>>& domain) {
    if (m < 1) raise("BadGridGeom", "need at least one point");
    if (domain.empty()) raise("BadGridGeom", "domain must have at least one axis");
    SplitMix64 rng(seed);
    std::vector<double> coords;
    coords.reserve(m * domain.size());
    for (std::size_t p = 0; p < m; ++p)
        for (const auto& [lo, hi] : domain) coords.push_back(lo + (hi - lo) * rng.next_unit());
    return GridGeom::unstructured(std::move(coords), domain.size());
}

} // namespace spid
