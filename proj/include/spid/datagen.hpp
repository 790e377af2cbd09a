#pragma once

#include <string>

#include "spid/grid.hpp"

namespace spid {

enum class TaylorGreenQoi { U1, U2, P };

TaylorGreenQoi parse_qoi(const std::string& name);
std::string qoi_name(TaylorGreenQoi qoi);

/// Analytic 2D incompressible Taylor-Green vortex on [0, 2pi)^2:
///   u1 =  sin(x1) cos(x2) exp(-2 nu t)
///   u2 = -cos(x1) sin(x2) exp(-2 nu t)
///   p  =  rho/4 (cos(2 x1) + sin(2 x2)) exp(-4 nu t)
/// Each QoI snapshot matrix factors as (spatial profile) x (decay row), so
/// its numerical rank is exactly 1 on any grid.
struct TaylorGreenParams {
    double nu = 0.1;
    double rho = 1.0;
    GridGeom grid;
    double dt = 0.1;
    std::size_t steps = 100;
    TaylorGreenQoi qoi = TaylorGreenQoi::U1;
};

std::vector<double> taylor_green_snapshot(const TaylorGreenParams& params, double t);
DenseMatrix taylor_green_matrix(const TaylorGreenParams& params);

/// Smooth separable 3D field on [0, 2pi L)^3 with exponential time decay,
/// sin(x1/L) cos(x2/L) cos(x3/L) exp(-2 nu t). Stands in for large-grid
/// solver output in reduced-scale runs; rank 1 in time by construction.
struct SmoothField3dParams {
    GridGeom grid; // 3 structured axes
    double nu = 0.1;
    double length_scale = 1.0; // L
    double amplitude = 1.0;
    double dt = 0.1;
    std::size_t steps = 100;
};

std::vector<double> smooth_field3d_snapshot(const SmoothField3dParams& params, double t);
DenseMatrix smooth_field3d_matrix(const SmoothField3dParams& params);

/// Seeded m x r by r x n product with entries in [-1, 1]; numerical rank r.
/// r = 0 yields the zero matrix.
DenseMatrix gen_exact_rank(std::size_t m, std::size_t n, std::size_t r, std::uint64_t seed);

/// Stacked row blocks, each independently of exact rank; globally the rank
/// approaches the sum of block ranks.
DenseMatrix gen_locally_low_rank(const std::vector<std::pair<std::size_t, std::size_t>>& blocks,
                                 std::size_t n, std::uint64_t seed);

/// Seeded uniform points inside an axis-aligned box.
GridGeom gen_unstructured_grid(std::size_t m, std::uint64_t seed,
                               const std::vector<std::pair<double, double>>& domain);

} // namespace spid
