// pyspid: numpy-facing bindings for the ID compression kernels and the
// streaming two-stage compressor.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

#include "spid/bounds.hpp"
#include "spid/datagen.hpp"
#include "spid/pipeline.hpp"

namespace py = pybind11;

namespace {

using FArray = py::array_t<double, py::array::f_style | py::array::forcecast>;

spid::DenseMatrix to_matrix(const FArray& arr) {
    if (arr.ndim() != 2)
        throw py::value_error("expected a 2-D array");
    spid::DenseMatrix m(static_cast<std::size_t>(arr.shape(0)),
                        static_cast<std::size_t>(arr.shape(1)));
    std::memcpy(m.data(), arr.data(), m.entry_count() * sizeof(double));
    return m;
}

py::array_t<double> to_array(const spid::DenseMatrix& m) {
    py::array_t<double> arr({m.rows(), m.cols()},
                            {sizeof(double), sizeof(double) * m.rows()});
    std::memcpy(arr.mutable_data(), m.data(), m.entry_count() * sizeof(double));
    return arr;
}

spid::RankRule make_rule(std::optional<std::size_t> rank, std::optional<double> tol) {
    if (rank.has_value() == tol.has_value())
        throw py::value_error("pass exactly one of rank= or tol=");
    return rank ? spid::RankRule::fixed(*rank) : spid::RankRule::tolerance(*tol);
}

spid::GridGeom make_grid(const std::vector<std::size_t>& dims,
                         std::optional<std::vector<bool>> periodic) {
    return spid::GridGeom::structured(dims, periodic.value_or(std::vector<bool>{}));
}

py::dict factors_dict(const spid::IdFactors& f) {
    py::dict d;
    d["indices"] = f.skeleton_indices;
    d["coeffs"] = to_array(f.coeffs);
    d["skeleton"] = to_array(f.skeleton);
    d["rank"] = f.achieved_rank;
    return d;
}

} // namespace

PYBIND11_MODULE(pyspid, m) {
    m.doc() = "column interpolative decomposition compression for snapshot matrices";

    py::register_exception<spid::Error>(m, "SpidError");

    m.def(
        "taylor_green",
        [](const std::vector<std::size_t>& dims, std::size_t steps, double dt, double nu,
           double rho, const std::string& qoi) {
            spid::TaylorGreenParams params;
            params.grid = spid::GridGeom::structured(dims, {true, true});
            params.steps = steps;
            params.dt = dt;
            params.nu = nu;
            params.rho = rho;
            params.qoi = spid::parse_qoi(qoi);
            return to_array(spid::taylor_green_matrix(params));
        },
        py::arg("dims"), py::arg("steps") = 100, py::arg("dt") = 0.1, py::arg("nu") = 0.1,
        py::arg("rho") = 1.0, py::arg("qoi") = "u1",
        "Snapshot matrix of the analytic 2D Taylor-Green vortex.");

    m.def(
        "column_id",
        [](const FArray& a, std::optional<std::size_t> rank, std::optional<double> tol) {
            return factors_dict(spid::column_id(to_matrix(a), make_rule(rank, tol)));
        },
        py::arg("a"), py::arg("rank") = py::none(), py::arg("tol") = py::none(),
        "Column ID: skeleton indices, coefficients and skeleton columns.");

    m.def(
        "sub_id",
        [](const FArray& a, const std::vector<std::size_t>& dims,
           const std::vector<std::size_t>& strides, std::optional<std::size_t> rank,
           std::optional<double> tol, std::optional<std::vector<bool>> periodic) {
            const auto spec =
                spid::SubsampleSpec::strided(make_grid(dims, std::move(periodic)), strides);
            return factors_dict(spid::sub_id(to_matrix(a), spec, make_rule(rank, tol)));
        },
        py::arg("a"), py::arg("dims"), py::arg("strides"), py::arg("rank") = py::none(),
        py::arg("tol") = py::none(), py::arg("periodic") = py::none(),
        "Two-pass subsampled ID with fine-grid skeleton columns.");

    m.def(
        "spid",
        [](const FArray& a, const std::vector<std::size_t>& dims,
           const std::vector<std::size_t>& strides, std::optional<std::size_t> rank,
           std::optional<double> tol, std::optional<std::vector<bool>> periodic) {
            const auto spec =
                spid::SubsampleSpec::strided(make_grid(dims, std::move(periodic)), strides);
            const spid::SpidFactors f =
                spid::spid(to_matrix(a), spec, make_rule(rank, tol));
            py::dict d = factors_dict(f.base);
            d["approx"] = to_array(spid::reconstruct(f));
            return d;
        },
        py::arg("a"), py::arg("dims"), py::arg("strides"), py::arg("rank") = py::none(),
        py::arg("tol") = py::none(), py::arg("periodic") = py::none(),
        "Single-pass ID: coarse skeleton plus the interpolated reconstruction.");

    m.def(
        "reconstruct",
        [](const FArray& skeleton, const FArray& coeffs) {
            return to_array(spid::matmul(to_matrix(skeleton), to_matrix(coeffs)));
        },
        py::arg("skeleton"), py::arg("coeffs"));

    m.def(
        "two_stage_compress",
        [](const FArray& a, const std::vector<std::size_t>& dims,
           const std::vector<std::size_t>& blocks, std::size_t chunk, std::size_t rank,
           double tol, const std::vector<std::size_t>& strides, std::size_t workers,
           std::optional<std::vector<bool>> periodic) {
            const spid::DenseMatrix mat = to_matrix(a);
            spid::StreamConfig config;
            config.plan = {make_grid(dims, std::move(periodic)), blocks, chunk};
            config.strides =
                strides.empty() ? std::vector<std::size_t>(dims.size(), 1) : strides;
            config.stage1_rank = rank;
            config.stage2_tol = tol;
            config.workers = workers;
            spid::MatrixProducer producer(mat);
            const spid::PipelineResult result = spid::run_pipeline(producer, config);

            py::dict d;
            d["approx"] = to_array(spid::decompress(result.archive));
            d["block_ranks"] = result.archive.block_ranks();
            d["stored_entries"] = result.archive.stored_entries();
            d["cf"] = spid::compression_factor(mat.rows(), mat.cols(),
                                               result.archive.stored_entries());
            return d;
        },
        py::arg("a"), py::arg("dims"), py::arg("blocks"), py::arg("chunk"), py::arg("rank"),
        py::arg("tol") = 1e-6, py::arg("strides") = std::vector<std::size_t>{},
        py::arg("workers") = 1, py::arg("periodic") = py::none(),
        "Streaming two-stage compression of an in-memory snapshot matrix.");

    m.def(
        "rel_frob_error",
        [](const FArray& exact, const FArray& approx) {
            return spid::rel_frob_error(to_matrix(exact), to_matrix(approx));
        },
        py::arg("exact"), py::arg("approx"));

    m.def("compression_factor", &spid::compression_factor, py::arg("m"), py::arg("n"),
          py::arg("stored_entries"));
}
