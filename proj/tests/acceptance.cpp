// Acceptance suite: every release-gating behavior checked at its pinned
// tolerance, one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "spid/bounds.hpp"
#include "spid/datagen.hpp"
#include "spid/pipeline.hpp"
#include "spid/rng.hpp"

using namespace spid;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, const std::function<void()>& body) {
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
        body();
    } catch (const std::exception& e) {
        failure = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (failure.empty()) {
        std::cout << "[PASS] criterion " << number << ": " << title << " (" << seconds
                  << " s)\n";
    } else {
        std::cout << "[FAIL] criterion " << number << ": " << title << " -- " << failure
                  << "\n";
        ++failures;
    }
}

void require(bool condition, const std::string& what) {
    if (!condition) throw std::runtime_error(what);
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

double rel_err(const DenseMatrix& exact, const DenseMatrix& approx) {
    return rel_frob_error(exact, approx);
}

TaylorGreenParams tg_params(TaylorGreenQoi qoi) {
    TaylorGreenParams params;
    params.grid = GridGeom::structured({20, 20}, {true, true});
    params.nu = 0.1;
    params.rho = 1.0;
    params.dt = 0.1;
    params.steps = 100;
    params.qoi = qoi;
    return params;
}

// won't count an ID unless its hard lemma properties hold
IdFactors checked_id(const DenseMatrix& a, const RankRule& rule) {
    IdFactors f = column_id(a, rule);
    lemma_check(f, a);
    return f;
}

// ---- criterion 1: analytic taylor-green reproduction --------------------------

void criterion1() {
    const auto start = std::chrono::steady_clock::now();

    for (auto qoi : {TaylorGreenQoi::U1, TaylorGreenQoi::U2, TaylorGreenQoi::P}) {
        const auto params = tg_params(qoi);
        const auto a = taylor_green_matrix(params);
        const IdFactors f = checked_id(a, RankRule::fixed(1));
        require(f.achieved_rank == 1, "rank must be 1 for " + qoi_name(qoi));

        const std::size_t stored = f.skeleton.entry_count() + f.coeffs.entry_count();
        require(stored == 1 * (400 + 100), "stored entries must be k(m+n)");
        const double cf = compression_factor(400, 100, stored);
        require(cf == 80.0, "cf must be exactly 80, got " + fmt(cf));

        const double err = rel_err(a, reconstruct(f));
        require(err <= 1e-12, qoi_name(qoi) + " error " + fmt(err) + " above 1e-12");
    }

    // unstructured grid, two-pass route with a strided index sketch
    TaylorGreenParams params = tg_params(TaylorGreenQoi::U1);
    const double hi = 2.0 * std::numbers::pi;
    params.grid = gen_unstructured_grid(400, 7, {{0.0, hi}, {0.0, hi}});
    const auto a = taylor_green_matrix(params);
    std::vector<std::size_t> every_second;
    for (std::size_t r = 0; r < 400; r += 2) every_second.push_back(r);
    const auto spec = SubsampleSpec::explicit_list(params.grid, every_second);
    const IdFactors f = sub_id(a, spec, RankRule::fixed(1));
    lemma_check(f, a);
    require(f.achieved_rank == 1, "unstructured rank must be 1");
    const std::size_t stored = f.skeleton.entry_count() + f.coeffs.entry_count();
    require(compression_factor(400, 100, stored) == 80.0, "unstructured cf must be 80");
    const double err = rel_err(a, reconstruct(f));
    require(err <= 1e-12, "unstructured error " + fmt(err) + " above 1e-12");

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(seconds < 5.0, "criterion must finish in under 5 s, took " + fmt(seconds));
}

// ---- criterion 2: partitioning accuracy trend ----------------------------------

void criterion2() {
    const auto params = tg_params(TaylorGreenQoi::U1);
    const auto a = taylor_green_matrix(params);

    const auto compress_blocks = [&](std::size_t blocks_per_axis) {
        std::vector<std::pair<std::vector<std::size_t>, DenseMatrix>> parts;
        for (const auto& rows :
             partition(params.grid, {blocks_per_axis, blocks_per_axis})) {
            const auto block = select_rows(a, rows);
            const IdFactors f = checked_id(block, RankRule::fixed(1));
            require(f.achieved_rank == 1, "per-block rank must stay 1");
            parts.emplace_back(rows, reconstruct(f));
        }
        return assemble(parts);
    };

    const double base_err = rel_err(a, compress_blocks(1));
    for (std::size_t blocks : {std::size_t{2}, std::size_t{5}, std::size_t{10}}) {
        const auto recon = compress_blocks(blocks);
        const double err = rel_err(a, recon);
        require(err <= 1e-11, fmt(blocks) + " blocks: error " + fmt(err) + " above 1e-11");
        require(err <= 10.0 * base_err,
                fmt(blocks) + " blocks: error " + fmt(err) + " above 10x single-block " +
                    fmt(base_err));

        // block-boundary rows specifically: the grid rows adjacent to every
        // internal block edge must match the analytic field to the same bar
        const std::size_t block_len = 20 / blocks;
        std::vector<std::size_t> boundary_rows;
        for (std::size_t y = 0; y < 20; ++y)
            for (std::size_t x = 0; x < 20; ++x) {
                const bool x_edge = x % block_len == 0 || x % block_len == block_len - 1;
                const bool y_edge = y % block_len == 0 || y % block_len == block_len - 1;
                if ((x_edge || y_edge) && blocks > 1)
                    boundary_rows.push_back(x + 20 * y);
            }
        if (!boundary_rows.empty()) {
            const auto exact_rows = select_rows(a, boundary_rows);
            const auto recon_rows = select_rows(recon, boundary_rows);
            const double boundary_err = rel_err(exact_rows, recon_rows);
            require(boundary_err <= 1e-11,
                    "boundary rows at " + fmt(blocks) + " blocks: error " + fmt(boundary_err));
        }
    }
}

// ---- criterion 3: compression-factor arithmetic and the reduced 3d run ---------

void criterion3() {
    const auto start = std::chrono::steady_clock::now();

    // pure storage arithmetic at full production scale (64^3 grid)
    const double cf_full = compression_factor(262144, 100, 1 * (262144 + 100));
    require(std::abs(cf_full - 100.0) < 0.1, "64^3 cf must be about 100, got " + fmt(cf_full));
    const double cf_sub = compression_factor(262144, 100, 1 * (10648 + 100));
    require(std::abs(cf_sub - 2439.0) < 1.0,
            "64^3 stride-3 cf must be about 2439, got " + fmt(cf_sub));

    // reduced-scale end-to-end single-pass run: 32^3 smooth field, stride 3
    SmoothField3dParams params;
    params.grid = GridGeom::structured({32, 32, 32});
    params.nu = 0.1;
    params.length_scale = 2.0;
    params.dt = 0.001;
    params.steps = 100;
    const auto a = smooth_field3d_matrix(params);

    StreamConfig config;
    config.plan = {params.grid, {1, 1, 1}, 25};
    config.strides = {3, 3, 3};
    config.stage1_rank = 1;
    config.workers = 2;
    MatrixProducer producer(a);
    const PipelineResult result = run_pipeline(producer, config);

    const double cf =
        compression_factor(a.rows(), a.cols(), result.archive.stored_entries());
    require(cf >= 300.0, "cf must be at least 300, got " + fmt(cf));
    const double err = rel_err(a, decompress(result.archive));
    require(err <= 5e-2, "error " + fmt(err) + " above 5e-2");

    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(seconds < 60.0, "criterion must finish in under 60 s, took " + fmt(seconds));
}

// ---- criterion 4: two-stage equivalence ----------------------------------------

void criterion4() {
    const std::size_t m = 40, n = 60;
    const auto grid = GridGeom::structured({m});
    const auto spec = SubsampleSpec::strided(grid, {1});

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const std::size_t r = 1 + (seed - 1) % 5;
        const auto a = gen_exact_rank(m, n, r, seed);
        for (std::size_t chunks : {std::size_t{2}, std::size_t{4}, std::size_t{5}}) {
            const std::size_t width = n / chunks;
            std::vector<IdFactors> stage1;
            for (std::size_t c0 = 0; c0 < n; c0 += width) {
                const std::size_t cols = std::min(width, n - c0);
                std::vector<std::size_t> idx(cols);
                for (std::size_t j = 0; j < cols; ++j) idx[j] = c0 + j;
                stage1.push_back(stage1_compress(select_columns(a, idx), spec, r + 1));
            }
            const TwoStageFactors two = stage2_compress(std::move(stage1), 1e-10);

            require(two.achieved_rank == r,
                    "seed " + fmt(seed) + ", N=" + fmt(chunks) + ": final rank " +
                        fmt(two.achieved_rank) + " != " + fmt(r));
            const double err = rel_err(a, reconstruct(two));
            require(err <= 1e-8, "seed " + fmt(seed) + ": error " + fmt(err) + " above 1e-8");

            // composed coefficients against the materialized block product
            DenseMatrix c0_full(two.union_indices.size(), n);
            for (std::size_t u = 0; u < two.union_sources.size(); ++u) {
                const auto [chunk, local] = two.union_sources[u];
                const IdFactors& f = two.stage1[chunk];
                for (std::size_t t = 0; t < f.source_cols; ++t)
                    c0_full(u, two.chunk_starts[chunk] + t) = f.coeffs(local, t);
            }
            const DenseMatrix product = matmul(two.stage2_coeffs, c0_full);
            const double comp_err = frobenius_norm(subtract(product, two.final_coeffs)) /
                                    std::max(1.0, frobenius_norm(two.final_coeffs));
            require(comp_err <= 1e-12,
                    "composition mismatch " + fmt(comp_err) + " above 1e-12");
        }
    }
}

// ---- criterion 5: theorem suite -------------------------------------------------

void criterion5() {
    // 20 seeds x strides {2,3} x k {2,5}; violations raise inside the checks
    const BoundsSuiteResult suite = run_bounds_suite(20);
    require(suite.thm1_checked == 80, "expected 80 thm1 instances");
    require(suite.thm2_checked == 80, "expected 80 thm2 instances");
    require(suite.worst_thm1_margin <= 1.0 + 1e-8,
            "thm1 margin " + fmt(suite.worst_thm1_margin));
    require(suite.worst_thm2_margin <= 1.0 + 1e-8,
            "thm2 margin " + fmt(suite.worst_thm2_margin));

    // eps_tau against an independent shifted power iteration
    SplitMix64 rng(12345);
    for (int rep = 0; rep < 5; ++rep) {
        const auto a = gen_decaying_field(30, 12, 6, 100 + rep);
        std::vector<std::size_t> rows;
        for (std::size_t r = 0; r < 30; r += 3) rows.push_back(r);
        const auto b = select_rows(a, rows);
        const double tau = 4.0 * rng.next_unit();

        DenseMatrix gram(12, 12);
        for (std::size_t i = 0; i < 12; ++i)
            for (std::size_t j = 0; j < 12; ++j)
                gram(i, j) = dot(a.col_span(i), a.col_span(j)) -
                             tau * dot(b.col_span(i), b.col_span(j));
        // independent oracle: shifted power iteration on the Gram difference
        double shift = 0.0;
        for (std::size_t i = 0; i < 12; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < 12; ++j) row += std::abs(gram(i, j));
            shift = std::max(shift, row);
        }
        std::vector<double> v(12, 1.0);
        v[0] = 1.1;
        double lambda = 0.0;
        for (int iter = 0; iter < 200000; ++iter) {
            std::vector<double> w(12, 0.0);
            for (std::size_t j = 0; j < 12; ++j)
                for (std::size_t i = 0; i < 12; ++i)
                    w[i] += (gram(i, j) + (i == j ? shift : 0.0)) * v[j];
            double norm = 0.0, rayleigh = 0.0;
            for (std::size_t i = 0; i < 12; ++i) {
                norm += w[i] * w[i];
                rayleigh += w[i] * v[i];
            }
            norm = std::sqrt(norm);
            for (std::size_t i = 0; i < 12; ++i) v[i] = w[i] / norm;
            if (iter > 8 && std::abs(rayleigh - lambda) <= 1e-15 * std::abs(rayleigh)) {
                lambda = rayleigh;
                break;
            }
            lambda = rayleigh;
        }
        const double oracle = lambda - shift;
        const double via_impl = eps_tau(a, b, tau);
        const double scale = std::max(std::abs(oracle), std::abs(via_impl));
        require(std::abs(via_impl - oracle) <= 1e-9 * scale,
                "eps_tau disagrees with the oracle: " + fmt(via_impl) + " vs " + fmt(oracle));
    }

    // hard lemma assertions on IDs produced across the suite, including the
    // exactness case at k = n on full-rank inputs
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto smooth = gen_decaying_field(36, 18, 6, 300 + seed);
        lemma_check(column_id(smooth, RankRule::fixed(4)), smooth);

        SplitMix64 rng(400 + seed);
        DenseMatrix full(36, 18);
        for (std::size_t idx = 0; idx < full.entry_count(); ++idx)
            full.data()[idx] = rng.next_sym();
        lemma_check(column_id(full, RankRule::fixed(18)), full);
    }
}

// ---- criterion 6: residual identity ---------------------------------------------

void criterion6() {
    SplitMix64 rng(777);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t m = 8 + rng.next_u64() % 20;
        const std::size_t n = 6 + rng.next_u64() % 16;
        DenseMatrix a(m, n);
        for (std::size_t idx = 0; idx < a.entry_count(); ++idx) a.data()[idx] = rng.next_sym();

        for (std::size_t k : {std::size_t{1}, std::size_t{3}, std::min(m, n)}) {
            const IdFactors f = checked_id(a, RankRule::fixed(k));
            const double err = frobenius_norm(subtract(a, reconstruct(f)));
            const double res = f.qr_residual_fro;
            // below rounding of ||A||_F both sides are numerical zero and
            // the relative comparison carries no information
            if (std::max(err, res) <= 1e-13 * frobenius_norm(a)) continue;
            const double gap = std::abs(err - res) / res;
            require(gap <= 1e-10, "residual identity off by " + fmt(gap));
        }
    }
}

// ---- criterion 7: pipeline determinism and the memory contract ------------------

void criterion7() {
    TaylorGreenParams params = tg_params(TaylorGreenQoi::U1);
    params.grid = GridGeom::structured({24, 24}, {true, true});
    params.steps = 60;
    const auto a = taylor_green_matrix(params);

    StreamConfig config;
    config.plan = {params.grid, {2, 2}, 20};
    config.strides = {2, 2};
    config.stage1_rank = 1;
    config.qoi = "u1";
    config.provenance = "acceptance-7";

    config.workers = 1;
    MatrixProducer p1(a);
    const PipelineResult serial = run_pipeline(p1, config);
    config.workers = 8;
    MatrixProducer p8(a);
    const PipelineResult parallel = run_pipeline(p8, config);

    require(encode(serial.archive) == encode(parallel.archive),
            "archives differ between 1 and 8 workers");

    const std::size_t m = params.grid.point_count();
    require(serial.buffers.fine_entries_peak <= m,
            "serial fine-grid peak above one snapshot");
    require(parallel.buffers.fine_entries_peak <= m,
            "parallel fine-grid peak above one snapshot");
    require(parallel.buffers.fine_entries_now == 0, "fine buffer not released");
}

// ---- criterion 8: locally-low-rank compression-factor trend ---------------------

void criterion8() {
    const std::size_t n = 50;
    const auto a = gen_locally_low_rank(
        {{40, 2}, {40, 2}, {40, 2}, {40, 2}, {40, 2}}, n, 99);
    const std::size_t m = a.rows();

    const IdFactors whole = checked_id(a, RankRule::tolerance(1e-10));
    const std::size_t stored_whole =
        whole.skeleton.entry_count() + whole.coeffs.entry_count();
    const double cf_whole = compression_factor(m, n, stored_whole);

    std::size_t stored_parts = 0;
    for (const auto& rows : partition(GridGeom::structured({m}), {5})) {
        const auto block = select_rows(a, rows);
        const IdFactors f = checked_id(block, RankRule::tolerance(1e-10));
        stored_parts += f.skeleton.entry_count() + f.coeffs.entry_count();
    }
    const double cf_parts =
        static_cast<double>(m) * static_cast<double>(n) / static_cast<double>(stored_parts);

    require(cf_parts >= 1.3 * cf_whole,
            "partitioned cf " + fmt(cf_parts) + " not 30% above unpartitioned " +
                fmt(cf_whole));
}

} // namespace

int main() {
    criterion(1, "taylor-green rank-1 reproduction at cf 80", criterion1);
    criterion(2, "partitioning keeps rank 1 and boundary continuity", criterion2);
    criterion(3, "compression-factor arithmetic and reduced 3d single-pass run", criterion3);
    criterion(4, "two-stage compression equals the composed factorization", criterion4);
    criterion(5, "error-bound theorems hold on seeded instances", criterion5);
    criterion(6, "reconstruction error equals the trailing qr residual", criterion6);
    criterion(7, "pipeline determinism and single-snapshot memory", criterion7);
    criterion(8, "partitioning lifts the compression factor on locally-low-rank data",
              criterion8);

    if (failures == 0) {
        std::cout << "all acceptance criteria passed\n";
        return 0;
    }
    std::cout << failures << " acceptance criteria failed\n";
    return 1;
}
