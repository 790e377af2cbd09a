// spid: stream-oriented lossy compression of snapshot matrices via the
// column interpolative decomposition. Subcommands: gen, compress,
// decompress, info, metrics, verify-bounds.

#include <cstdio>
#include <iostream>
#include <numbers>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "spid/bounds.hpp"
#include "spid/datagen.hpp"
#include "spid/frames.hpp"
#include "spid/pipeline.hpp"

namespace {

using nlohmann::json;

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(v[i]);
    }
    return s;
}

// ---- gen ---------------------------------------------------------------------

struct GenTgOptions {
    std::vector<std::size_t> grid{20, 20};
    double dt = 0.1;
    std::size_t steps = 100;
    std::string qoi = "u1";
    double nu = 0.1;
    double rho = 1.0;
    std::string out;
    bool unstructured = false;
    std::uint64_t seed = 0;
};

int run_gen_taylor_green(const GenTgOptions& opt) {
    if (opt.grid.size() != 2)
        spid::raise("BadGridGeom", "taylor-green is defined on a 2-axis grid");

    spid::TaylorGreenParams params;
    params.nu = opt.nu;
    params.rho = opt.rho;
    params.dt = opt.dt;
    params.steps = opt.steps;
    params.qoi = spid::parse_qoi(opt.qoi);
    if (opt.unstructured) {
        const double hi = 2.0 * std::numbers::pi;
        params.grid = spid::gen_unstructured_grid(opt.grid[0] * opt.grid[1], opt.seed,
                                                  {{0.0, hi}, {0.0, hi}});
    } else {
        params.grid = spid::GridGeom::structured({opt.grid[0], opt.grid[1]}, {true, true});
    }

    const spid::DenseMatrix a = spid::taylor_green_matrix(params);

    spid::FrameFileInfo info;
    info.m = a.rows();
    info.n = a.cols();
    info.grid = params.grid;
    info.qoi = opt.qoi;
    info.dt = opt.dt;
    info.provenance = "taylor-green qoi=" + opt.qoi + " nu=" + std::to_string(opt.nu) +
                      " rho=" + std::to_string(opt.rho) + " dt=" + std::to_string(opt.dt) +
                      " steps=" + std::to_string(opt.steps) + " grid=" + join_sizes(opt.grid) +
                      (opt.unstructured ? " unstructured seed=" + std::to_string(opt.seed) : "");
    spid::write_frames(opt.out, a, info);
    std::cout << "wrote " << info.m << "x" << info.n << " frames to " << opt.out << "\n";
    return 0;
}

struct GenSynthOptions {
    std::size_t rank = 0;
    std::vector<std::size_t> block_ranks;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int run_gen_synthetic(const GenSynthOptions& opt) {
    std::string provenance;
    spid::DenseMatrix a(1, 1);
    if (!opt.block_ranks.empty()) {
        // equal row blocks, the last absorbing the remainder
        const std::size_t nb = opt.block_ranks.size();
        const std::size_t base = opt.rows / nb;
        std::vector<std::pair<std::size_t, std::size_t>> blocks;
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t rows = (b + 1 == nb) ? opt.rows - base * b : base;
            blocks.emplace_back(rows, opt.block_ranks[b]);
        }
        a = spid::gen_locally_low_rank(blocks, opt.cols, opt.seed);
        provenance = "synthetic block-ranks=" + join_sizes(opt.block_ranks);
    } else {
        a = spid::gen_exact_rank(opt.rows, opt.cols, opt.rank, opt.seed);
        provenance = "synthetic rank=" + std::to_string(opt.rank);
    }
    provenance += " rows=" + std::to_string(opt.rows) + " cols=" + std::to_string(opt.cols) +
                  " seed=" + std::to_string(opt.seed);

    spid::FrameFileInfo info;
    info.m = a.rows();
    info.n = a.cols();
    info.grid = spid::GridGeom::structured({a.rows()});
    info.qoi = "synthetic";
    info.provenance = provenance;
    spid::write_frames(opt.out, a, info);
    std::cout << "wrote " << info.m << "x" << info.n << " frames to " << opt.out << "\n";
    return 0;
}

// ---- compress ----------------------------------------------------------------

struct CompressOptions {
    std::string in;
    std::string meta;
    std::vector<std::size_t> blocks;
    std::size_t chunk = 25;
    std::size_t rank = 0;
    double tol = 0.0;
    std::vector<std::size_t> strides;
    bool periodic = false;
    std::size_t workers = 0;
    std::string out;
};

// Batch and chunked compression of unstructured data: fine-grid skeletons
// (the two-pass route), no interpolation recipe.
spid::Archive compress_unstructured(const spid::DenseMatrix& a, const spid::FrameFileInfo& info,
                                    const CompressOptions& opt, std::size_t stride,
                                    const std::vector<std::size_t>& blocks_per_axis) {
    const auto domains = spid::make_block_domains(info.grid, blocks_per_axis);

    spid::Archive archive;
    archive.meta.grid = info.grid;
    archive.meta.blocks_per_axis = blocks_per_axis;
    archive.meta.time_chunk = opt.chunk;
    archive.meta.strides = {stride};
    archive.meta.include_boundary = true;
    archive.meta.interp_recipe = "none";
    archive.meta.qoi = info.qoi;
    archive.meta.m = a.rows();
    archive.meta.n = a.cols();
    archive.meta.provenance = info.provenance;

    for (const auto& domain : domains) {
        const spid::DenseMatrix block = spid::select_rows(a, domain.rows);
        std::vector<std::size_t> local_rows;
        for (std::size_t r = 0; r < domain.rows.size(); r += stride) local_rows.push_back(r);
        const auto spec = spid::SubsampleSpec::explicit_list(domain.local, local_rows);

        if (opt.chunk == 0) {
            archive.meta.mode = "batch";
            archive.meta.rank_rule_mode = opt.rank > 0 ? "fixed" : "tolerance";
            archive.meta.rank_k = opt.rank;
            archive.meta.rank_tol = opt.rank > 0 ? 0.0 : opt.tol;
            const auto rule = opt.rank > 0 ? spid::RankRule::fixed(opt.rank)
                                           : spid::RankRule::tolerance(opt.tol);
            spid::IdFactors f = spid::sub_id(block, spec, rule);
            std::vector<std::size_t> sorted = f.skeleton_indices;
            std::sort(sorted.begin(), sorted.end());
            archive.blocks.push_back({std::move(sorted), f.skeleton_indices,
                                      std::move(f.skeleton), std::move(f.coeffs), false});
        } else {
            archive.meta.mode = "two-stage";
            archive.meta.rank_rule_mode = "fixed";
            archive.meta.rank_k = opt.rank;
            archive.meta.stage2_tol = opt.tol;
            std::vector<spid::IdFactors> stage1;
            for (std::size_t c0 = 0; c0 < block.cols(); c0 += opt.chunk) {
                const std::size_t cols = std::min(opt.chunk, block.cols() - c0);
                std::vector<std::size_t> col_idx(cols);
                for (std::size_t j = 0; j < cols; ++j) col_idx[j] = c0 + j;
                stage1.push_back(spid::stage1_compress_fine(
                    spid::select_columns(block, col_idx), spec, opt.rank));
            }
            spid::TwoStageFactors two = spid::stage2_compress(std::move(stage1), opt.tol);
            archive.blocks.push_back({two.union_indices, two.final_skeleton_global(),
                                      std::move(two.final_skeleton),
                                      std::move(two.final_coeffs), false});
        }
    }
    return archive;
}

spid::Archive compress_structured_batch(const spid::DenseMatrix& a,
                                        const spid::FrameFileInfo& info,
                                        const CompressOptions& opt,
                                        const std::vector<std::size_t>& strides,
                                        const std::vector<std::size_t>& blocks_per_axis) {
    const auto domains = spid::make_block_domains(info.grid, blocks_per_axis);
    const auto rule = opt.rank > 0 ? spid::RankRule::fixed(opt.rank)
                                   : spid::RankRule::tolerance(opt.tol);

    spid::Archive archive;
    archive.meta.grid = info.grid;
    archive.meta.blocks_per_axis = blocks_per_axis;
    archive.meta.time_chunk = 0;
    archive.meta.strides = strides;
    archive.meta.include_boundary = true;
    archive.meta.mode = "batch";
    archive.meta.rank_rule_mode = opt.rank > 0 ? "fixed" : "tolerance";
    archive.meta.rank_k = opt.rank;
    archive.meta.rank_tol = opt.rank > 0 ? 0.0 : opt.tol;
    archive.meta.interp_recipe = "strided-multilinear";
    archive.meta.qoi = info.qoi;
    archive.meta.m = a.rows();
    archive.meta.n = a.cols();
    archive.meta.provenance = info.provenance;

    for (const auto& domain : domains) {
        const spid::DenseMatrix block = spid::select_rows(a, domain.rows);
        const auto spec = spid::SubsampleSpec::strided(domain.local, strides, true);
        spid::SpidFactors f = spid::spid(block, spec, rule);
        std::vector<std::size_t> sorted = f.base.skeleton_indices;
        std::sort(sorted.begin(), sorted.end());
        const bool coarse = spec.coarse_count() < domain.rows.size();
        archive.blocks.push_back({std::move(sorted), f.base.skeleton_indices,
                                  std::move(f.base.skeleton), std::move(f.base.coeffs),
                                  coarse});
    }
    return archive;
}

int run_compress(CompressOptions opt) {
    if (opt.meta.empty()) opt.meta = spid::frame_sidecar_path(opt.in);
    spid::FrameFileInfo info = spid::read_frame_info(opt.meta);

    const std::size_t naxes =
        info.grid.kind == spid::GridGeom::Kind::Structured ? info.grid.dims.size() : 1;
    std::vector<std::size_t> blocks = opt.blocks.empty()
                                          ? std::vector<std::size_t>(naxes, 1)
                                          : opt.blocks;
    std::vector<std::size_t> strides = opt.strides.empty()
                                           ? std::vector<std::size_t>(naxes, 1)
                                           : opt.strides;
    if (blocks.size() != naxes)
        spid::raise("BadStreamConfig", "--blocks arity must match the grid axis count");
    if (strides.size() != naxes)
        spid::raise("BadStreamConfig", "--stride arity must match the grid axis count");

    if (opt.periodic && info.grid.kind == spid::GridGeom::Kind::Structured)
        info.grid.periodic.assign(info.grid.dims.size(), true);

    if (opt.chunk == 0) {
        // batch: one ID per spatial block; --rank and --tol are exclusive
        if ((opt.rank > 0) == (opt.tol > 0.0))
            spid::raise("BadStreamConfig", "batch mode takes exactly one of --rank / --tol");
    } else if (opt.rank == 0) {
        spid::raise("BadStreamConfig", "chunked mode needs --rank for stage 1");
    }

    spid::Archive archive;
    if (info.grid.kind == spid::GridGeom::Kind::Unstructured) {
        const spid::DenseMatrix a = spid::read_frames(opt.in);
        if (opt.chunk > 0 && opt.tol == 0.0) opt.tol = 1e-6;
        archive = compress_unstructured(a, info, opt, strides[0], blocks);
    } else if (opt.chunk == 0) {
        const spid::DenseMatrix a = spid::read_frames(opt.in);
        archive = compress_structured_batch(a, info, opt, strides, blocks);
    } else {
        spid::StreamConfig config;
        config.plan = {info.grid, blocks, opt.chunk};
        config.strides = strides;
        config.include_boundary = true;
        config.stage1_rank = opt.rank;
        config.stage2_tol = opt.tol > 0.0 ? opt.tol : 1e-6;
        config.workers = opt.workers > 0 ? opt.workers
                                         : std::max(1u, std::thread::hardware_concurrency());
        config.qoi = info.qoi;
        config.provenance = info.provenance;

        spid::FrameFileProducer producer(opt.in, opt.meta);
        spid::PipelineResult result = spid::run_pipeline(producer, config);
        archive = std::move(result.archive);

        const spid::OverlapReport overlap = spid::overlap_report(result.events);
        std::cerr << "stage-1 overlap fraction: " << overlap.overlap_fraction << "\n";
    }

    spid::write_archive_file(opt.out, archive);
    std::cout << "wrote archive " << opt.out << " (" << archive.stored_entries()
              << " stored entries, cf="
              << spid::compression_factor(archive.meta.m, archive.meta.n,
                                          archive.stored_entries())
              << ")\n";
    return 0;
}

// ---- decompress / info / metrics / verify-bounds ------------------------------

int run_decompress(const std::string& in, const std::string& out) {
    const spid::Archive archive = spid::read_archive_file(in);
    const spid::DenseMatrix a = spid::decompress(archive);
    spid::FrameFileInfo info;
    info.m = a.rows();
    info.n = a.cols();
    info.grid = archive.meta.grid;
    info.qoi = archive.meta.qoi;
    info.provenance = archive.meta.provenance;
    spid::write_frames(out, a, info);
    std::cout << "wrote " << info.m << "x" << info.n << " frames to " << out << "\n";
    return 0;
}

int run_info(const std::string& in) {
    std::cout << spid::archive_info_json(spid::read_archive_file(in)) << "\n";
    return 0;
}

int run_metrics(const std::string& exact_path, const std::string& archive_path) {
    const spid::DenseMatrix exact = spid::read_frames(exact_path);
    const spid::Archive archive = spid::read_archive_file(archive_path);
    const spid::QualityReport report = spid::quality_report(exact, archive);

    json j;
    j["cf"] = report.cf;
    j["rel_frob_error"] = report.rel_frob_error;
    j["block_ranks"] = report.block_ranks;
    j["stored_entries"] = report.stored_entries;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_verify_bounds(std::size_t seed_count, std::vector<double> tau_grid) {
    if (tau_grid.empty()) tau_grid = spid::default_tau_grid();
    const spid::BoundsSuiteResult r = spid::run_bounds_suite(seed_count, tau_grid);

    json j;
    j["seed_count"] = seed_count;
    j["tau_grid"] = tau_grid;
    j["thm1_checked"] = r.thm1_checked;
    j["thm2_checked"] = r.thm2_checked;
    j["lemma_checked"] = r.lemma_checked;
    j["worst_thm1_margin"] = r.worst_thm1_margin;
    j["worst_thm2_margin"] = r.worst_thm2_margin;
    j["diagnostics"] = {{"entry_bound_violations", r.entry_bound_violations},
                        {"coeff_norm_violations", r.coeff_norm_violations},
                        {"sigma_k_violations", r.sigma_k_violations},
                        {"spectral_bound_violations", r.spectral_bound_violations}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"interpolative-decomposition compression of snapshot matrices"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate reference data sets");
    gen->require_subcommand(1);

    GenTgOptions tg;
    auto* gen_tg = gen->add_subcommand("taylor-green", "analytic 2D Taylor-Green snapshots");
    gen_tg->add_option("--grid", tg.grid, "grid points per axis (A,B)")->delimiter(',');
    gen_tg->add_option("--dt", tg.dt, "snapshot interval in seconds");
    gen_tg->add_option("--steps", tg.steps, "snapshot count");
    gen_tg->add_option("--qoi", tg.qoi, "u1, u2 or p");
    gen_tg->add_option("--nu", tg.nu, "kinematic viscosity");
    gen_tg->add_option("--rho", tg.rho, "density");
    gen_tg->add_option("--out", tg.out, "output frame file")->required();
    gen_tg->add_flag("--unstructured", tg.unstructured, "seeded random points instead of a grid");
    gen_tg->add_option("--seed", tg.seed, "seed for --unstructured");

    GenSynthOptions sy;
    auto* gen_sy = gen->add_subcommand("synthetic", "seeded exact-rank matrices");
    auto* sy_rank = gen_sy->add_option("--rank", sy.rank, "global exact rank");
    auto* sy_blocks =
        gen_sy->add_option("--block-ranks", sy.block_ranks, "per-row-block ranks")->delimiter(',');
    sy_rank->excludes(sy_blocks);
    gen_sy->add_option("--rows", sy.rows, "row count")->required();
    gen_sy->add_option("--cols", sy.cols, "column count")->required();
    gen_sy->add_option("--seed", sy.seed, "generator seed");
    gen_sy->add_option("--out", sy.out, "output frame file")->required();

    // compress
    CompressOptions co;
    auto* compress = app.add_subcommand("compress", "compress a frame file into an archive");
    compress->add_option("--in", co.in, "input frame file")->required();
    compress->add_option("--meta", co.meta, "sidecar path (default <in>.json)");
    compress->add_option("--blocks", co.blocks, "spatial blocks per axis")->delimiter(',');
    compress->add_option("--chunk", co.chunk, "stage-1 chunk width; 0 = batch (default 25)");
    compress->add_option("--rank", co.rank, "stage-1 rank (or batch fixed rank)");
    compress->add_option("--tol", co.tol, "stage-2 tolerance (or batch tolerance)");
    compress->add_option("--stride", co.strides, "subsampling stride per axis")->delimiter(',');
    compress->add_flag("--periodic", co.periodic, "treat all axes as periodic");
    compress->add_option("--workers", co.workers, "worker count (default: hardware)");
    compress->add_option("--out", co.out, "output archive")->required();

    // decompress / info / metrics / verify-bounds
    std::string d_in, d_out;
    auto* decompress = app.add_subcommand("decompress", "reconstruct frames from an archive");
    decompress->add_option("--in", d_in, "input archive")->required();
    decompress->add_option("--out", d_out, "output frame file")->required();

    std::string i_in;
    auto* info_cmd = app.add_subcommand("info", "print archive metadata as JSON");
    info_cmd->add_option("--in", i_in, "input archive")->required();

    std::string m_exact, m_archive;
    auto* metrics = app.add_subcommand("metrics", "compression factor and error vs exact data");
    metrics->add_option("--exact", m_exact, "exact frame file")->required();
    metrics->add_option("--archive", m_archive, "archive to evaluate")->required();

    std::size_t vb_seeds = 20;
    std::vector<double> vb_tau;
    auto* verify = app.add_subcommand("verify-bounds", "numerical check of the error bounds");
    verify->add_option("--seed-count", vb_seeds, "seeded instances per configuration");
    verify->add_option("--tau-grid", vb_tau, "tau sample points")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (gen_tg->parsed()) return run_gen_taylor_green(tg);
        if (gen_sy->parsed()) return run_gen_synthetic(sy);
        if (compress->parsed()) return run_compress(co);
        if (decompress->parsed()) return run_decompress(d_in, d_out);
        if (info_cmd->parsed()) return run_info(i_in);
        if (metrics->parsed()) return run_metrics(m_exact, m_archive);
        if (verify->parsed()) return run_verify_bounds(vb_seeds, vb_tau);
    } catch (const spid::Error& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
