#pragma once

#include <optional>

#include "spid/id.hpp"

namespace spid {

/// Spatial decomposition plus the temporal chunk width used by the two-stage
/// compressor. time_chunk is the n/N column count of one stage-1 chunk.
struct PartitionPlan {
    GridGeom geom;
    std::vector<std::size_t> blocks_per_axis;
    std::size_t time_chunk = 25;
};

/// One spatial block: its global row set (increasing) and the local sub-grid
/// geometry it carries. Blocks covering a whole periodic axis keep the wrap;
/// interior blocks are treated as non-periodic.
struct BlockDomain {
    std::vector<std::size_t> rows;
    GridGeom local;
};

std::vector<BlockDomain> make_block_domains(const GridGeom& geom,
                                            const std::vector<std::size_t>& blocks_per_axis);

/// Row-index sets of the axis-aligned blocks, ordered by block coordinates
/// with axis 0 fastest (the same convention used to flatten grid points).
std::vector<std::vector<std::size_t>> partition(const GridGeom& geom,
                                                const std::vector<std::size_t>& blocks_per_axis);

/// Stage 1 of the two-stage scheme: fixed-rank single-pass ID of one temporal
/// chunk. The rank clamps to the chunk width (and to the numerical rank) so
/// short or degenerate chunks compress without error.
IdFactors stage1_compress(const DenseMatrix& chunk, const SubsampleSpec& spec, std::size_t k);

/// Same, for a chunk that is already on the coarse grid (as in the streaming
/// pipeline, which never retains fine-grid chunk data).
IdFactors stage1_compress_coarse(const DenseMatrix& coarse_chunk, std::size_t k);

/// Two-pass stage 1: indices and coefficients from the sketch, skeleton
/// columns re-read from the fine chunk. Used where no interpolation operator
/// exists (unstructured grids), at the cost of fine-grid skeleton storage.
IdFactors stage1_compress_fine(const DenseMatrix& chunk, const SubsampleSpec& spec,
                               std::size_t k);

/// Provenance of one concatenated-skeleton column: which chunk and which
/// local skeleton position it came from.
struct UnionSource {
    std::size_t chunk = 0;
    std::size_t local = 0;
};

/// Output of the second stage. Columns of the concatenated skeleton matrix
/// are kept in sorted global-snapshot order; union_indices, union_sources and
/// the stage-2 factors all follow that order. final_coeffs is the composed
/// product C1 * C0' spanning all n source snapshots.
struct TwoStageFactors {
    std::vector<IdFactors> stage1;
    std::vector<std::size_t> union_indices;
    std::vector<UnionSource> union_sources;
    std::vector<std::size_t> chunk_starts;
    std::vector<std::size_t> final_skeleton_union_pos; // stage-2 selection order
    DenseMatrix final_skeleton; // m_s x k_final
    DenseMatrix stage2_coeffs;  // C1, k_final x (total stage-1 rank)
    DenseMatrix final_coeffs;   // composed C1 * C0', k_final x n
    std::size_t achieved_rank = 0;
    std::size_t source_cols = 0;
    std::optional<InterpOperator> interp;

    /// Global snapshot indices of the final skeleton columns.
    std::vector<std::size_t> final_skeleton_global() const;
};

TwoStageFactors stage2_compress(std::vector<IdFactors> stage1, double tol);
TwoStageFactors stage2_compress(std::vector<IdFactors> stage1, double tol,
                                std::optional<InterpOperator> interp);

DenseMatrix reconstruct(const TwoStageFactors& factors);

/// Scatter reconstructed blocks back onto the full row set. The row sets must
/// tile [0, total) exactly.
DenseMatrix assemble(const std::vector<std::pair<std::vector<std::size_t>, DenseMatrix>>& blocks);

} // namespace spid
