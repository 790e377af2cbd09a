#include "spid/blocking.hpp"

#include <algorithm>
#include <cassert>

namespace spid {

namespace {

// Contiguous segment boundaries of one axis: first count-1 segments take
// dim/count points, the last absorbs the remainder.
std::vector<std::pair<std::size_t, std::size_t>> axis_segments(std::size_t dim,
                                                               std::size_t count) {
    if (count < 1 || count > dim)
        raise("BlockTooSmall", "blocks per axis must lie in [1, axis dim]");
    const std::size_t base = dim / count;
    std::vector<std::pair<std::size_t, std::size_t>> segs;
    segs.reserve(count);
    std::size_t at = 0;
    for (std::size_t b = 0; b < count; ++b) {
        const std::size_t len = (b + 1 == count) ? dim - at : base;
        if (len < 1) raise("BlockTooSmall", "a block would hold no points");
        segs.emplace_back(at, len);
        at += len;
    }
    return segs;
}

} // namespace

std::vector<BlockDomain> make_block_domains(const GridGeom& geom,
                                            const std::vector<std::size_t>& blocks_per_axis) {
    if (geom.kind == GridGeom::Kind::Unstructured) {
        if (blocks_per_axis.size() != 1)
            raise("BadGridGeom", "unstructured grids are blocked along the single row axis");
        const auto segs = axis_segments(geom.point_count(), blocks_per_axis[0]);
        std::vector<BlockDomain> out;
        for (const auto& [start, len] : segs) {
            BlockDomain d;
            d.rows.resize(len);
            for (std::size_t i = 0; i < len; ++i) d.rows[i] = start + i;
            d.local = GridGeom::unstructured_counted(len);
            out.push_back(std::move(d));
        }
        return out;
    }

    const std::size_t naxes = geom.dims.size();
    if (blocks_per_axis.size() != naxes)
        raise("BadGridGeom", "blocks_per_axis arity must match axis count");

    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> segs(naxes);
    for (std::size_t ax = 0; ax < naxes; ++ax)
        segs[ax] = axis_segments(geom.dims[ax], blocks_per_axis[ax]);

    const std::size_t b0 = segs[0].size();
    const std::size_t b1 = naxes > 1 ? segs[1].size() : 1;
    const std::size_t b2 = naxes > 2 ? segs[2].size() : 1;
    const std::size_t d0 = geom.dims[0];
    const std::size_t d1 = naxes > 1 ? geom.dims[1] : 1;

    std::vector<BlockDomain> out;
    out.reserve(b0 * b1 * b2);
    // block order mirrors point flattening: axis 0 fastest
    for (std::size_t g2 = 0; g2 < b2; ++g2)
        for (std::size_t g1 = 0; g1 < b1; ++g1)
            for (std::size_t g0 = 0; g0 < b0; ++g0) {
                const auto [s0, l0] = segs[0][g0];
                const auto [s1, l1] = naxes > 1 ? segs[1][g1] : std::pair<std::size_t, std::size_t>{0, 1};
                const auto [s2, l2] = naxes > 2 ? segs[2][g2] : std::pair<std::size_t, std::size_t>{0, 1};

                BlockDomain d;
                d.rows.reserve(l0 * l1 * l2);
                for (std::size_t i2 = 0; i2 < l2; ++i2)
                    for (std::size_t i1 = 0; i1 < l1; ++i1)
                        for (std::size_t i0 = 0; i0 < l0; ++i0) {
                            std::size_t flat = s0 + i0;
                            if (naxes > 1) flat += d0 * (s1 + i1);
                            if (naxes > 2) flat += d0 * d1 * (s2 + i2);
                            d.rows.push_back(flat);
                        }

                std::vector<std::size_t> local_dims{l0};
                std::vector<bool> local_periodic{geom.periodic[0] && l0 == geom.dims[0]};
                if (naxes > 1) {
                    local_dims.push_back(l1);
                    local_periodic.push_back(geom.periodic[1] && l1 == geom.dims[1]);
                }
                if (naxes > 2) {
                    local_dims.push_back(l2);
                    local_periodic.push_back(geom.periodic[2] && l2 == geom.dims[2]);
                }
                d.local = GridGeom::structured_block(std::move(local_dims),
                                                     std::move(local_periodic));
                out.push_back(std::move(d));
            }
    return out;
}

std::vector<std::vector<std::size_t>> partition(const GridGeom& geom,
                                                const std::vector<std::size_t>& blocks_per_axis) {
    std::vector<std::vector<std::size_t>> sets;
    for (auto& d : make_block_domains(geom, blocks_per_axis)) sets.push_back(std::move(d.rows));
    return sets;
}

IdFactors stage1_compress(const DenseMatrix& chunk, const SubsampleSpec& spec, std::size_t k) {
    const DenseMatrix sketch = subsample(chunk, spec);
    return stage1_compress_coarse(sketch, k);
}

IdFactors stage1_compress_coarse(const DenseMatrix& coarse_chunk, std::size_t k) {
    if (k < 1) raise("BadRankRule", "stage-1 rank must be >= 1");
    return column_id_at_most(coarse_chunk, std::min(k, coarse_chunk.cols()));
}

IdFactors stage1_compress_fine(const DenseMatrix& chunk, const SubsampleSpec& spec,
                               std::size_t k) {
    IdFactors f = stage1_compress(chunk, spec, k);
    f.skeleton = select_columns(chunk, f.skeleton_indices);
    return f;
}

TwoStageFactors stage2_compress(std::vector<IdFactors> stage1, double tol) {
    return stage2_compress(std::move(stage1), tol, std::nullopt);
}

TwoStageFactors stage2_compress(std::vector<IdFactors> stage1, double tol,
                                std::optional<InterpOperator> interp) {
    if (stage1.empty())
        raise("EmptySelection", "stage 2 needs at least one stage-1 result");

    const std::size_t m_s = stage1.front().skeleton.rows();
    for (const auto& f : stage1)
        if (f.skeleton.rows() != m_s)
            raise("DimensionMismatch", "stage-1 skeletons disagree on row count");

    TwoStageFactors out{std::move(stage1), {}, {}, {}, {},
                        DenseMatrix(1, 1), DenseMatrix(1, 1), DenseMatrix(1, 1),
                        0, 0, std::move(interp)};

    // Global column offsets of the chunks and the union index set. Chunk
    // skeleton indices are local to the chunk, offset by its start.
    out.chunk_starts.resize(out.stage1.size());
    std::size_t n_total = 0;
    for (std::size_t j = 0; j < out.stage1.size(); ++j) {
        out.chunk_starts[j] = n_total;
        n_total += out.stage1[j].source_cols;
    }
    out.source_cols = n_total;

    struct Entry {
        std::size_t global;
        UnionSource src;
    };
    std::vector<Entry> entries;
    for (std::size_t j = 0; j < out.stage1.size(); ++j)
        for (std::size_t l = 0; l < out.stage1[j].achieved_rank; ++l)
            entries.push_back({out.chunk_starts[j] + out.stage1[j].skeleton_indices[l], {j, l}});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.global < b.global; });
    for (std::size_t i = 1; i < entries.size(); ++i)
        assert(entries[i].global != entries[i - 1].global); // chunks are disjoint in time

    out.union_indices.reserve(entries.size());
    out.union_sources.reserve(entries.size());
    for (const auto& e : entries) {
        out.union_indices.push_back(e.global);
        out.union_sources.push_back(e.src);
    }

    // Concatenated skeleton matrix, columns in sorted global order.
    DenseMatrix concat(m_s, entries.size());
    for (std::size_t u = 0; u < entries.size(); ++u) {
        const auto& f = out.stage1[entries[u].src.chunk];
        const double* src = f.skeleton.col(entries[u].src.local);
        double* dst = concat.col(u);
        for (std::size_t i = 0; i < m_s; ++i) dst[i] = src[i];
    }

    const IdFactors second = column_id(concat, RankRule::tolerance(tol));
    out.final_skeleton_union_pos = second.skeleton_indices;
    out.final_skeleton = second.skeleton;
    out.stage2_coeffs = second.coeffs;
    out.achieved_rank = second.achieved_rank;

    // Compose C1' = C1 * C0' without materializing the block-diagonal C0':
    // union column u holds row `local` of chunk `chunk`'s coefficients.
    out.final_coeffs = DenseMatrix(second.achieved_rank, n_total);
    for (std::size_t u = 0; u < entries.size(); ++u) {
        const auto [chunk, local] = entries[u].src;
        const IdFactors& f = out.stage1[chunk];
        const std::size_t col0 = out.chunk_starts[chunk];
        for (std::size_t t = 0; t < f.source_cols; ++t) {
            const double c0 = f.coeffs(local, t);
            if (c0 == 0.0) continue;
            for (std::size_t r = 0; r < second.achieved_rank; ++r)
                out.final_coeffs(r, col0 + t) += second.coeffs(r, u) * c0;
        }
    }
    if (!out.final_coeffs.all_finite())
        raise("NonFiniteCoeffs", "composed coefficients contain NaN or infinity");
    return out;
}

std::vector<std::size_t> TwoStageFactors::final_skeleton_global() const {
    std::vector<std::size_t> global;
    global.reserve(final_skeleton_union_pos.size());
    for (std::size_t pos : final_skeleton_union_pos) global.push_back(union_indices[pos]);
    return global;
}

DenseMatrix reconstruct(const TwoStageFactors& factors) {
    if (factors.interp)
        return matmul(factors.interp->apply(factors.final_skeleton), factors.final_coeffs);
    return matmul(factors.final_skeleton, factors.final_coeffs);
}

DenseMatrix assemble(const std::vector<std::pair<std::vector<std::size_t>, DenseMatrix>>& blocks) {
    if (blocks.empty()) raise("EmptySelection", "nothing to assemble");
    std::size_t total = 0;
    const std::size_t cols = blocks.front().second.cols();
    for (const auto& [rows, mat] : blocks) {
        if (mat.cols() != cols)
            raise("DimensionMismatch", "blocks disagree on column count");
        if (rows.size() != mat.rows())
            raise("DimensionMismatch", "row set size does not match block rows");
        total += rows.size();
    }

    DenseMatrix out(total, cols);
    std::vector<bool> seen(total, false);
    for (const auto& [rows, mat] : blocks)
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i] >= total || seen[rows[i]])
                raise("CoverageGap", "row sets must tile the output exactly");
            seen[rows[i]] = true;
            for (std::size_t j = 0; j < cols; ++j) out(rows[i], j) = mat(i, j);
        }
    return out;
}

} // namespace spid
