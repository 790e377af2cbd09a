#pragma once

#include <cstdint>
#include <string>

#include "spid/blocking.hpp"
#include "spid/metrics.hpp"

namespace spid {

/// Everything needed to rebuild the approximation without side channels:
/// grid, partition plan, subsample recipe, rank rule and interpolation form
/// live in the JSON metadata; per-block factor matrices live in the binary
/// payload sections.
struct ArchiveMeta {
    GridGeom grid;
    std::vector<std::size_t> blocks_per_axis;
    std::size_t time_chunk = 0; // 0 = batch (single-stage) archive
    std::vector<std::size_t> strides;
    bool include_boundary = true;
    std::string mode;           // "two-stage" or "batch"
    std::string rank_rule_mode; // "fixed" or "tolerance" (stage-1 rule)
    std::size_t rank_k = 0;
    double rank_tol = 0.0;
    double stage2_tol = 0.0;
    std::string interp_recipe; // "strided-multilinear" or "none"
    std::string qoi;
    std::size_t m = 0;
    std::size_t n = 0;
    std::string provenance;
};

struct ArchiveBlock {
    std::vector<std::size_t> union_indices;    // global snapshot indices, sorted
    std::vector<std::size_t> skeleton_indices; // final skeleton columns, selection order
    DenseMatrix skeleton;                      // coarse or fine rows
    DenseMatrix coeffs;                        // k x n
    bool coarse_skeleton = false;
};

struct Archive {
    ArchiveMeta meta;
    std::vector<ArchiveBlock> blocks;

    std::size_t stored_entries() const;
    std::vector<std::size_t> block_ranks() const;
};

/// Container layout (all integers little-endian):
///   magic "SPID" | u32 version | metadata section | u64 block count | sections...
/// where a section is u64 payload length, payload bytes, u32 CRC-32 of the
/// payload. The metadata payload is UTF-8 JSON; block payloads hold u64 index
/// arrays and f64 column-major matrices.
std::vector<std::uint8_t> encode(const Archive& archive);
Archive decode(const std::vector<std::uint8_t>& bytes);

void write_archive_file(const std::string& path, const Archive& archive);
Archive read_archive_file(const std::string& path);

/// Metadata plus per-block ranks as a JSON string (the `info` surface).
std::string archive_info_json(const Archive& archive);

/// Full reconstruction: lift coarse skeletons through the recipe-stored
/// interpolation operator, multiply out the coefficients, scatter blocks.
DenseMatrix decompress(const Archive& archive);

QualityReport quality_report(const DenseMatrix& exact, const Archive& archive);

std::uint32_t crc32(const std::uint8_t* data, std::size_t length);

} // namespace spid
