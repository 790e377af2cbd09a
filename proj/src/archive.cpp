#include "spid/archive.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "spid/json_io.hpp"

static_assert(std::endian::native == std::endian::little,
              "archive format is little-endian");

namespace spid {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'S', 'P', 'I', 'D'};
constexpr std::uint32_t kVersion = 1;

// ---- primitive little-endian writers/readers --------------------------------

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

class Reader {
public:
    Reader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[at_ + i]) << (8 * i);
        at_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[at_ + i]) << (8 * i);
        at_ += 8;
        return v;
    }

    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }

    const std::uint8_t* bytes(std::size_t count) {
        need(count);
        const std::uint8_t* p = data_ + at_;
        at_ += count;
        return p;
    }

    bool exhausted() const { return at_ == size_; }

private:
    void need(std::size_t count) const {
        if (at_ + count > size_)
            raise("TruncatedPayload", "archive ends before the promised payload");
    }

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t at_ = 0;
};

// Section = u64 length, payload, u32 CRC-32 of the payload.
void put_section(std::vector<std::uint8_t>& out, const std::vector<std::uint8_t>& payload) {
    put_u64(out, payload.size());
    out.insert(out.end(), payload.begin(), payload.end());
    put_u32(out, crc32(payload.data(), payload.size()));
}

std::vector<std::uint8_t> read_section(Reader& r) {
    const std::uint64_t len = r.u64();
    const std::uint8_t* p = r.bytes(len);
    std::vector<std::uint8_t> payload(p, p + len);
    const std::uint32_t stored = r.u32();
    if (stored != crc32(payload.data(), payload.size()))
        raise("ChecksumMismatch", "section checksum does not match payload");
    return payload;
}

void put_index_array(std::vector<std::uint8_t>& out, const std::vector<std::size_t>& idx) {
    put_u64(out, idx.size());
    for (std::size_t v : idx) put_u64(out, v);
}

std::vector<std::size_t> read_index_array(Reader& r) {
    const std::uint64_t count = r.u64();
    std::vector<std::size_t> idx(count);
    for (std::uint64_t i = 0; i < count; ++i) idx[i] = r.u64();
    return idx;
}

void put_matrix(std::vector<std::uint8_t>& out, const DenseMatrix& m) {
    put_u64(out, m.rows());
    put_u64(out, m.cols());
    for (std::size_t i = 0; i < m.entry_count(); ++i) put_f64(out, m.data()[i]);
}

DenseMatrix read_matrix(Reader& r) {
    const std::uint64_t rows = r.u64();
    const std::uint64_t cols = r.u64();
    if (rows == 0 || cols == 0)
        raise("TruncatedPayload", "matrix section has empty dimensions");
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.entry_count(); ++i) m.data()[i] = r.f64();
    return m;
}

nlohmann::json meta_to_json(const ArchiveMeta& meta) {
    nlohmann::json j;
    j["grid"] = grid_to_json(meta.grid);
    j["blocks_per_axis"] = meta.blocks_per_axis;
    j["time_chunk"] = meta.time_chunk;
    j["strides"] = meta.strides;
    j["include_boundary"] = meta.include_boundary;
    j["mode"] = meta.mode;
    j["rank_rule"] = {{"mode", meta.rank_rule_mode}, {"k", meta.rank_k}, {"tol", meta.rank_tol}};
    j["stage2_tol"] = meta.stage2_tol;
    j["interp"] = meta.interp_recipe;
    j["qoi"] = meta.qoi;
    j["m"] = meta.m;
    j["n"] = meta.n;
    j["provenance"] = meta.provenance;
    return j;
}

ArchiveMeta meta_from_json(const nlohmann::json& j) {
    ArchiveMeta meta;
    meta.grid = grid_from_json(j.at("grid"));
    meta.blocks_per_axis = j.at("blocks_per_axis").get<std::vector<std::size_t>>();
    meta.time_chunk = j.at("time_chunk").get<std::size_t>();
    meta.strides = j.at("strides").get<std::vector<std::size_t>>();
    meta.include_boundary = j.at("include_boundary").get<bool>();
    meta.mode = j.at("mode").get<std::string>();
    meta.rank_rule_mode = j.at("rank_rule").at("mode").get<std::string>();
    meta.rank_k = j.at("rank_rule").at("k").get<std::size_t>();
    meta.rank_tol = j.at("rank_rule").at("tol").get<double>();
    meta.stage2_tol = j.at("stage2_tol").get<double>();
    meta.interp_recipe = j.at("interp").get<std::string>();
    meta.qoi = j.at("qoi").get<std::string>();
    meta.m = j.at("m").get<std::size_t>();
    meta.n = j.at("n").get<std::size_t>();
    meta.provenance = j.at("provenance").get<std::string>();
    return meta;
}

} // namespace

std::uint32_t crc32(const std::uint8_t* data, std::size_t length) {
    // CRC-32/ISO-HDLC (the zlib polynomial), bitwise; archives are small
    // enough that a lookup table buys nothing.
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < length; ++i) {
        crc ^= data[i];
        for (int b = 0; b < 8; ++b)
            crc = (crc >> 1) ^ (0xEDB88320u & (~(crc & 1u) + 1u));
    }
    return ~crc;
}

std::size_t Archive::stored_entries() const {
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.skeleton.entry_count() + b.coeffs.entry_count();
    return total;
}

std::vector<std::size_t> Archive::block_ranks() const {
    std::vector<std::size_t> ranks;
    ranks.reserve(blocks.size());
    for (const auto& b : blocks) ranks.push_back(b.coeffs.rows());
    return ranks;
}

std::vector<std::uint8_t> encode(const Archive& archive) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic.begin(), kMagic.end());
    put_u32(out, kVersion);

    const std::string meta = meta_to_json(archive.meta).dump();
    put_section(out, {meta.begin(), meta.end()});

    put_u64(out, archive.blocks.size());
    for (const auto& block : archive.blocks) {
        std::vector<std::uint8_t> payload;
        payload.push_back(block.coarse_skeleton ? 1 : 0);
        put_index_array(payload, block.union_indices);
        put_index_array(payload, block.skeleton_indices);
        put_matrix(payload, block.skeleton);
        put_matrix(payload, block.coeffs);
        put_section(out, payload);
    }
    return out;
}

Archive decode(const std::vector<std::uint8_t>& bytes) {
    Reader r(bytes.data(), bytes.size());
    const std::uint8_t* magic = r.bytes(4);
    if (!std::equal(kMagic.begin(), kMagic.end(), magic))
        raise("BadMagic", "not a SPID archive");
    const std::uint32_t version = r.u32();
    if (version != kVersion)
        raise("VersionUnsupported", "archive version " + std::to_string(version));

    const auto meta_payload = read_section(r);
    nlohmann::json meta_json;
    try {
        meta_json = nlohmann::json::parse(meta_payload.begin(), meta_payload.end());
    } catch (const nlohmann::json::exception& e) {
        raise("TruncatedPayload", std::string("metadata is not valid JSON: ") + e.what());
    }

    Archive archive{meta_from_json(meta_json), {}};
    const std::uint64_t block_count = r.u64();
    for (std::uint64_t b = 0; b < block_count; ++b) {
        const auto payload = read_section(r);
        Reader br(payload.data(), payload.size());
        const bool coarse = *br.bytes(1) != 0;
        auto union_indices = read_index_array(br);
        auto skeleton_indices = read_index_array(br);
        DenseMatrix skeleton = read_matrix(br);
        DenseMatrix coeffs = read_matrix(br);
        if (!br.exhausted())
            raise("TruncatedPayload", "trailing bytes in block section");
        archive.blocks.push_back({std::move(union_indices), std::move(skeleton_indices),
                                  std::move(skeleton), std::move(coeffs), coarse});
    }
    if (!r.exhausted())
        raise("TruncatedPayload", "trailing bytes after the last section");
    return archive;
}

void write_archive_file(const std::string& path, const Archive& archive) {
    const auto bytes = encode(archive);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise("IoError", "cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) raise("IoError", "short write to " + path);
}

Archive read_archive_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) raise("IoError", "cannot open " + path);
    const std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (in.gcount() != size) raise("IoError", "short read from " + path);
    return decode(bytes);
}

std::string archive_info_json(const Archive& archive) {
    nlohmann::json j = meta_to_json(archive.meta);
    j["block_count"] = archive.blocks.size();
    j["block_ranks"] = archive.block_ranks();
    j["stored_entries"] = archive.stored_entries();
    j["compression_factor"] =
        compression_factor(archive.meta.m, archive.meta.n, archive.stored_entries());
    return j.dump(2);
}

DenseMatrix decompress(const Archive& archive) {
    const auto domains = make_block_domains(archive.meta.grid, archive.meta.blocks_per_axis);
    if (domains.size() != archive.blocks.size())
        raise("CoverageGap", "block count does not match the partition plan");

    std::vector<std::pair<std::vector<std::size_t>, DenseMatrix>> parts;
    parts.reserve(domains.size());
    for (std::size_t b = 0; b < domains.size(); ++b) {
        const ArchiveBlock& block = archive.blocks[b];
        if (block.coarse_skeleton) {
            if (archive.meta.interp_recipe != "strided-multilinear")
                raise("UnstructuredNoInterp", "coarse skeleton without an interpolation recipe");
            const auto spec = SubsampleSpec::strided(domains[b].local, archive.meta.strides,
                                                     archive.meta.include_boundary);
            const InterpOperator lift = build_interpolator(spec);
            parts.emplace_back(domains[b].rows,
                               matmul(lift.apply(block.skeleton), block.coeffs));
        } else {
            parts.emplace_back(domains[b].rows, matmul(block.skeleton, block.coeffs));
        }
    }
    return assemble(parts);
}

QualityReport quality_report(const DenseMatrix& exact, const Archive& archive) {
    QualityReport report;
    report.stored_entries = archive.stored_entries();
    report.cf = compression_factor(archive.meta.m, archive.meta.n, report.stored_entries);
    report.rel_frob_error = rel_frob_error(exact, decompress(archive));
    report.block_ranks = archive.block_ranks();
    return report;
}

} // namespace spid
