#include "spid/frames.hpp"

#include <bit>
#include <fstream>

#include "spid/json_io.hpp"

static_assert(std::endian::native == std::endian::little,
              "frame and archive formats are little-endian");

namespace spid {

std::string frame_sidecar_path(const std::string& data_path) { return data_path + ".json"; }

void write_frames(const std::string& data_path, const DenseMatrix& a,
                  const FrameFileInfo& info) {
    if (info.m != a.rows() || info.n != a.cols())
        raise("DimensionMismatch", "frame info does not match matrix shape");

    std::ofstream out(data_path, std::ios::binary | std::ios::trunc);
    if (!out) raise("IoError", "cannot open " + data_path + " for writing");
    out.write(reinterpret_cast<const char*>(a.data()),
              static_cast<std::streamsize>(a.entry_count() * sizeof(double)));
    if (!out) raise("IoError", "short write to " + data_path);
    out.close();

    nlohmann::json j;
    j["format"] = "spid-frames";
    j["version"] = 1;
    j["m"] = info.m;
    j["n"] = info.n;
    j["grid"] = grid_to_json(info.grid);
    j["qoi"] = info.qoi;
    j["dt"] = info.dt;
    j["provenance"] = info.provenance;

    std::ofstream meta(frame_sidecar_path(data_path), std::ios::trunc);
    if (!meta) raise("IoError", "cannot open sidecar for writing");
    meta << j.dump(2) << '\n';
}

FrameFileInfo read_frame_info(const std::string& sidecar_path) {
    std::ifstream in(sidecar_path);
    if (!in) raise("IoError", "cannot open " + sidecar_path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        raise("BadSidecar", std::string("sidecar is not valid JSON: ") + e.what());
    }
    if (j.value("format", "") != "spid-frames")
        raise("BadSidecar", "not a spid-frames sidecar");
    FrameFileInfo info;
    info.m = j.at("m").get<std::size_t>();
    info.n = j.at("n").get<std::size_t>();
    info.grid = grid_from_json(j.at("grid"));
    info.qoi = j.value("qoi", "");
    info.dt = j.value("dt", 0.0);
    info.provenance = j.value("provenance", "");
    if (info.grid.point_count() != info.m)
        raise("GeometryMismatch", "sidecar grid size disagrees with frame size");
    return info;
}

DenseMatrix read_frames(const std::string& data_path, FrameFileInfo* info_out) {
    FrameFileInfo info = read_frame_info(frame_sidecar_path(data_path));
    std::ifstream in(data_path, std::ios::binary);
    if (!in) raise("IoError", "cannot open " + data_path);
    DenseMatrix a(info.m, info.n);
    in.read(reinterpret_cast<char*>(a.data()),
            static_cast<std::streamsize>(a.entry_count() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(a.entry_count() * sizeof(double)))
        raise("TruncatedPayload", "frame file shorter than sidecar promises");
    if (info_out) *info_out = std::move(info);
    return a;
}

FrameFileProducer::FrameFileProducer(const std::string& data_path,
                                     const std::string& sidecar_path)
    : info_(read_frame_info(sidecar_path)) {
    file_ = std::fopen(data_path.c_str(), "rb");
    if (!file_) raise("IoError", "cannot open " + data_path);
}

FrameFileProducer::~FrameFileProducer() {
    if (file_) std::fclose(file_);
}

bool FrameFileProducer::next(std::span<double> frame) {
    if (served_ == info_.n) return false;
    if (frame.size() != info_.m)
        raise("DimensionMismatch", "frame buffer size does not match frame size");
    const std::size_t got = std::fread(frame.data(), sizeof(double), info_.m, file_);
    if (got != info_.m)
        raise("TruncatedPayload", "frame file ended mid-frame");
    ++served_;
    return true;
}

} // namespace spid
