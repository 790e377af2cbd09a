#pragma once

#include <cstdio>
#include <memory>
#include <string>

#include "spid/grid.hpp"
#include "spid/producer.hpp"

namespace spid {

/// Raw snapshot interchange: a flat file of 64-bit little-endian IEEE-754
/// values, m per frame, frames in time order, described by a JSON sidecar
/// (`<path>.json`) carrying m, n, the grid and provenance.
struct FrameFileInfo {
    std::size_t m = 0;
    std::size_t n = 0;
    GridGeom grid;
    std::string qoi;
    double dt = 0.0;
    std::string provenance;
};

std::string frame_sidecar_path(const std::string& data_path);

void write_frames(const std::string& data_path, const DenseMatrix& a, const FrameFileInfo& info);
FrameFileInfo read_frame_info(const std::string& sidecar_path);
DenseMatrix read_frames(const std::string& data_path, FrameFileInfo* info_out = nullptr);

/// Streams frames straight off disk, one at a time.
class FrameFileProducer : public SnapshotProducer {
public:
    FrameFileProducer(const std::string& data_path, const std::string& sidecar_path);
    ~FrameFileProducer() override;

    std::size_t frame_size() const override { return info_.m; }
    bool next(std::span<double> frame) override;

    const FrameFileInfo& info() const { return info_; }

private:
    FrameFileInfo info_;
    std::FILE* file_ = nullptr;
    std::size_t served_ = 0;
};

} // namespace spid
