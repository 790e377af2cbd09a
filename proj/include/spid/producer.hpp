#pragma once

#include <span>

#include "spid/dense_matrix.hpp"

namespace spid {

/// Pull-based source of snapshot frames, one m-vector per time step, in time
/// order. The pipeline owns no more than one fine frame at a time.
class SnapshotProducer {
public:
    virtual ~SnapshotProducer() = default;

    virtual std::size_t frame_size() const = 0;

    /// Fill `frame` (frame_size() values) with the next snapshot.
    /// Returns false when the stream is exhausted.
    virtual bool next(std::span<double> frame) = 0;
};

/// Streams the columns of an in-memory matrix.
class MatrixProducer : public SnapshotProducer {
public:
    explicit MatrixProducer(const DenseMatrix& a) : a_(a) {}

    std::size_t frame_size() const override { return a_.rows(); }

    bool next(std::span<double> frame) override {
        if (at_ == a_.cols()) return false;
        const double* src = a_.col(at_++);
        for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = src[i];
        return true;
    }

private:
    const DenseMatrix& a_;
    std::size_t at_ = 0;
};

} // namespace spid
