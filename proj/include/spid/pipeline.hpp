#pragma once

#include "spid/archive.hpp"
#include "spid/producer.hpp"

namespace spid {

/// Configuration of the streaming two-stage compressor. Snapshots are split
/// across the plan's spatial blocks, subsampled per block, and buffered into
/// temporal chunks of plan.time_chunk columns; each chunk closing launches a
/// stage-1 task while ingestion continues. Stage 2 runs per block after the
/// stream ends.
struct StreamConfig {
    PartitionPlan plan;
    std::vector<std::size_t> strides;
    bool include_boundary = true;
    std::size_t stage1_rank = 1;
    double stage2_tol = 1e-6;
    std::size_t workers = 1; // 1 = serial in-line execution
    std::string qoi;
    std::string provenance;
};

struct TaskEvent {
    enum class Kind { SnapshotIngested, ChunkClosed, Stage1Done, Stage2Done };

    Kind kind;
    std::int64_t block = -1; // -1 for stream-level events
    std::int64_t chunk = -1; // snapshot index for SnapshotIngested
    double wall_time = 0.0;  // seconds since pipeline start, at emission
    double duration = 0.0;   // producer / compute seconds for Ingested and Done
};

/// Allocation accounting for the pipeline's buffers, in matrix entries.
/// Fine-grid storage is the single-pass contract: it never exceeds one
/// snapshot; coarse chunk buffers are tracked separately.
struct BufferStats {
    std::size_t fine_entries_now = 0;
    std::size_t fine_entries_peak = 0;
    std::size_t coarse_entries_now = 0;
    std::size_t coarse_entries_peak = 0;
};

struct PipelineResult {
    Archive archive;
    std::vector<TaskEvent> events;
    BufferStats buffers;
};

PipelineResult run_pipeline(SnapshotProducer& producer, const StreamConfig& config);

struct OverlapReport {
    double overlap_fraction = 0.0;   // of stage-1 compute time inside producer activity
    double stage1_busy_seconds = 0.0;
    double producer_busy_seconds = 0.0;
};

/// Diagnostic only: how much of the stage-1 compute time ran while the
/// producer was itself busy producing snapshots.
OverlapReport overlap_report(const std::vector<TaskEvent>& events);

} // namespace spid
