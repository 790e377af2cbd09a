#include "spid/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

namespace spid {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

// Bounded FIFO worker pool. A size of zero runs submitted work in-line,
// which is the serial executor.
class TaskPool {
public:
    explicit TaskPool(std::size_t threads) {
        for (std::size_t i = 0; i < threads; ++i)
            threads_.emplace_back([this] { work(); });
    }

    ~TaskPool() {
        {
            std::unique_lock lock(mutex_);
            done_ = true;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    void submit(std::function<void()> task) {
        if (threads_.empty()) {
            task();
            return;
        }
        {
            std::unique_lock lock(mutex_);
            queue_.push_back(std::move(task));
        }
        cv_.notify_one();
    }

    void drain() {
        if (threads_.empty()) return;
        std::unique_lock lock(mutex_);
        idle_cv_.wait(lock, [this] { return queue_.empty() && running_ == 0; });
    }

private:
    void work() {
        for (;;) {
            std::function<void()> task;
            {
                std::unique_lock lock(mutex_);
                cv_.wait(lock, [this] { return done_ || !queue_.empty(); });
                if (done_ && queue_.empty()) return;
                task = std::move(queue_.front());
                queue_.pop_front();
                ++running_;
            }
            task();
            {
                std::unique_lock lock(mutex_);
                --running_;
                if (queue_.empty() && running_ == 0) idle_cv_.notify_all();
            }
        }
    }

    std::vector<std::thread> threads_;
    std::deque<std::function<void()>> queue_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::condition_variable idle_cv_;
    std::size_t running_ = 0;
    bool done_ = false;
};

struct BlockState {
    std::vector<std::size_t> coarse_global_rows; // fine row indices feeding the sketch
    std::size_t coarse_rows = 0;
    bool coarse_skeleton = false;

    std::vector<double> open_chunk; // column-major coarse buffer
    std::size_t filled_cols = 0;
    std::size_t next_chunk_id = 0;

    std::mutex result_mutex;
    std::map<std::size_t, IdFactors> stage1_results;
    std::size_t pending = 0; // closed chunks not yet compressed
};

} // namespace

PipelineResult run_pipeline(SnapshotProducer& producer, const StreamConfig& config) {
    const GridGeom& geom = config.plan.geom;
    if (geom.kind != GridGeom::Kind::Structured)
        raise("UnstructuredNoInterp",
              "the streaming pipeline needs a structured grid; use the batch path");
    if (config.plan.time_chunk < 1)
        raise("BadStreamConfig", "time_chunk must be >= 1");
    if (config.stage1_rank < 1)
        raise("BadStreamConfig", "stage-1 rank must be >= 1");

    const std::size_t m = geom.point_count();
    if (producer.frame_size() != m)
        raise("GeometryMismatch", "producer frame size does not match grid");

    const auto domains = make_block_domains(geom, config.plan.blocks_per_axis);
    const std::size_t n_blocks = domains.size();
    const std::size_t chunk_cols = config.plan.time_chunk;

    std::vector<std::unique_ptr<BlockState>> blocks;
    blocks.reserve(n_blocks);
    BufferStats stats;
    auto account = [](std::size_t& now, std::size_t& peak, std::size_t delta) {
        now += delta;
        peak = std::max(peak, now);
    };

    for (const auto& domain : domains) {
        auto state = std::make_unique<BlockState>();
        const auto spec =
            SubsampleSpec::strided(domain.local, config.strides, config.include_boundary);
        const auto local_rows = spec.row_indices();
        state->coarse_rows = local_rows.size();
        state->coarse_skeleton = state->coarse_rows < domain.rows.size();
        state->coarse_global_rows.reserve(local_rows.size());
        for (std::size_t r : local_rows) state->coarse_global_rows.push_back(domain.rows[r]);
        state->open_chunk.assign(state->coarse_rows * chunk_cols, 0.0);
        account(stats.coarse_entries_now, stats.coarse_entries_peak,
                state->coarse_rows * chunk_cols);
        blocks.push_back(std::move(state));
    }

    const Clock::time_point start = Clock::now();
    std::mutex event_mutex;
    std::vector<TaskEvent> events;
    auto emit = [&](TaskEvent::Kind kind, std::int64_t block, std::int64_t chunk,
                    double duration) {
        std::unique_lock lock(event_mutex);
        events.push_back({kind, block, chunk, seconds_between(start, Clock::now()), duration});
    };

    // Stage-1 failures abort the run once ingestion and workers settle.
    std::mutex failure_mutex;
    std::string failure_name, failure_what;
    auto record_failure = [&](std::size_t block, std::size_t chunk, const Error& e) {
        std::unique_lock lock(failure_mutex);
        if (failure_name.empty()) {
            failure_name = e.name();
            failure_what = "stage-1 failed on block " + std::to_string(block) + ", chunk " +
                           std::to_string(chunk) + ": " + e.what();
        }
    };

    std::mutex backpressure_mutex;
    std::condition_variable backpressure_cv;

    TaskPool pool(config.workers >= 2 ? config.workers : 0);

    auto close_chunk = [&](std::size_t b) {
        BlockState& state = *blocks[b];
        if (state.filled_cols == 0) return;
        const std::size_t chunk_id = state.next_chunk_id++;
        const std::size_t cols = state.filled_cols;

        DenseMatrix chunk(state.coarse_rows, cols);
        std::copy_n(state.open_chunk.data(), state.coarse_rows * cols, chunk.data());
        state.filled_cols = 0;

        // At most 2 closed chunks may be pending per block; ingestion stalls
        // here until a worker catches up, bounding coarse buffer memory.
        {
            std::unique_lock lock(backpressure_mutex);
            backpressure_cv.wait(lock, [&] { return state.pending < 2; });
            ++state.pending;
            account(stats.coarse_entries_now, stats.coarse_entries_peak, chunk.entry_count());
        }
        emit(TaskEvent::Kind::ChunkClosed, static_cast<std::int64_t>(b),
             static_cast<std::int64_t>(chunk_id), 0.0);

        pool.submit([&, b, chunk_id, chunk = std::move(chunk)]() mutable {
            const Clock::time_point t0 = Clock::now();
            try {
                IdFactors factors = stage1_compress_coarse(chunk, config.stage1_rank);
                {
                    std::unique_lock lock(blocks[b]->result_mutex);
                    blocks[b]->stage1_results.emplace(chunk_id, std::move(factors));
                }
            } catch (const Error& e) {
                record_failure(b, chunk_id, e);
            } catch (const std::exception& e) {
                record_failure(b, chunk_id, Error("Stage1Failure", e.what()));
            }
            const std::size_t released = chunk.entry_count();
            {
                std::unique_lock lock(backpressure_mutex);
                --blocks[b]->pending;
                stats.coarse_entries_now -= released;
            }
            backpressure_cv.notify_all();
            emit(TaskEvent::Kind::Stage1Done, static_cast<std::int64_t>(b),
                 static_cast<std::int64_t>(chunk_id),
                 seconds_between(t0, Clock::now()));
        });
    };

    // ---- ingestion loop ------------------------------------------------------

    std::vector<double> fine(m);
    account(stats.fine_entries_now, stats.fine_entries_peak, m);

    std::size_t n_snapshots = 0;
    try {
        for (;;) {
            const Clock::time_point t0 = Clock::now();
            if (!producer.next(fine)) break;
            const double produce_seconds = seconds_between(t0, Clock::now());
            emit(TaskEvent::Kind::SnapshotIngested, -1,
                 static_cast<std::int64_t>(n_snapshots), produce_seconds);

            for (std::size_t b = 0; b < n_blocks; ++b) {
                BlockState& state = *blocks[b];
                double* col = state.open_chunk.data() + state.filled_cols * state.coarse_rows;
                for (std::size_t i = 0; i < state.coarse_rows; ++i)
                    col[i] = fine[state.coarse_global_rows[i]];
                ++state.filled_cols;
                if (state.filled_cols == chunk_cols) close_chunk(b);
            }
            ++n_snapshots;
        }
    } catch (...) {
        pool.drain();
        throw; // ProducerError passthrough
    }

    if (n_snapshots == 0)
        raise("ShortStream", "producer yielded no snapshots");

    for (std::size_t b = 0; b < n_blocks; ++b) close_chunk(b); // final short chunks
    pool.drain();
    stats.fine_entries_now -= m;

    {
        std::unique_lock lock(failure_mutex);
        if (!failure_name.empty()) throw Error(failure_name, failure_what);
    }

    // ---- stage 2 and archive assembly ---------------------------------------

    Archive archive;
    archive.meta.grid = geom;
    archive.meta.blocks_per_axis = config.plan.blocks_per_axis;
    archive.meta.time_chunk = chunk_cols;
    archive.meta.strides = config.strides;
    archive.meta.include_boundary = config.include_boundary;
    archive.meta.mode = "two-stage";
    archive.meta.rank_rule_mode = "fixed";
    archive.meta.rank_k = config.stage1_rank;
    archive.meta.stage2_tol = config.stage2_tol;
    archive.meta.interp_recipe = "strided-multilinear";
    archive.meta.qoi = config.qoi;
    archive.meta.m = m;
    archive.meta.n = n_snapshots;
    archive.meta.provenance = config.provenance;

    for (std::size_t b = 0; b < n_blocks; ++b) {
        BlockState& state = *blocks[b];
        std::vector<IdFactors> stage1;
        stage1.reserve(state.stage1_results.size());
        for (auto& [id, factors] : state.stage1_results) stage1.push_back(std::move(factors));

        const Clock::time_point t0 = Clock::now();
        TwoStageFactors two = stage2_compress(std::move(stage1), config.stage2_tol);
        emit(TaskEvent::Kind::Stage2Done, static_cast<std::int64_t>(b), -1,
             seconds_between(t0, Clock::now()));

        archive.blocks.push_back({two.union_indices, two.final_skeleton_global(),
                                  std::move(two.final_skeleton), std::move(two.final_coeffs),
                                  state.coarse_skeleton});
    }

    return PipelineResult{std::move(archive), std::move(events), stats};
}

OverlapReport overlap_report(const std::vector<TaskEvent>& events) {
    if (events.empty()) raise("EmptyLog", "no events recorded");

    std::vector<std::pair<double, double>> producer;
    std::vector<std::pair<double, double>> stage1;
    for (const auto& e : events) {
        if (e.kind == TaskEvent::Kind::SnapshotIngested)
            producer.emplace_back(e.wall_time - e.duration, e.wall_time);
        else if (e.kind == TaskEvent::Kind::Stage1Done)
            stage1.emplace_back(e.wall_time - e.duration, e.wall_time);
    }

    std::sort(producer.begin(), producer.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : producer) {
        if (!merged.empty() && iv.first <= merged.back().second)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }

    OverlapReport report;
    for (const auto& [s, t] : merged) report.producer_busy_seconds += t - s;

    double overlap = 0.0;
    for (const auto& [s, t] : stage1) {
        report.stage1_busy_seconds += t - s;
        for (const auto& [ps, pt] : merged) {
            const double lo = std::max(s, ps);
            const double hi = std::min(t, pt);
            if (hi > lo) overlap += hi - lo;
        }
    }
    report.overlap_fraction =
        report.stage1_busy_seconds > 0.0 ? overlap / report.stage1_busy_seconds : 0.0;
    return report;
}

} // namespace spid
