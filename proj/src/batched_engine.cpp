// Throughput-oriented strategy. Producer threads push the stream through the
// Bucketizer; the calling thread dispatches every full batch, and after the
// stream ends every flushed partial batch, as one OpenMP loop in which each
// ligand is docked start to finish by a single thread.

#include <omp.h>

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

#include "engine_common.hpp"
#include "vscreen/engines.hpp"

namespace vscreen {

namespace {

class BatchQueue {
 public:
  void push(Batch batch) {
    {
      std::lock_guard lock(mu_);
      queue_.push_back(std::move(batch));
    }
    cv_.notify_one();
  }

  void close() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    cv_.notify_all();
  }

  /// Blocks until a batch is available; nullopt once closed and drained.
  std::optional<Batch> pop() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return closed_ || !queue_.empty(); });
    if (queue_.empty()) return std::nullopt;
    Batch b = std::move(queue_.front());
    queue_.pop_front();
    return b;
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Batch> queue_;
  bool closed_ = false;
};

void execute_batch(const Batch& batch, const ScreeningJob& job, int workers,
                   detail::ResultSlots& slots) {
  const auto count = static_cast<std::int64_t>(batch.ligands.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::int64_t i = 0; i < count; ++i) {
    detail::dock_into(job, batch.ligands[static_cast<std::size_t>(i)].sequence, slots);
  }
}

}  // namespace

BatchedEngine::BatchedEngine(int workers, BucketCapacities capacities, int producers)
    : workers_(workers), producers_(producers), capacities_(capacities) {
  if (workers < 1) throw std::invalid_argument("workers must be positive");
  if (producers < 1) throw std::invalid_argument("producers must be positive");
}

EngineReport BatchedEngine::run(const ScreeningJob& job) const {
  job.cfg.check();
  EngineReport report;
  report.engine = "batched";
  report.workers = workers_;

  const std::size_t n = job.ligands.size();
  detail::ResultSlots slots(n);
  Bucketizer bucketizer(capacities_);
  BatchQueue queue;
  std::atomic<std::size_t> next{0};
  std::atomic<int> active{producers_};
  std::exception_ptr producer_failure;
  std::mutex failure_mu;

  const auto t0 = std::chrono::steady_clock::now();
  {
    std::vector<std::jthread> producers;
    producers.reserve(static_cast<std::size_t>(producers_));
    for (int p = 0; p < producers_; ++p) {
      producers.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < n; i = next++) {
            if (auto full = bucketizer.push(job.ligands[i], i)) queue.push(std::move(*full));
          }
        } catch (...) {
          std::lock_guard lock(failure_mu);
          producer_failure = std::current_exception();
        }
        if (--active == 0) queue.close();
      });
    }
    while (auto batch = queue.pop()) execute_batch(*batch, job, workers_, slots);
  }
  if (producer_failure) std::rethrow_exception(producer_failure);

  for (const auto& batch : bucketizer.flush()) execute_batch(batch, job, workers_, slots);

  slots.finish(report, detail::seconds_since(t0));
  report.counters += bucketizer.dispatch_counters();
  report.dispatch_log = bucketizer.dispatch_log();
  return report;
}

}  // namespace vscreen
