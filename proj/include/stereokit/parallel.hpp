#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace stereo {

/// Parallel-map capability injected into library operations. A ParallelFor
/// runs body(i) for every i in [0, count) and returns only after all
/// iterations completed (fork-join). Implementations must not change results:
/// every body writes a disjoint output slice and reads immutable inputs, so
/// output bits are identical for any worker count.
using ParallelFor =
    std::function<void(std::size_t, const std::function<void(std::size_t)>&)>;

/// Executes iterations inline on the calling thread.
const ParallelFor& serial_for();

/// Fork-join pool with persistent worker threads. The constructing thread
/// acts as the master: it partitions the index range, wakes the workers,
/// and joins them before returning from parallel_for.
class WorkerPool {
 public:
  /// workers == 0 selects std::thread::hardware_concurrency().
  explicit WorkerPool(unsigned workers = 0);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  unsigned worker_count() const noexcept { return workers_; }

  void parallel_for(std::size_t count,
                    const std::function<void(std::size_t)>& body);

  /// Adapter so the pool can be passed wherever a ParallelFor is expected.
  ParallelFor executor();

 private:
  struct Job {
    std::size_t count = 0;
    std::size_t chunk = 1;
    const std::function<void(std::size_t)>* body = nullptr;
  };

  void worker_loop();
  void run_chunks();

  unsigned workers_ = 1;
  std::vector<std::thread> threads_;

  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  Job job_;
  std::size_t next_index_ = 0;
  unsigned active_ = 0;
  unsigned long long generation_ = 0;
  bool stop_ = false;
  std::exception_ptr failure_;
};

}  // namespace stereo
