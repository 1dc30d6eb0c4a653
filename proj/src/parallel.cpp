#include "stereokit/parallel.hpp"

#include <algorithm>

namespace stereo {

const ParallelFor& serial_for() {
  static const ParallelFor run = [](std::size_t count,
                                    const std::function<void(std::size_t)>& body) {
    for (std::size_t i = 0; i < count; ++i) body(i);
  };
  return run;
}

WorkerPool::WorkerPool(unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers_ = workers;
  // The master thread participates, so only workers-1 helpers are spawned.
  threads_.reserve(workers_ - 1);
  for (unsigned i = 0; i + 1 < workers_; ++i)
    threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stop_ = true;
  }
  start_cv_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkerPool::worker_loop() {
  unsigned long long seen = 0;
  for (;;) {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      start_cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) return;
      seen = generation_;
    }
    run_chunks();
    {
      std::lock_guard<std::mutex> lock(mutex_);
      --active_;
    }
    done_cv_.notify_one();
  }
}

void WorkerPool::run_chunks() {
  for (;;) {
    std::size_t begin, end;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (failure_ || next_index_ >= job_.count) return;
      begin = next_index_;
      end = std::min(begin + job_.chunk, job_.count);
      next_index_ = end;
    }
    try {
      for (std::size_t i = begin; i < end; ++i) (*job_.body)(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!failure_) failure_ = std::current_exception();
      return;
    }
  }
}

void WorkerPool::parallel_for(std::size_t count,
                              const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  if (threads_.empty()) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    job_.count = count;
    job_.chunk = std::max<std::size_t>(1, count / (workers_ * 4u));
    job_.body = &body;
    next_index_ = 0;
    failure_ = nullptr;
    active_ = static_cast<unsigned>(threads_.size());
    ++generation_;
  }
  start_cv_.notify_all();
  run_chunks();
  std::exception_ptr failure;
  {
    std::unique_lock<std::mutex> lock(mutex_);
    done_cv_.wait(lock, [&] { return active_ == 0; });
    failure = failure_;
    failure_ = nullptr;
    job_.body = nullptr;
  }
  if (failure) std::rethrow_exception(failure);
}

ParallelFor WorkerPool::executor() {
  return [this](std::size_t count, const std::function<void(std::size_t)>& body) {
    parallel_for(count, body);
  };
}

}  // namespace stereo
