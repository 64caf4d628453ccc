#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gsr {

/// Persistent worker pool dispatching chunk indices. Chunk boundaries are
/// fixed by the caller and independent of the worker count, so per-chunk
/// partial results merged in chunk order give bit-identical reductions
/// for any number of threads. Chunk functions must not throw.
class ChunkPool {
 public:
  static ChunkPool& instance() {
    static ChunkPool pool;
    return pool;
  }

  void run(std::size_t chunks, const std::function<void(std::size_t)>& fn) {
    if (chunks == 0) return;
    if (workers_.empty() || chunks == 1) {
      for (std::size_t c = 0; c < chunks; ++c) fn(c);
      return;
    }
    {
      std::lock_guard lock(mutex_);
      fn_ = &fn;
      chunks_ = chunks;
      next_.store(0, std::memory_order_relaxed);
      active_ = workers_.size();
      ++generation_;
    }
    cv_start_.notify_all();
    drain();
    {
      std::unique_lock lock(mutex_);
      cv_done_.wait(lock, [&] { return active_ == 0; });
      fn_ = nullptr;
    }
  }

  ChunkPool(const ChunkPool&) = delete;
  ChunkPool& operator=(const ChunkPool&) = delete;

 private:
  ChunkPool() {
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned extra = hw > 1 ? hw - 1 : 0;
    workers_.reserve(extra);
    for (unsigned w = 0; w < extra; ++w) {
      workers_.emplace_back([this] { worker_loop(); });
    }
  }

  ~ChunkPool() {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
    }
    cv_start_.notify_all();
    for (auto& t : workers_) t.join();
  }

  void drain() {
    for (;;) {
      const std::size_t c = next_.fetch_add(1, std::memory_order_relaxed);
      if (c >= chunks_) return;
      (*fn_)(c);
    }
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock lock(mutex_);
        cv_start_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      drain();
      {
        std::lock_guard lock(mutex_);
        if (--active_ == 0) cv_done_.notify_one();
      }
    }
  }

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable cv_start_;
  std::condition_variable cv_done_;
  const std::function<void(std::size_t)>* fn_ = nullptr;
  std::size_t chunks_ = 0;
  std::atomic<std::size_t> next_{0};
  std::size_t active_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

/// Runs fn(chunk_index, begin, end) over fixed-size chunks of [0, n).
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t chunk_size, Fn&& fn) {
  if (n == 0) return;
  const std::size_t chunks = (n + chunk_size - 1) / chunk_size;
  const std::function<void(std::size_t)> run = [&](std::size_t c) {
    fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
  };
  ChunkPool::instance().run(chunks, run);
}

}  // namespace gsr
