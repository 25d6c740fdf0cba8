#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rqcsim {

// Fixed worker pool. parallel_for splits [0, n) into contiguous chunks and
// blocks until all of them ran; the calling thread works too. Calls made
// from inside a worker run inline, so nested parallelism never deadlocks.
class ThreadPool {
 public:
  explicit ThreadPool(std::size_t threads);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  std::size_t size() const { return workers_.size() + 1; }

  using RangeFn = std::function<void(std::size_t begin, std::size_t end)>;
  void parallel_for(std::size_t n, const RangeFn& body, std::size_t min_chunk = 1);

  // Number of chunks parallel_for would use; chunk c covers
  // [n*c/chunks, n*(c+1)/chunks).
  std::size_t chunk_count(std::size_t n, std::size_t min_chunk = 1) const;

  // Threads from RQCSIM_THREADS, else hardware concurrency, at least 1.
  static std::size_t default_threads();

 private:
  void worker_loop();

  std::vector<std::thread> workers_;
  std::deque<std::function<void()>> queue_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stop_ = false;
};

}  // namespace rqcsim
