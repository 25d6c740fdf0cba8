#include "rqcsim/thread_pool.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <memory>
#include <string>

namespace rqcsim {
namespace {
thread_local bool tl_in_worker = false;
}

ThreadPool::ThreadPool(std::size_t threads) {
  std::size_t extra = threads > 1 ? threads - 1 : 0;
  workers_.reserve(extra);
  for (std::size_t i = 0; i < extra; ++i) workers_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  for (auto& w : workers_) w.join();
}

void ThreadPool::worker_loop() {
  tl_in_worker = true;
  while (true) {
    std::function<void()> task;
    {
      std::unique_lock<std::mutex> lock(mu_);
      cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
      if (stop_ && queue_.empty()) return;
      task = std::move(queue_.front());
      queue_.pop_front();
    }
    task();
  }
}

std::size_t ThreadPool::chunk_count(std::size_t n, std::size_t min_chunk) const {
  if (n == 0) return 0;
  min_chunk = std::max<std::size_t>(1, min_chunk);
  std::size_t by_size = (n + min_chunk - 1) / min_chunk;
  return std::max<std::size_t>(1, std::min(size(), by_size));
}

void ThreadPool::parallel_for(std::size_t n, const RangeFn& body, std::size_t min_chunk) {
  if (n == 0) return;
  std::size_t chunks = chunk_count(n, min_chunk);
  if (chunks <= 1 || tl_in_worker) {
    body(0, n);
    return;
  }

  // Helpers may start after the caller already returned; they only touch
  // this shared state once every chunk has been claimed.
  struct State {
    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::exception_ptr error;
    std::mutex mu;
    std::condition_variable cv;
  };
  auto state = std::make_shared<State>();
  const RangeFn* fn = &body;

  auto run_chunks = [state, fn, n, chunks] {
    while (true) {
      std::size_t c = state->next.fetch_add(1);
      if (c >= chunks) return;
      std::exception_ptr err;
      try {
        (*fn)(n * c / chunks, n * (c + 1) / chunks);
      } catch (...) {
        err = std::current_exception();
      }
      std::lock_guard<std::mutex> lock(state->mu);
      if (err && !state->error) state->error = err;
      if (++state->done == chunks) state->cv.notify_all();
    }
  };

  {
    std::lock_guard<std::mutex> lock(mu_);
    for (std::size_t i = 1; i < chunks; ++i) queue_.emplace_back(run_chunks);
  }
  cv_.notify_all();

  bool was_worker = tl_in_worker;
  tl_in_worker = true;
  run_chunks();
  tl_in_worker = was_worker;

  std::unique_lock<std::mutex> lock(state->mu);
  state->cv.wait(lock, [&] { return state->done == chunks; });
  if (state->error) std::rethrow_exception(state->error);
}

std::size_t ThreadPool::default_threads() {
  if (const char* env = std::getenv("RQCSIM_THREADS")) {
    try {
      long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return std::max<unsigned>(1, std::thread::hardware_concurrency());
}

}  // namespace rqcsim
