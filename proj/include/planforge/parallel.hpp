#pragma once

#include <atomic>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace planforge {

/// Worker count actually used for a requested thread count: never more than
/// the work items or the host's CPUs. Oversubscribing a small host trades
/// cache locality for scheduler churn with nothing in return. Reductions in
/// this codebase resolve ties toward the lowest index, which makes results
/// independent of how [0, n) is chunked, so the cap cannot change output.
inline int effective_workers(std::size_t n, int threads) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t cap = std::min<std::size_t>(std::max<std::size_t>(n, 1),
                                                static_cast<std::size_t>(hw));
  return std::max(1, std::min<int>(threads, static_cast<int>(cap)));
}

/// Splits [0, n) into contiguous chunks, one per worker. fn(chunk, begin, end)
/// runs on its own thread; chunk boundaries depend only on n and threads, so
/// deterministic reductions can merge per-chunk results in chunk order.
inline void parallel_chunks(std::size_t n, int threads,
                            const std::function<void(int, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  const int workers = effective_workers(n, threads);
  if (workers == 1) {
    fn(0, 0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    std::size_t begin = w * chunk;
    std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(fn, w, begin, end);
  }
  for (auto& t : pool) t.join();
}

/// Persistent worker pool over a fixed range [0, n): threads start once, and
/// each run() call is fenced by spin-synchronized epochs. Tight loops that
/// dispatch microsecond-scale work per iteration (farthest-point sampling
/// does one dispatch per seed) would be dominated by thread spawns or futex
/// wakeups otherwise. Chunk boundaries match parallel_chunks, so reductions
/// in chunk order stay deterministic.
class WorkerPool {
 public:
  WorkerPool(std::size_t n, int threads) : n_(n), workers_(effective_workers(n, threads)) {
    if (workers_ > 1) {
      remaining_.store(0, std::memory_order_relaxed);
      threads_.reserve(workers_);
      for (int w = 0; w < workers_; ++w) {
        threads_.emplace_back([this, w] { loop(w); });
      }
    }
  }

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  ~WorkerPool() {
    if (workers_ > 1) {
      stop_.store(true, std::memory_order_release);
      epoch_.fetch_add(1, std::memory_order_release);
      for (auto& t : threads_) t.join();
    }
  }

  int workers() const { return workers_; }

  void run(const std::function<void(int, std::size_t, std::size_t)>& fn) {
    if (n_ == 0) return;
    if (workers_ == 1) {
      fn(0, 0, n_);
      return;
    }
    fn_ = &fn;
    remaining_.store(workers_, std::memory_order_relaxed);
    epoch_.fetch_add(1, std::memory_order_release);
    while (remaining_.load(std::memory_order_acquire) != 0) {
      std::this_thread::yield();
    }
  }

 private:
  void loop(int w) {
    const std::size_t chunk = (n_ + workers_ - 1) / workers_;
    const std::size_t lo = std::min(n_, static_cast<std::size_t>(w) * chunk);
    const std::size_t hi = std::min(n_, lo + chunk);
    std::uint64_t seen = 0;
    while (true) {
      while (epoch_.load(std::memory_order_acquire) == seen) {
        // Dispatch gaps are far shorter than a sleep/wake cycle; yield keeps
        // the wait civil if the scheduler has fewer cores than workers.
        std::this_thread::yield();
      }
      ++seen;
      if (stop_.load(std::memory_order_acquire)) return;
      if (lo < hi) (*fn_)(w, lo, hi);
      remaining_.fetch_sub(1, std::memory_order_release);
    }
  }

  std::size_t n_;
  int workers_;
  const std::function<void(int, std::size_t, std::size_t)>* fn_ = nullptr;
  std::atomic<std::uint64_t> epoch_{0};
  std::atomic<int> remaining_{0};
  std::atomic<bool> stop_{false};
  std::vector<std::thread> threads_;
};

}  // namespace planforge
