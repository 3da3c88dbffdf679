#include "sunet/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace sunet {
namespace {

int default_threads() {
  if (const char* env = std::getenv("SUNET_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Lazily started pool. Workers block on a generation counter; each
// parallel_for bumps it once and waits for all workers to check in.
class Pool {
public:
  static Pool& instance() {
    static Pool pool;
    return pool;
  }

  void resize(int n) {
    std::lock_guard<std::mutex> lk(resize_mu_);
    if (n <= 0) n = default_threads();
    if (n == threads_) return;
    stop_workers();
    threads_ = n;
    start_workers();
  }

  int threads() const { return threads_; }

  void run(std::int64_t n,
           const std::function<void(std::int64_t, std::int64_t)>& fn,
           std::int64_t grain) {
    int nthreads = threads_;
    if (grain < 1) grain = 1;
    const std::int64_t max_chunks = (n + grain - 1) / grain;
    if (max_chunks < nthreads) nthreads = static_cast<int>(max_chunks);
    if (nthreads <= 1) {
      if (n > 0) fn(0, n);
      return;
    }
    std::lock_guard<std::mutex> lk(resize_mu_);
    job_fn_ = &fn;
    job_n_ = n;
    job_threads_ = nthreads;
    // Every helper checks in once per generation, whether or not it owned a
    // chunk, so completion cannot be signalled early.
    pending_.store(threads_ - 1, std::memory_order_relaxed);
    {
      std::lock_guard<std::mutex> g(mu_);
      ++generation_;
    }
    cv_.notify_all();
    run_chunk(0);
    // Wait for the helpers; spin briefly first since chunks are short.
    std::unique_lock<std::mutex> g(done_mu_);
    done_cv_.wait(g, [&] { return pending_.load(std::memory_order_acquire) == 0; });
    job_fn_ = nullptr;
  }

private:
  Pool() { threads_ = default_threads(); start_workers(); }

  ~Pool() { stop_workers(); }

  void run_chunk(int idx) {
    const std::int64_t n = job_n_;
    const int k = job_threads_;
    const std::int64_t lo = n * idx / k;
    const std::int64_t hi = n * (idx + 1) / k;
    if (lo < hi) (*job_fn_)(lo, hi);
  }

  void worker_main(int worker_idx) {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock<std::mutex> g(mu_);
        cv_.wait(g, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
      }
      if (worker_idx + 1 < job_threads_) run_chunk(worker_idx + 1);
      if (pending_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
        std::lock_guard<std::mutex> g(done_mu_);
        done_cv_.notify_one();
      }
    }
  }

  void start_workers() {
    stop_ = false;
    for (int i = 0; i + 1 < threads_; ++i)
      workers_.emplace_back([this, i] { worker_main(i); });
  }

  void stop_workers() {
    {
      std::lock_guard<std::mutex> g(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : workers_) t.join();
    workers_.clear();
  }

  std::mutex resize_mu_;
  std::vector<std::thread> workers_;
  int threads_ = 1;

  std::mutex mu_;
  std::condition_variable cv_;
  std::uint64_t generation_ = 0;
  bool stop_ = false;

  const std::function<void(std::int64_t, std::int64_t)>* job_fn_ = nullptr;
  std::int64_t job_n_ = 0;
  int job_threads_ = 1;
  std::atomic<int> pending_{0};
  std::mutex done_mu_;
  std::condition_variable done_cv_;
};

}  // namespace

void set_threads(int n) { Pool::instance().resize(n); }

int thread_count() { return Pool::instance().threads(); }

void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& fn,
                  std::int64_t grain) {
  Pool::instance().run(n, fn, grain);
}

}  // namespace sunet
