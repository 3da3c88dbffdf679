// Persistent worker pool with a static-partition parallel_for. Iterations
// must be independent; partitioning never affects results, so any thread
// count yields identical output.
#pragma once

#include <cstdint>
#include <functional>

namespace sunet {

// Global thread count used by the kernel layer. 0 restores the default
// (hardware concurrency, overridable via the SUNET_THREADS environment
// variable).
void set_threads(int n);
int thread_count();

// Runs fn(begin, end) on contiguous chunks of [0, n). The calling thread
// executes the first chunk itself. Serial when n is small or one thread is
// configured.
void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& fn,
                  std::int64_t grain = 1);

}  // namespace sunet
