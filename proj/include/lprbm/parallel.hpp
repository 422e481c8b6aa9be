#pragma once

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace lprbm {

// Runs fn(job) for job in [0, n_jobs) over at most n_threads workers.
// Jobs are claimed by fixed round-robin assignment (worker w takes jobs
// w, w+T, w+2T, ...), so any per-job outputs written to job-indexed slots
// are identical for every thread count.
inline void parallel_jobs(int n_jobs, int n_threads,
                          const std::function<void(int)>& fn) {
  if (n_threads < 1) n_threads = 1;
  if (n_threads == 1 || n_jobs <= 1) {
    for (int j = 0; j < n_jobs; ++j) fn(j);
    return;
  }
  const int workers = std::min(n_threads, n_jobs);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int j = w; j < n_jobs; j += workers) fn(j);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline int default_threads() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace lprbm
