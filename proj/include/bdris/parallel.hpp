// Copyright 2026 The bdris Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef BDRIS_PARALLEL_HPP
#define BDRIS_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bdris
{

// Runs fn(i) for i in [0, count) on a small worker pool. The first exception thrown by any
// task is rethrown on the calling thread after all workers finish.
template <typename Fn>
void ParallelFor(size_t count, Fn &&fn, unsigned max_workers = 0)
{
  unsigned workers = max_workers ? max_workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<size_t>(workers, count));
  if (workers <= 1)
  {
    for (size_t i = 0; i < count; i++)
    {
      fn(i);
    }
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; w++)
  {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++)
      {
        try
        {
          fn(i);
        }
        catch (...)
        {
          std::lock_guard lock(error_mutex);
          if (!error)
          {
            error = std::current_exception();
          }
        }
      }
    });
  }
  pool.clear();
  if (error)
  {
    std::rethrow_exception(error);
  }
}

}  // namespace bdris

#endif  // BDRIS_PARALLEL_HPP
