// Copyright 2026 The evtgd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVTGD_PARALLEL_H_
#define EVTGD_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace evtgd {

// Splits [0, n) into `workers` contiguous shards and runs
// fn(shard, begin, end) for each on its own thread. The first exception
// thrown by any shard is rethrown on the caller's thread.
template <typename Fn>
void ForEachShard(std::size_t n, int workers, Fn &&fn) {
  const std::size_t shards = std::max(1, workers);
  if (shards == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> threads;
    threads.reserve(shards);
    for (std::size_t s = 0; s < shards; ++s) {
      const std::size_t begin = n * s / shards;
      const std::size_t end = n * (s + 1) / shards;
      threads.emplace_back([&, s, begin, end] {
        try {
          fn(s, begin, end);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

// Runs fn(i) for every i in [0, n) across `workers` threads. Items are
// claimed dynamically, so fn must not depend on execution order.
template <typename Fn>
void ParallelFor(std::size_t n, int workers, Fn &&fn) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  ForEachShard(std::size_t(workers), workers,
               [&](std::size_t, std::size_t, std::size_t) {
                 for (std::size_t i = next++; i < n; i = next++) fn(i);
               });
}

}  // namespace evtgd

#endif  // EVTGD_PARALLEL_H_
