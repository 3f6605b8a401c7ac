#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace genus3 {

// Worker count used by the counting and search kernels; 0 selects the
// hardware concurrency.
void set_parallelism(unsigned jobs);
unsigned parallelism();

// Sums fn(begin, end) over a partition of [0, n). Chunk boundaries depend only
// on n and the worker count and the reduction is an integer sum, so the result
// does not depend on scheduling.
template <class Fn>
std::int64_t parallel_sum(std::uint64_t n, Fn&& fn) {
  const unsigned jobs = std::max<unsigned>(1, std::min<std::uint64_t>(parallelism(), n / 4096 + 1));
  if (jobs == 1) return fn(std::uint64_t{0}, n);
  std::vector<std::int64_t> partial(jobs, 0);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (unsigned w = 0; w < jobs; ++w) {
    const std::uint64_t b = n * w / jobs, e = n * (w + 1) / jobs;
    workers.emplace_back([&, w, b, e] { partial[w] = fn(b, e); });
  }
  for (auto& t : workers) t.join();
  std::int64_t total = 0;
  for (auto v : partial) total += v;
  return total;
}

}  // namespace genus3
