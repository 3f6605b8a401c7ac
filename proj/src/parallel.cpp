#include "genus3/parallel.hpp"

#include <atomic>

namespace genus3 {

namespace {
std::atomic<unsigned> g_jobs{0};
}

void set_parallelism(unsigned jobs) { g_jobs = jobs; }

unsigned parallelism() {
  const unsigned j = g_jobs.load();
  if (j != 0) return j;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace genus3
