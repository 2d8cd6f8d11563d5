#include "pfc3d/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

#include "pfc3d/error.hpp"

namespace pfc3d {

namespace {
std::atomic<int> g_threads{1};
}

int num_threads() { return g_threads.load(std::memory_order_relaxed); }

void set_num_threads(int n) {
  if (n < 1) throw ContractError("thread count must be >= 1");
  g_threads.store(n, std::memory_order_relaxed);
}

void parallel_for(int n, const std::function<void(int, int)>& body) {
  const int workers = std::min(num_threads(), n);
  if (workers <= 1) {
    if (n > 0) body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const int chunk = n / workers;
  const int extra = n % workers;
  int begin = 0;
  int first_end = 0;
  for (int w = 0; w < workers; ++w) {
    const int end = begin + chunk + (w < extra ? 1 : 0);
    if (w == 0) {
      first_end = end;
    } else {
      pool.emplace_back(body, begin, end);
    }
    begin = end;
  }
  body(0, first_end);
  for (auto& t : pool) t.join();
}

}  // namespace pfc3d
