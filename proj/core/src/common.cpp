#include "charflow/common.hpp"

#include <cstdio>
#include <thread>

namespace charflow {

void parallel_shards(std::size_t n, int shards,
                     const std::function<void(int, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (shards < 1) shards = 1;
  const auto s = static_cast<std::size_t>(shards);
  if (s == 1 || n < s) {
    fn(0, 0, n);
    return;
  }
  const std::size_t base = n / s;
  const std::size_t rem = n % s;
  std::vector<std::thread> workers;
  workers.reserve(s);
  std::size_t begin = 0;
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t len = base + (i < rem ? 1 : 0);
    const std::size_t end = begin + len;
    workers.emplace_back([&fn, i, begin, end] { fn(static_cast<int>(i), begin, end); });
    begin = end;
  }
  for (auto& w : workers) w.join();
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace charflow
