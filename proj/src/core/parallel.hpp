#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace polyjump {

// Runs fn(begin, end) over contiguous chunks of [0, count). Each index is
// visited exactly once, so per-index outputs do not depend on `workers`.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn, std::size_t min_parallel = 2048) {
  if (workers <= 1 || count < min_parallel) {
    fn(std::size_t{0}, count);
    return;
  }
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  const std::size_t chunk = (count + nw - 1) / nw;
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

// Fixed-block reduction: partial sums over blocks of kReduceBlock entries are
// combined in block order, giving bit-identical results for any worker count.
inline constexpr std::size_t kReduceBlock = 4096;

template <class Term>
double blocked_sum(std::size_t count, int workers, Term&& term) {
  const std::size_t nblocks = (count + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(nblocks, 0.0);
  parallel_for(
      nblocks, workers,
      [&](std::size_t b0, std::size_t b1) {
        for (std::size_t b = b0; b < b1; ++b) {
          const std::size_t lo = b * kReduceBlock;
          const std::size_t hi = std::min(count, lo + kReduceBlock);
          double s = 0.0;
          for (std::size_t i = lo; i < hi; ++i) s += term(i);
          partial[b] = s;
        }
      },
      4);
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace polyjump
